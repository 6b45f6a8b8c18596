"""Backend selection for the hot kernels.

The compiled extension ``_ckernels`` is used when it imports; otherwise the
numpy implementation in ``_pykernels`` takes over.  Setting the environment
variable ``QUATSYLV_BACKEND=python`` forces the fallback at import time, and
:func:`use_backend` switches at run time (tests and benchmarks use it).
"""

import contextlib
import os

import numpy as np

from . import _pykernels
from .errors import ConvergenceFailure

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None

AVAILABLE = ("cython", "python") if _ckernels is not None else ("python",)

_active = "python" if (_ckernels is None or os.environ.get("QUATSYLV_BACKEND") == "python") else "cython"


def backend():
    """Name of the active backend, ``"cython"`` or ``"python"``."""
    return _active


def set_backend(name):
    global _active
    if name not in AVAILABLE:
        raise ValueError(f"backend {name!r} unavailable (have {AVAILABLE})")
    _active = name


@contextlib.contextmanager
def use_backend(name):
    previous = _active
    set_backend(name)
    try:
        yield
    finally:
        set_backend(previous)


# Past these sizes BLAS/LAPACK beat the compiled loops (see benchmarks/), so the
# compiled backend hands larger problems to numpy.
MATMUL_CUTOFF = 24**3
QSVD_CUTOFF = 12


def qmatmul(a, b):
    """Quaternion matrix product of ``(m, k, 4)`` and ``(k, n, 4)`` component arrays."""
    if a.shape[1] == 0 or a.shape[0] == 0 or b.shape[1] == 0:
        return np.zeros((a.shape[0], b.shape[1], 4))
    if _active == "cython" and a.shape[0] * a.shape[1] * b.shape[1] <= MATMUL_CUTOFF:
        return _ckernels.qmatmul(np.ascontiguousarray(a), np.ascontiguousarray(b))
    return _pykernels.qmatmul(a, b)


def _jacobi(m, max_sweeps):
    rows, cols = m.shape
    wr = np.array(m.real, dtype=np.float64, order="F")
    wi = np.array(m.imag, dtype=np.float64, order="F")
    vr = np.asfortranarray(np.eye(cols))
    vi = np.zeros((cols, cols), order="F")
    tol = np.finfo(float).eps * max(rows, 1)
    sweeps = _ckernels.jacobi_sweeps(wr, wi, vr, vi, max_sweeps, tol)
    if sweeps < 0:
        raise ConvergenceFailure(f"Jacobi SVD did not converge in {max_sweeps} sweeps")
    w = wr + 1j * wi
    v = vr + 1j * vi
    s = np.linalg.norm(w, axis=0)
    order = np.argsort(-s, kind="stable")
    s = s[order]
    w = w[:, order]
    v = v[:, order]
    u = np.zeros((rows, cols), dtype=np.complex128)
    floor = s[0] * np.finfo(float).eps * max(rows, cols) if cols else 0.0
    live = s > max(floor, np.finfo(float).tiny)
    u[:, live] = w[:, live] / s[live]
    if not live.all():
        # complete U with an orthonormal basis of the complement of its live columns
        k = int(live.sum())
        basis, _ = np.linalg.qr(np.hstack([u[:, :k], np.eye(rows, dtype=np.complex128)]))
        u[:, k:] = basis[:, k:cols]
    return u, s, v


def svd(m, max_sweeps):
    """Thin SVD ``m = u @ diag(s) @ v^H`` with ``s`` descending, through LAPACK.

    LAPACK beats the compiled complex Jacobi at every size measured, so both
    backends use it; :func:`jacobi_svd` stays available for comparison.
    """
    rows, cols = m.shape
    if rows == 0 or cols == 0:
        k = min(rows, cols)
        return np.zeros((rows, k), complex), np.zeros(k), np.zeros((cols, k), complex)
    try:
        return _pykernels.svd(m, max_sweeps)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(str(exc)) from exc


def jacobi_svd(m, max_sweeps):
    """Same contract as :func:`svd`, by compiled one-sided Jacobi (needs the extension).

    Raises :class:`ConvergenceFailure` after ``max_sweeps`` sweeps.
    """
    if _ckernels is None:
        raise RuntimeError("compiled kernels are not built")
    rows, cols = m.shape
    if rows == 0 or cols == 0:
        return svd(m, max_sweeps)
    if rows >= cols:
        return _jacobi(m, max_sweeps)
    u, s, v = _jacobi(m.conj().T, max_sweeps)
    return v, s, u


def _qjacobi(data, max_sweeps):
    m, n = data.shape[:2]
    w = np.array(np.transpose(data, (1, 0, 2)), order="C")
    v = np.zeros((n, n, 4))
    v[np.arange(n), np.arange(n), 0] = 1.0
    tol = np.finfo(float).eps * max(m, 1)
    if _ckernels.qjacobi_sweeps(w, v, max_sweeps, tol) < 0:
        raise ConvergenceFailure(f"quaternion Jacobi SVD did not converge in {max_sweeps} sweeps")
    s = np.sqrt(np.sum(w * w, axis=(1, 2)))
    order = np.argsort(-s, kind="stable")
    s = s[order]
    scale = np.where(s > 0, s, 1.0)
    u = np.transpose(w[order] / scale[:, None, None], (1, 0, 2))
    return u, s, np.transpose(v[order], (1, 0, 2))


def has_qsvd(shape):
    """Whether :func:`qsvd` is the preferred route for a matrix of this shape."""
    return _active == "cython" and min(shape) <= QSVD_CUTOFF


def qsvd(data, max_sweeps):
    """Thin quaternion SVD of a ``(m, n, 4)`` array (needs the compiled extension).

    Returns component arrays ``u`` (``m x k``), ``v`` (``n x k``) and the
    descending singular values ``s`` with ``A = U diag(s) V^*``.  Columns of
    ``u`` belonging to zero singular values are zero.
    """
    m, n = data.shape[:2]
    if m >= n:
        return _qjacobi(data, max_sweeps)
    adj = np.transpose(data, (1, 0, 2)) * np.array([1.0, -1.0, -1.0, -1.0])
    u, s, v = _qjacobi(adj, max_sweeps)
    return v, s, u
