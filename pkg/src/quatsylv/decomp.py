"""Rank, Moore-Penrose inverse and the projectors ``L_A``, ``R_A``.

The spectrum is that of the complex adjoint.  Its singular values come in
equal pairs, one pair per quaternion singular value, so the quaternion rank
is the number of pairs above the cutoff.  With the compiled backend small
matrices skip the embedding and run a quaternion one-sided Jacobi SVD, whose
singular values are exactly those pairs; the numpy route factors the adjoint
and pairs its spectrum explicitly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import PairingError
from .qmatrix import ComplexMatrix, QMatrix, embed_complex, extract_from_complex

EPS = np.finfo(float).eps
PAIR_RTOL = 1e-6
FLUSH = 1e-13
_SIGN_CONJ = np.array([1.0, -1.0, -1.0, -1.0])


@dataclass(frozen=True)
class PseudoinverseResult:
    pinv: QMatrix
    rank: int
    singular_values: tuple
    tol_used: float


@dataclass(frozen=True)
class Projectors:
    left: QMatrix
    right: QMatrix


def complex_svd(m: ComplexMatrix):
    """Thin SVD ``m = U diag(S) V^H`` of a complex matrix, ``S`` descending.

    Raises :class:`~quatsylv.errors.ConvergenceFailure` when the
    factorization does not converge.
    """
    m = np.asarray(m, dtype=np.complex128)
    return kernels.svd(m, 100 * max(m.shape + (1,)))


def auto_tol(shape, smax):
    """Default cutoff ``max(2m, 2n) * eps * sigma_max`` for an ``m x n`` quaternion matrix."""
    return 2 * max(shape + (1,)) * EPS * smax


def _pair(s):
    """Collapse the doubled adjoint spectrum into quaternion singular values."""
    if s.size % 2:
        raise PairingError(f"odd number of adjoint singular values ({s.size})")
    a, b = s[0::2], s[1::2]
    smax = s[0] if s.size else 0.0
    gap = np.max(np.abs(a - b)) if s.size else 0.0
    if gap > PAIR_RTOL * max(smax, np.finfo(float).tiny):
        raise PairingError(f"adjoint singular values do not pair (gap {gap:.3g}, sigma_max {smax:.3g})")
    return (a + b) / 2


def _decompose(a: QMatrix, tol, floor=0.0):
    m, n = a.shape
    if m == 0 or n == 0:
        return None, np.zeros(0), 0, max(0.0 if tol is None else float(tol), floor)
    if kernels.has_qsvd(a.shape):
        u, sq, v = kernels.qsvd(a.data, 100 * max(m, n))
        usv = ("q", u, sq, v)
    else:
        u, s, v = complex_svd(embed_complex(a))
        sq = _pair(s)
        usv = ("c", u, s, v)
    if tol is None:
        tol = auto_tol(a.shape, sq[0] if sq.size else 0.0)
    tol = max(float(tol), floor)
    rank = int(np.count_nonzero(sq > tol))
    return usv, sq, rank, float(tol)


def singular_values(a: QMatrix) -> np.ndarray:
    """Quaternion singular values of ``a`` (``min(m, n)`` of them), descending."""
    return _decompose(a, None)[1]


def qrank(a: QMatrix, tol=None) -> int:
    """Quaternion rank; ``tol=None`` uses :func:`auto_tol`."""
    return _decompose(a, tol)[2]


def pinv(a: QMatrix, tol=None, *, floor=0.0) -> PseudoinverseResult:
    """Moore-Penrose inverse keeping singular values above ``max(tol, floor)``.

    ``tol=None`` uses :func:`auto_tol`; ``floor`` is an absolute lower bound
    on the cutoff, used by the solvers on unit-scaled data so that rounding
    noise in a product that should vanish is not inverted.
    """
    m, n = a.shape
    usv, sq, rank, tol = _decompose(a, tol, floor)
    if rank == 0:
        return PseudoinverseResult(QMatrix.zeros(n, m), 0, tuple(map(float, sq)), tol)
    route, u, s, v = usv
    if route == "q":
        k = rank
        uh = np.transpose(u[:, :k], (1, 0, 2)) * _SIGN_CONJ
        y = QMatrix(kernels.qmatmul(v[:, :k] / s[None, :k, None], uh), check=False)
    else:
        k = 2 * rank
        pc = (v[:, :k] / s[:k]) @ u[:, :k].conj().T
        y = extract_from_complex(pc, scale=1.0 / s[k - 1])
    return PseudoinverseResult(y, rank, tuple(map(float, sq)), tol)


def _flush(p: QMatrix) -> QMatrix:
    d = p.data.copy()
    d[np.sum(d * d, axis=-1) < FLUSH * FLUSH] = 0.0
    return QMatrix(d, check=False)


def left_projector(a: QMatrix, a_pinv: QMatrix | None = None) -> QMatrix:
    """``L_A = I - A^+ A``."""
    y = pinv(a).pinv if a_pinv is None else a_pinv
    return _flush(QMatrix.eye(a.cols) - y @ a)


def right_projector(a: QMatrix, a_pinv: QMatrix | None = None) -> QMatrix:
    """``R_A = I - A A^+``."""
    y = pinv(a).pinv if a_pinv is None else a_pinv
    return _flush(QMatrix.eye(a.rows) - a @ y)


def projectors(a: QMatrix, tol=None) -> Projectors:
    y = pinv(a, tol).pinv
    return Projectors(left_projector(a, y), right_projector(a, y))


def penrose_residuals(a: QMatrix, y: QMatrix):
    """Frobenius norms of ``AYA - A``, ``YAY - Y``, ``(AY)^* - AY``, ``(YA)^* - YA``."""
    ay, ya = a @ y, y @ a
    return (
        (ay @ a - a).norm(),
        (ya @ y - y).norm(),
        (ay.H - ay).norm(),
        (ya.H - ya).norm(),
    )


class InverseCache:
    """Pseudoinverses and projectors computed once per matrix object.

    Every inverse uses the cutoff ``max(auto_tol, floor)``.  The solvers keep
    one cache per solve, so repeated ``A^+``, ``L_A`` and ``R_A`` of the same
    intermediate are factored a single time.
    """

    def __init__(self, floor=0.0):
        self.floor = float(floor)
        self._store = {}

    def _entry(self, a):
        hit = self._store.get(id(a))
        if hit is None or hit[0] is not a:
            hit = [a, pinv(a, floor=self.floor).pinv, None, None]
            self._store[id(a)] = hit
        return hit

    def pinv(self, a):
        return self._entry(a)[1]

    def left(self, a):
        hit = self._entry(a)
        if hit[2] is None:
            hit[2] = left_projector(a, hit[1])
        return hit[2]

    def right(self, a):
        hit = self._entry(a)
        if hit[3] is None:
            hit[3] = right_projector(a, hit[1])
        return hit[3]
