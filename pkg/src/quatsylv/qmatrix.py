"""Dense quaternion matrices.

A :class:`QMatrix` wraps a read-only ``(rows, cols, 4)`` float array whose
last axis holds the ``(w, x, y, z)`` components.  Empty shapes (zero rows or
columns) are legal everywhere; a product over an empty inner dimension is the
zero matrix of the outer shape.

The complex adjoint splits ``q = (w + x i) + (y + z i) j`` into the pair
``(q1, q2)`` and maps an ``m x n`` matrix ``Q1 + Q2 j`` to the ``2m x 2n``
complex matrix ``[[Q1, Q2], [-conj(Q2), conj(Q1)]]``.
"""

from __future__ import annotations

import numbers

import numpy as np

from . import kernels
from .errors import DimensionMismatch, StructureViolation
from .quaternion import EtaAxis, Quaternion

ComplexMatrix = np.ndarray

_SIGN_CONJ = np.array([1.0, -1.0, -1.0, -1.0])


class QMatrix:
    __slots__ = ("data",)
    __array_ufunc__ = None  # keep numpy from hijacking scalar * QMatrix

    def __init__(self, data, *, check=True):
        arr = np.array(data, dtype=np.float64)
        if arr.ndim != 3 or arr.shape[2] != 4:
            raise ValueError(f"expected a (rows, cols, 4) array, got shape {arr.shape}")
        if check and not np.isfinite(arr).all():
            raise ValueError("quaternion matrix entries must be finite")
        arr.flags.writeable = False
        self.data = arr

    # construction -----------------------------------------------------------

    @classmethod
    def zeros(cls, rows, cols):
        return cls(np.zeros((rows, cols, 4)), check=False)

    @classmethod
    def eye(cls, n):
        d = np.zeros((n, n, 4))
        d[np.arange(n), np.arange(n), 0] = 1.0
        return cls(d, check=False)

    @classmethod
    def from_components(cls, w, x=None, y=None, z=None):
        w = np.asarray(w, dtype=float)
        parts = [w] + [np.zeros_like(w) if c is None else np.asarray(c, dtype=float) for c in (x, y, z)]
        return cls(np.stack(parts, axis=-1))

    @classmethod
    def from_entries(cls, rows):
        """Build from nested lists whose entries are quaternions, 4-sequences or reals."""
        rows = list(rows)
        if not rows:
            return cls.zeros(0, 0)
        grid = [[Quaternion.coerce(e).as_tuple() for e in row] for row in rows]
        width = {len(r) for r in grid}
        if len(width) != 1:
            raise DimensionMismatch("ragged rows")
        return cls(np.array(grid, dtype=float).reshape(len(grid), width.pop(), 4))

    @classmethod
    def from_complex_pair(cls, q1, q2):
        q1 = np.asarray(q1, dtype=complex)
        q2 = np.asarray(q2, dtype=complex)
        return cls(np.stack([q1.real, q1.imag, q2.real, q2.imag], axis=-1))

    # shape ------------------------------------------------------------------

    @property
    def shape(self):
        return self.data.shape[:2]

    @property
    def rows(self):
        return self.data.shape[0]

    @property
    def cols(self):
        return self.data.shape[1]

    @property
    def size(self):
        return self.rows * self.cols

    def __len__(self):
        return self.rows

    def __getitem__(self, key):
        if isinstance(key, tuple) and len(key) == 2 and all(isinstance(k, numbers.Integral) for k in key):
            return Quaternion(*map(float, self.data[key]))
        if not isinstance(key, tuple):
            key = (key, slice(None))
        key = tuple(slice(k, k + 1) if isinstance(k, numbers.Integral) else k for k in key)
        return QMatrix(self.data[key], check=False)

    def entries(self):
        return [[Quaternion(*map(float, self.data[i, j])) for j in range(self.cols)] for i in range(self.rows)]

    # arithmetic -------------------------------------------------------------

    def _same_shape(self, other, op):
        if not isinstance(other, QMatrix):
            return False
        if self.shape != other.shape:
            raise DimensionMismatch(f"cannot {op} {self.shape} and {other.shape}")
        return True

    def __add__(self, other):
        if not self._same_shape(other, "add"):
            return NotImplemented
        return QMatrix(self.data + other.data, check=False)

    def __sub__(self, other):
        if not self._same_shape(other, "subtract"):
            return NotImplemented
        return QMatrix(self.data - other.data, check=False)

    def __neg__(self):
        return QMatrix(-self.data, check=False)

    def __matmul__(self, other):
        if not isinstance(other, QMatrix):
            return NotImplemented
        return matmul(self, other)

    def __mul__(self, other):
        if isinstance(other, numbers.Real):
            return QMatrix(self.data * float(other), check=False)
        if isinstance(other, Quaternion):
            q = np.array(other.as_tuple()).reshape(1, 1, 4)
            return QMatrix(kernels.qmatmul(self.data.reshape(-1, 1, 4), q).reshape(self.data.shape), check=False)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, numbers.Real):
            return QMatrix(self.data * float(other), check=False)
        if isinstance(other, Quaternion):
            q = np.array(other.as_tuple()).reshape(1, 1, 4)
            return QMatrix(kernels.qmatmul(q, self.data.reshape(1, -1, 4)).reshape(self.data.shape), check=False)
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, numbers.Real):
            return QMatrix(self.data / float(other), check=False)
        return NotImplemented

    # involutions ------------------------------------------------------------

    @property
    def H(self):
        return conj_transpose(self)

    def eta_h(self, eta):
        return eta_conj_transpose(self, eta)

    # norms and comparison -----------------------------------------------------

    def norm(self):
        """Frobenius norm over quaternion entry norms."""
        return float(np.sqrt(np.sum(self.data * self.data)))

    def max_norm(self):
        """Largest entry norm (0 for an empty matrix)."""
        if self.size == 0:
            return 0.0
        return float(np.sqrt(np.max(np.sum(self.data * self.data, axis=-1))))

    def allclose(self, other, atol=1e-12):
        return self.shape == other.shape and bool(np.all(np.abs(self.data - other.data) <= atol))

    def __eq__(self, other):
        if not isinstance(other, QMatrix):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self.data, other.data))

    __hash__ = None

    def __repr__(self):
        return f"QMatrix({self.rows}x{self.cols})"

    def __str__(self):
        return format_matrix(self)


def _fmt_quaternion(q, digits=6):
    parts = []
    for value, unit in zip(q, ("", "i", "j", "k")):
        if value == 0:
            continue
        v = round(float(value), digits)
        if v == 0:
            continue
        mag = abs(v)
        body = (f"{mag:g}" if (mag != 1 or not unit) else "") + unit
        parts.append(("-" if v < 0 else "+") + body)
    if not parts:
        return "0"
    text = "".join(parts)
    return text[1:] if text[0] == "+" else text


def format_matrix(a: QMatrix, digits=6):
    cells = [[_fmt_quaternion(q, digits) for q in row] for row in a.entries()]
    if not cells or not cells[0]:
        return f"[] ({a.rows}x{a.cols})"
    width = max(len(c) for row in cells for c in row)
    return "\n".join("[ " + "  ".join(c.rjust(width) for c in row) + " ]" for row in cells)


def matmul(a: QMatrix, b: QMatrix) -> QMatrix:
    if a.cols != b.rows:
        raise DimensionMismatch(f"cannot multiply {a.shape} by {b.shape}")
    return QMatrix(kernels.qmatmul(a.data, b.data), check=False)


def conj_transpose(a: QMatrix) -> QMatrix:
    return QMatrix(np.transpose(a.data, (1, 0, 2)) * _SIGN_CONJ, check=False)


def eta_conj_transpose(a: QMatrix, eta) -> QMatrix:
    """``-eta A^* eta``: transpose, then negate the eta component of every entry."""
    eta = EtaAxis.parse(eta)
    sign = np.ones(4)
    sign[eta.value] = -1.0
    return QMatrix(np.transpose(a.data, (1, 0, 2)) * sign, check=False)


def eta_transform(a: QMatrix, eta) -> QMatrix:
    """``-eta A eta`` entrywise: negate the two imaginary components other than eta."""
    eta = EtaAxis.parse(eta)
    sign = -np.ones(4)
    sign[0] = sign[eta.value] = 1.0
    return QMatrix(a.data * sign, check=False)


def is_eta_hermitian(a: QMatrix, eta, tol=1e-10) -> bool:
    if a.rows != a.cols:
        raise DimensionMismatch(f"eta-Hermitian test needs a square matrix, got {a.shape}")
    return (a - eta_conj_transpose(a, eta)).max_norm() <= tol


# block assembly ---------------------------------------------------------------


def hcat(*blocks: QMatrix) -> QMatrix:
    rows = {b.rows for b in blocks}
    if len(rows) != 1:
        raise DimensionMismatch(f"hcat needs equal row counts, got {[b.shape for b in blocks]}")
    return QMatrix(np.concatenate([b.data for b in blocks], axis=1), check=False)


def vcat(*blocks: QMatrix) -> QMatrix:
    cols = {b.cols for b in blocks}
    if len(cols) != 1:
        raise DimensionMismatch(f"vcat needs equal column counts, got {[b.shape for b in blocks]}")
    return QMatrix(np.concatenate([b.data for b in blocks], axis=0), check=False)


def block(grid) -> QMatrix:
    """Assemble a block matrix.

    Entries may be :class:`QMatrix` or ``0``/``None`` for a zero block whose
    size is inferred from the other blocks in its block-row and block-column.
    """
    grid = [list(r) for r in grid]
    if len({len(r) for r in grid}) != 1:
        raise DimensionMismatch("block grid rows have different lengths")
    nr, nc = len(grid), len(grid[0])
    heights = [None] * nr
    widths = [None] * nc
    for i, row in enumerate(grid):
        for j, b in enumerate(row):
            if isinstance(b, QMatrix):
                if heights[i] is not None and heights[i] != b.rows:
                    raise DimensionMismatch(f"block row {i} has inconsistent heights")
                if widths[j] is not None and widths[j] != b.cols:
                    raise DimensionMismatch(f"block column {j} has inconsistent widths")
                heights[i], widths[j] = b.rows, b.cols
    if None in heights or None in widths:
        raise DimensionMismatch("cannot infer the size of an all-zero block row or column")
    return vcat(*[hcat(*[b if isinstance(b, QMatrix) else QMatrix.zeros(heights[i], widths[j])
                         for j, b in enumerate(row)]) for i, row in enumerate(grid)])


# complex adjoint --------------------------------------------------------------


def complex_parts(a: QMatrix):
    d = a.data
    return d[..., 0] + 1j * d[..., 1], d[..., 2] + 1j * d[..., 3]


def embed_complex(a: QMatrix) -> ComplexMatrix:
    q1, q2 = complex_parts(a)
    m, n = a.shape
    out = np.empty((2 * m, 2 * n), dtype=np.complex128)
    out[:m, :n] = q1
    out[:m, n:] = q2
    out[m:, :n] = -q2.conj()
    out[m:, n:] = q1.conj()
    return out


def extract_from_complex(m: ComplexMatrix, scale=None, rtol=1e-8) -> QMatrix:
    """Invert :func:`embed_complex`, averaging the two redundant copies.

    ``scale`` defaults to the spectral norm of ``m``; a block mismatch above
    ``rtol * scale`` raises :class:`StructureViolation`.
    """
    m = np.asarray(m)
    r2, c2 = m.shape
    if r2 % 2 or c2 % 2:
        raise StructureViolation(f"adjoint form needs even dimensions, got {m.shape}")
    r, c = r2 // 2, c2 // 2
    tl, tr = m[:r, :c], m[:r, c:]
    bl, br = m[r:, :c], m[r:, c:]
    if m.size:
        if scale is None:
            scale = float(np.linalg.norm(m, 2))
        mismatch = max(np.max(np.abs(tl - br.conj())), np.max(np.abs(tr + bl.conj())))
        if mismatch > rtol * scale:
            raise StructureViolation(f"block mismatch {mismatch:.3g} exceeds {rtol:g} x {scale:.3g}")
    return QMatrix.from_complex_pair((tl + br.conj()) / 2, (tr - bl.conj()) / 2)
