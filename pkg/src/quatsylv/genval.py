"""Random instances with known answers, residuals, and a brute-force oracle.

Consistent instances are made by sampling the unknowns first and computing
the right-hand side.  Inconsistent ones add to that right-hand side a
direction outside the range of the equation's real-linear map, which
:func:`linear_map` builds directly from 4x4 left/right multiplication
matrices, independently of the solvers.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from . import rng
from .errors import DimensionMismatch, GenerationFailed
from .instances import (
    MAIN_COEFFS,
    EtaInstance,
    EtaSolution,
    MainInstance,
    MainSolution,
    eta_lhs,
    main_lhs,
)
from .qmatrix import QMatrix, eta_conj_transpose
from .quaternion import EtaAxis

KINDS = ("consistent", "inconsistent", "eta-consistent")
MAX_RETRIES = 16

# stream slots, fixed so that every matrix is reproducible on its own
_SLOTS = {name: i for i, name in enumerate(MAIN_COEFFS)}
_SLOTS.update({"X1": 10, "X2": 11, "Y1": 12, "Y2": 13, "Y3": 14, "perturb": 20, "rank": 30})


@dataclass(frozen=True)
class GenSpec:
    """Shapes and sampling options.

    ``m x n`` is the shape of ``B``; ``k1`` the column count of ``A1``,
    ``l1`` the row count of ``B1``; ``y1``, ``y2``, ``y3`` the shapes of the
    ``Y`` unknowns.  For the eta kind ``B`` is ``m x m`` and only the row
    counts of ``y1..y3`` matter (the ``Y``'s are square).

    ``deficiency`` lowers the rank of every coefficient by that amount;
    ``mixed_rank`` instead draws a per-coefficient deficiency.
    """

    m: int = 2
    n: int = 2
    k1: int = 2
    l1: int = 2
    y1: tuple = (2, 2)
    y2: tuple = (2, 2)
    y3: tuple = (2, 2)
    seed: int = 0
    entry_scale: float = 1.0
    kind: str = "consistent"
    deficiency: int = 0
    mixed_rank: bool = False
    eta: EtaAxis = field(default=EtaAxis.I)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}, got {self.kind!r}")
        object.__setattr__(self, "eta", EtaAxis.parse(self.eta))
        for name in ("y1", "y2", "y3"):
            object.__setattr__(self, name, tuple(int(v) for v in getattr(self, name)))
        dims = (self.m, self.n, self.k1, self.l1) + self.y1 + self.y2 + self.y3
        if any(d < 0 for d in dims) or self.deficiency < 0:
            raise ValueError("dimensions and deficiency must be nonnegative")
        if self.entry_scale <= 0:
            raise ValueError("entry_scale must be positive")

    @classmethod
    def square(cls, d, **kw):
        """Every dimension equal to ``d``."""
        return cls(m=d, n=d, k1=d, l1=d, y1=(d, d), y2=(d, d), y3=(d, d), **kw)

    def coefficient_shapes(self):
        m, n = self.m, self.n
        if self.kind == "eta-consistent":
            return {"A1": (m, self.k1), "A2": (m, self.y1[0]), "A3": (m, self.y2[0]),
                    "A4": (m, self.y3[0]), "B": (m, m)}
        return {"A1": (m, self.k1), "B1": (self.l1, n), "A2": (m, self.y1[0]), "B2": (self.y1[1], n),
                "A3": (m, self.y2[0]), "B3": (self.y2[1], n), "A4": (m, self.y3[0]),
                "B4": (self.y3[1], n), "B": (m, n)}


def _stream(spec, name):
    return rng.stream(spec.seed, rng.INSTANCE, _SLOTS[name])


def _sample(spec, name, shape):
    return rng.uniform_qmatrix(_stream(spec, name), shape, spec.entry_scale)


def _coefficient(spec, name, shape):
    a = _sample(spec, name, shape)
    full = min(shape)
    if full == 0:
        return a
    if spec.mixed_rank:
        drop = int(rng.stream(spec.seed, rng.INSTANCE, _SLOTS["rank"] + _SLOTS[name]).integers(0, full + 1))
    else:
        drop = min(spec.deficiency, full)
    if drop == 0:
        return a
    r = full - drop
    # rank r: keep r columns (or rows) and mix them
    g = rng.stream(spec.seed, rng.INSTANCE, 100 + _SLOTS[name])
    if shape[0] >= shape[1]:
        mix = rng.uniform_qmatrix(g, (r, shape[1]))
        return a[:, :r] @ mix if r else QMatrix.zeros(*shape)
    mix = rng.uniform_qmatrix(g, (shape[0], r))
    return mix @ a[:r, :] if r else QMatrix.zeros(*shape)


def gen_consistent(spec: GenSpec):
    """``(instance, witness)`` with the right-hand side computed from the witness.

    For ``kind="eta-consistent"`` the instance is an :class:`EtaInstance`
    with eta-Hermitian ``Y`` witnesses; otherwise a :class:`MainInstance`.
    """
    if spec.kind == "eta-consistent":
        return _gen_eta(spec)
    shapes = spec.coefficient_shapes()
    coeffs = {k: _coefficient(spec, k, s) for k, s in shapes.items() if k != "B"}
    probe = MainInstance(B=QMatrix.zeros(spec.m, spec.n), **coeffs)
    witness = MainSolution(**{k: _sample(spec, k, s) for k, s in probe.unknown_shapes().items()})
    return replace(probe, B=main_lhs(probe, witness)), witness


def _gen_eta(spec: GenSpec):
    shapes = spec.coefficient_shapes()
    coeffs = {k: _coefficient(spec, k, s) for k, s in shapes.items() if k != "B"}
    eta = spec.eta

    def herm(name, d):
        g = _sample(spec, name, (d, d))
        return (g + eta_conj_transpose(g, eta)) * 0.5

    probe = EtaInstance(B=QMatrix.zeros(spec.m, spec.m), eta=eta, **coeffs)
    witness = EtaSolution(_sample(spec, "X1", (spec.k1, spec.m)), herm("Y1", spec.y1[0]),
                          herm("Y2", spec.y2[0]), herm("Y3", spec.y3[0]))
    B = eta_lhs(probe, witness)
    # symmetrize away rounding so B is eta-Hermitian to the last bit
    B = (B + eta_conj_transpose(B, eta)) * 0.5
    return replace(probe, B=B), witness


def gen_inconsistent(spec: GenSpec) -> MainInstance:
    """A main instance with no solution.

    Starts from a consistent instance and adds to ``B`` a random direction
    projected onto the orthogonal complement of the equation's range.
    Raises :class:`GenerationFailed` when every ``B`` is attainable.
    """
    base, _ = gen_consistent(replace(spec, kind="consistent"))
    return perturb_inconsistent(base, _stream(spec, "perturb"), spec.entry_scale)


def perturb_inconsistent(base: MainInstance, gen=None, entry_scale=1.0) -> MainInstance:
    """``base`` with ``B`` moved off the attainable range so that a rank condition fails."""
    from .conditions import check_rank_conditions, verdict

    if gen is None or isinstance(gen, int):
        gen = rng.stream(0 if gen is None else gen, rng.INSTANCE, _SLOTS["perturb"])
    if base.B.size == 0:
        raise GenerationFailed("B is empty, so every instance is consistent")
    if all(base.as_dict()[k].max_norm() == 0 for k in MAIN_COEFFS if k != "B"):
        # only B = 0 is attainable
        return replace(base, B=rng.uniform_qmatrix(gen, base.B.shape, entry_scale))
    L = linear_map(base)
    u, s, _ = np.linalg.svd(L, full_matrices=True)
    rank = int(np.count_nonzero(s > _range_tol(L, s)))
    if rank == L.shape[0]:
        raise GenerationFailed(f"the equation is surjective for B of shape {base.B.shape}")
    complement = u[:, rank:]
    for _ in range(MAX_RETRIES):
        b = complement @ (complement.T @ gen.uniform(-1.0, 1.0, L.shape[0]))
        if np.linalg.norm(b) < 1e-6:
            continue
        b *= entry_scale / np.max(np.abs(b))
        inst = replace(base, B=base.B + QMatrix(b.reshape(base.B.shape + (4,))))
        if verdict(check_rank_conditions(inst)) == "inconsistent":
            return inst
    raise GenerationFailed(f"no clearly inconsistent instance after {MAX_RETRIES} attempts")


# residuals ----------------------------------------------------------------------------


def residual(inst, sol) -> float:
    """Frobenius norm of ``lhs(sol) - B`` for a main or eta instance."""
    if isinstance(inst, EtaInstance):
        return (eta_lhs(inst, sol) - inst.B).norm()
    return (main_lhs(inst, sol) - inst.B).norm()


# brute-force oracle -------------------------------------------------------------------


def _left_mats(a):
    """4x4 real matrices of ``v -> a v`` for every entry of ``a``."""
    w, x, y, z = (a.data[..., i] for i in range(4))
    return np.stack([
        np.stack([w, -x, -y, -z], -1),
        np.stack([x, w, -z, y], -1),
        np.stack([y, z, w, -x], -1),
        np.stack([z, -y, x, w], -1),
    ], -2)


def _right_mats(b):
    """4x4 real matrices of ``v -> v b`` for every entry of ``b``."""
    w, x, y, z = (b.data[..., i] for i in range(4))
    return np.stack([
        np.stack([w, -x, -y, -z], -1),
        np.stack([x, w, z, -y], -1),
        np.stack([y, -z, w, x], -1),
        np.stack([z, y, -x, w], -1),
    ], -2)


def two_sided_map(A: QMatrix, B: QMatrix):
    """Real matrix of ``Y -> A Y B`` acting on row-major component vectors."""
    if A.cols == 0 or B.rows == 0:
        return np.zeros((A.rows * B.cols * 4, A.cols * B.rows * 4))
    L = np.einsum("psag,tqgb->pqastb", _left_mats(A), _right_mats(B))
    return L.reshape(A.rows * B.cols * 4, A.cols * B.rows * 4)


def linear_map(inst) -> np.ndarray:
    """Real matrix of the unknowns-to-left-hand-side map of a main or eta instance."""
    if isinstance(inst, EtaInstance):
        eta = inst.eta
        n = inst.B.rows
        h = lambda a: eta_conj_transpose(a, eta)  # noqa: E731
        k1 = inst.A1.cols
        # X -> A1 X + (A1 X)^{eta*} via the map and a fixed real involution
        ax = two_sided_map(inst.A1, QMatrix.eye(n))
        blocks = [ax + _eta_transpose_matrix(n, n, eta) @ ax if k1 else ax]
        blocks += [two_sided_map(a, h(a)) for a in (inst.A2, inst.A3, inst.A4)]
        return np.hstack(blocks)
    m, n = inst.B.shape
    return np.hstack([
        two_sided_map(inst.A1, QMatrix.eye(n)),
        two_sided_map(QMatrix.eye(m), inst.B1),
        two_sided_map(inst.A2, inst.B2),
        two_sided_map(inst.A3, inst.B3),
        two_sided_map(inst.A4, inst.B4),
    ])


def _eta_transpose_matrix(r, c, eta):
    """Real matrix of ``Z -> Z^{eta*}`` for ``Z`` of shape ``r x c``."""
    sign = np.ones(4)
    sign[EtaAxis.parse(eta).value] = -1.0
    P = np.zeros((c * r * 4, r * c * 4))
    for p in range(r):
        for q in range(c):
            for a in range(4):
                P[(q * r + p) * 4 + a, (p * c + q) * 4 + a] = sign[a]
    return P


def _range_tol(L, s):
    return max(L.shape) * np.finfo(float).eps * (s[0] if s.size else 0.0) * 1e3


def bruteforce_consistent(inst) -> bool:
    """Consistency by ``rank [L | b] == rank L`` on the real-linear map."""
    b = inst.B.data.reshape(-1)
    L = linear_map(inst)
    if L.shape[0] != b.size:
        raise DimensionMismatch("map and right-hand side disagree in size")
    if L.size == 0:
        return not np.any(b)
    scale = max(np.max(np.abs(L)), np.max(np.abs(b)) if b.size else 0.0, 1e-300)
    tol = 1e-9 * scale * max(L.shape)
    r = np.linalg.matrix_rank(L, tol=tol)
    rb = np.linalg.matrix_rank(np.column_stack([L, b]), tol=tol)
    return bool(r == rb)
