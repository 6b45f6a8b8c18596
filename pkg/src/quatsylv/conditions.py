"""Solvability tests in rank-equality form and projector-equation form.

Rank tests work on copies of the inputs scaled to unit max entry norm (block
ranks do not change under per-matrix scaling) and count singular values above
``rtol * sigma_max``.  A singular value within a factor ``MARGIN`` of that
cutoff makes the comparison *indeterminate* instead of a forced boolean.

Projector tests report the max entry norm of a product that must vanish and
pass when it is at most ``tol``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .decomp import InverseCache, singular_values
from .errors import NotEtaHermitian, SideConditionViolated
from .instances import EtaInstance, MainInstance, PairSystem
from .qmatrix import QMatrix, block, hcat, is_eta_hermitian, vcat

RANK_RTOL = 1e-9
RANK_ATOL = 1e-13
MARGIN = 10.0
PINV_FLOOR = 1e-10

CONSISTENT = "consistent"
INCONSISTENT = "inconsistent"
INDETERMINATE = "indeterminate"


@dataclass(frozen=True)
class ConditionReport:
    name: str
    lhs_rank: int | None
    rhs_rank: int | None
    holds: bool
    residual: float | None = None
    indeterminate: bool = False
    form: str = "rank"

    def row(self):
        """``(name, lhs, rhs, verdict, residual)`` for printing."""
        verdict = "?" if self.indeterminate else ("ok" if self.holds else "FAIL")
        return (self.name, self.lhs_rank, self.rhs_rank, verdict, self.residual)


def verdict(reports) -> str:
    """Combine reports: any definite failure wins, then any indeterminate one."""
    reports = list(reports)
    if any(not r.holds and not r.indeterminate for r in reports):
        return INCONSISTENT
    if any(r.indeterminate for r in reports):
        return INDETERMINATE
    return CONSISTENT


# ranks ----------------------------------------------------------------------------


def unit_scaled(a: QMatrix):
    """``(a / s, s)`` with ``s`` the max entry norm (``s = 1`` for a zero matrix)."""
    s = a.max_norm()
    if s == 0.0:
        return a, 1.0
    return a / s, s


def rank_with_margin(a: QMatrix, rtol=RANK_RTOL, atol=RANK_ATOL):
    """Rank at cutoff ``max(rtol * sigma_max, atol)`` and whether it is borderline."""
    s = singular_values(a)
    if s.size == 0:
        return 0, False
    cut = max(rtol * s[0], atol)
    near = bool(np.any((s > cut / MARGIN) & (s <= cut * MARGIN)))
    return int(np.count_nonzero(s > cut)), near


class _Ranker:
    def __init__(self, rtol):
        self.rtol = RANK_RTOL if rtol is None else float(rtol)

    def __call__(self, a):
        return rank_with_margin(a, self.rtol)

    def equality(self, name, lhs_block, rhs_blocks, factor=1):
        lhs, near = self(lhs_block)
        rhs = 0
        for b in rhs_blocks:
            r, n = self(b)
            rhs += factor * r
            near = near or n
        return ConditionReport(name, lhs, rhs, lhs == rhs, indeterminate=near)


def _scaled(mats):
    return {k: unit_scaled(v)[0] for k, v in mats.items()}


def ms_rank_identity(A, B, C, D, E, rtol=None):
    """Both sides of the rank identity
    ``r[[A, B L_D], [R_E C, 0]] = r[[A, B, 0], [C, 0, E], [0, D, 0]] - r(D) - r(E)``.
    """
    rank = _Ranker(rtol)
    cache = InverseCache(PINV_FLOOR)
    A, B, C, D, E = (unit_scaled(x)[0] for x in (A, B, C, D, E))
    lhs_block = block([[A, B @ cache.left(D)], [cache.right(E) @ C, 0]])
    rhs_block = block([[A, B, QMatrix.zeros(A.rows, E.cols)],
                       [C, QMatrix.zeros(C.rows, B.cols), E],
                       [QMatrix.zeros(D.rows, A.cols), D, QMatrix.zeros(D.rows, E.cols)]])
    return rank(lhs_block)[0], rank(rhs_block)[0] - rank(D)[0] - rank(E)[0]


# main equation ----------------------------------------------------------------------

MAIN_RANK_NAMES = ("2a", "2b", "2c", "2d", "2e", "2f", "2g", "2h", "2i")


def main_rank_blocks(inst: MainInstance):
    """``(name, lhs block, rhs blocks)`` for the nine rank equalities, as printed."""
    m = _scaled(inst.as_dict())
    B, A1, A2, A3, A4 = m["B"], m["A1"], m["A2"], m["A3"], m["A4"]
    B1, B2, B3, B4 = m["B1"], m["B2"], m["B3"], m["B4"]
    Bn = -B

    def eq(name, arow, brows):
        grid = [[B] + arow] + [[b] + [QMatrix.zeros(b.rows, a.cols) for a in arow] for b in brows]
        return name, block(grid), (vcat(*brows), hcat(*arow))

    out = [
        eq("2a", [A2, A3, A4, A1], [B1]),
        eq("2b", [A2, A4, A1], [B3, B1]),
        eq("2c", [A3, A4, A1], [B2, B1]),
        eq("2d", [A4, A1], [B2, B3, B1]),
        eq("2e", [A2, A3, A1], [B4, B1]),
        eq("2f", [A2, A1], [B3, B4, B1]),
        eq("2g", [A3, A1], [B2, B4, B1]),
        eq("2h", [A1], [B2, B3, B4, B1]),
    ]
    z = QMatrix.zeros
    m_, n_ = B.shape
    w2, w1, w3, w4 = A2.cols, A1.cols, A3.cols, A4.cols
    big = block([
        [B, A2, A1, z(m_, n_), z(m_, w3), z(m_, w1), A4],
        [B3, z(B3.rows, w2), z(B3.rows, w1), z(B3.rows, n_), z(B3.rows, w3), z(B3.rows, w1), z(B3.rows, w4)],
        [B1, z(B1.rows, w2), z(B1.rows, w1), z(B1.rows, n_), z(B1.rows, w3), z(B1.rows, w1), z(B1.rows, w4)],
        [z(m_, n_), z(m_, w2), z(m_, w1), Bn, A3, A1, A4],
        [z(B2.rows, n_), z(B2.rows, w2), z(B2.rows, w1), B2, z(B2.rows, w3), z(B2.rows, w1), z(B2.rows, w4)],
        [z(B1.rows, n_), z(B1.rows, w2), z(B1.rows, w1), B1, z(B1.rows, w3), z(B1.rows, w1), z(B1.rows, w4)],
        [B4, z(B4.rows, w2), z(B4.rows, w1), B4, z(B4.rows, w3), z(B4.rows, w1), z(B4.rows, w4)],
    ])
    rhs_b = block([
        [B3, z(B3.rows, n_)],
        [B1, z(B1.rows, n_)],
        [z(B2.rows, n_), B2],
        [z(B1.rows, n_), B1],
        [B4, B4],
    ])
    rhs_a = block([
        [A2, A1, z(m_, w3), z(m_, w1), A4],
        [z(m_, w2), z(m_, w1), A3, A1, A4],
    ])
    out.append(("2i", big, (rhs_b, rhs_a)))
    return out


def check_rank_conditions(inst: MainInstance, tol=None):
    """The nine rank equalities; ``tol`` is the relative singular-value cutoff."""
    rank = _Ranker(tol)
    return [rank.equality(name, lhs, rhs) for name, lhs, rhs in main_rank_blocks(inst)]


PROJECTOR_NAMES = ("RC1E1", "E1LD1", "RC2E2", "E2LD2", "RC3E3", "E3LD3", "RC4E4", "E4LD4", "REEL",
                   "RE22ELE33")
IMPLIED_NAMES = ("RF11G1", "RF22G2", "RMRE11E", "ELE33LN")


def projector_tol(scale):
    return 1e-8 * (1.0 + scale)


def _residual_report(name, mat, tol):
    r = mat.max_norm()
    return ConditionReport(name, None, None, r <= tol, residual=r,
                           indeterminate=tol / MARGIN < r <= tol * MARGIN, form="projector")


def check_projector_conditions(d, tol=None):
    """The vanishing products of the main equation, from derived quantities ``d``.

    The first nine are ``R_Ci Ei``, ``Ei L_Di`` (i = 1..4) and
    ``R_E11 E L_E44``.  The tenth, ``R_E22 E L_E33``, does not follow from
    them: some instances satisfy all nine and still have no solution.
    ``tol`` defaults to ``1e-8 * (1 + max input entry norm)``.
    """
    if tol is None:
        tol = projector_tol(d.instance.scale())
    c = d.cache
    mats = []
    for i in range(1, 5):
        Ci, Di, Ei = getattr(d, f"C{i}"), getattr(d, f"D{i}"), getattr(d, f"E{i}")
        mats.append(c.right(Ci) @ Ei)
        mats.append(Ei @ c.left(Di))
    mats.append(c.right(d.E11) @ d.E @ c.left(d.E44))
    mats.append(c.right(d.E22) @ d.E @ c.left(d.E33))
    return [_residual_report(n, m, tol) for n, m in zip(PROJECTOR_NAMES, mats)]


def check_implied_conditions(d, tol=None):
    """Products that vanish whenever the projector conditions hold."""
    if tol is None:
        tol = projector_tol(d.instance.scale())
    c = d.cache
    mats = [
        c.right(d.F11) @ d.G1,
        c.right(d.F22) @ d.G2,
        c.right(d.M) @ c.right(d.E11) @ d.E,
        d.E @ c.left(d.E33) @ c.left(d.N),
    ]
    return [_residual_report(n, m, tol) for n, m in zip(IMPLIED_NAMES, mats)]


# three-term equation ------------------------------------------------------------------

THREE_TERM_NAMES = tuple(f"c{i}" for i in range(1, 10))


def three_term_rank_blocks(A11, B11, A22, B22, A33, B33, T1):
    m = _scaled(dict(A11=A11, B11=B11, A22=A22, B22=B22, A33=A33, B33=B33, T1=T1))
    A11, B11, A22, B22, A33, B33, T1 = (m[k] for k in ("A11", "B11", "A22", "B22", "A33", "B33", "T1"))

    def eq(name, arow, brows):
        grid = [[T1] + arow] + [[b] + [QMatrix.zeros(b.rows, a.cols) for a in arow] for b in brows]
        rhs = []
        if brows:
            rhs.append(vcat(*brows))
        if arow:
            rhs.append(hcat(*arow))
        return name, block(grid), tuple(rhs)

    z = QMatrix.zeros
    mm, nn = T1.shape
    big = block([
        [T1, z(mm, nn), A11, z(mm, A22.cols), A33],
        [z(mm, nn), -T1, z(mm, A11.cols), A22, A33],
        [B22, z(B22.rows, nn), z(B22.rows, A11.cols), z(B22.rows, A22.cols), z(B22.rows, A33.cols)],
        [z(B11.rows, nn), B11, z(B11.rows, A11.cols), z(B11.rows, A22.cols), z(B11.rows, A33.cols)],
        [B33, B33, z(B33.rows, A11.cols), z(B33.rows, A22.cols), z(B33.rows, A33.cols)],
    ])
    rhs_b = block([[B22, z(B22.rows, nn)], [z(B11.rows, nn), B11], [B33, B33]])
    rhs_a = block([[A11, z(mm, A22.cols), A33], [z(mm, A11.cols), A22, A33]])
    return [
        eq("c1", [A11, A22, A33], []),
        eq("c2", [], [B11, B22, B33]),
        eq("c3", [A11, A22], [B33]),
        eq("c4", [A11, A33], [B22]),
        eq("c5", [A33, A22], [B11]),
        eq("c6", [A33], [B11, B22]),
        ("c7", big, (rhs_b, rhs_a)),
        eq("c8", [A22], [B11, B33]),
        eq("c9", [A11], [B33, B22]),
    ]


def check_three_term_rank_conditions(A11, B11, A22, B22, A33, B33, T1, tol=None):
    rank = _Ranker(tol)
    return [rank.equality(n, lhs, rhs) for n, lhs, rhs in three_term_rank_blocks(A11, B11, A22, B22, A33, B33, T1)]


# four-term equation -------------------------------------------------------------------

FOUR_TERM_NAMES = ("f1", "f2", "f3", "f4")


def check_four_term_rank_conditions(A1, B1, C3, D3, C4, D4, E1, tol=None):
    """Rank form for ``A1 X1 + X2 B1 + C3 X3 D3 + C4 X4 D4 = E1``."""
    rank = _Ranker(tol)
    m = _scaled(dict(A1=A1, B1=B1, C3=C3, D3=D3, C4=C4, D4=D4, E1=E1))
    A1, B1, C3, D3, C4, D4, E1 = (m[k] for k in ("A1", "B1", "C3", "D3", "C4", "D4", "E1"))

    def eq(name, arow, brows):
        grid = [[E1] + arow] + [[b] + [QMatrix.zeros(b.rows, a.cols) for a in arow] for b in brows]
        return rank.equality(name, block(grid), (vcat(*brows), hcat(*arow)))

    return [
        eq("f1", [C4, C3, A1], [B1]),
        eq("f2", [A1], [D3, D4, B1]),
        eq("f3", [C3, A1], [D4, B1]),
        eq("f4", [C4, A1], [D3, B1]),
    ]


# eta-Hermitian equation ---------------------------------------------------------------

ETA_NAMES = ("e1", "e2", "e3", "e4", "e5")


def check_eta_rank_conditions(inst: EtaInstance, tol=None, herm_tol=None):
    """The five rank equalities of the eta-Hermitian equation."""
    scale = inst.B.max_norm()
    if herm_tol is None:
        herm_tol = 1e-10 * (1.0 + scale)
    if not is_eta_hermitian(inst.B, inst.eta, herm_tol):
        raise NotEtaHermitian(f"B is not {inst.eta}-Hermitian within {herm_tol:.3g}")
    rank = _Ranker(tol)
    m = _scaled(inst.as_dict())
    B, A1, A2, A3, A4 = m["B"], m["A1"], m["A2"], m["A3"], m["A4"]
    h = {k: m[k].eta_h(inst.eta) for k in ("A1", "A2", "A3", "A4")}

    def eq(name, arow, brows, rhs):
        grid = [[B] + arow] + [[b] + [QMatrix.zeros(b.rows, a.cols) for a in arow] for b in brows]
        return rank.equality(name, block(grid), rhs)

    z = QMatrix.zeros
    n = B.rows
    w1, w2, w3, w4 = A1.cols, A2.cols, A3.cols, A4.cols
    big = block([
        [B, z(n, n), A2, z(n, w3), A4, A1, z(n, w1)],
        [z(n, n), -B, z(n, w2), A3, A4, z(n, w1), A1],
        [h["A3"], z(w3, n), z(w3, w2), z(w3, w3), z(w3, w4), z(w3, w1), z(w3, w1)],
        [z(w2, n), h["A2"], z(w2, w2), z(w2, w3), z(w2, w4), z(w2, w1), z(w2, w1)],
        [h["A4"], h["A4"], z(w4, w2), z(w4, w3), z(w4, w4), z(w4, w1), z(w4, w1)],
        [h["A1"], z(w1, n), z(w1, w2), z(w1, w3), z(w1, w4), z(w1, w1), z(w1, w1)],
        [z(w1, n), h["A1"], z(w1, w2), z(w1, w3), z(w1, w4), z(w1, w1), z(w1, w1)],
    ])
    rhs5 = block([[A2, z(n, w3), A4, A1, z(n, w1)], [z(n, w2), A3, A4, z(n, w1), A1]])
    return [
        eq("e1", [A2, A3, A4, A1], [h["A1"]], (A1, hcat(A2, A3, A4, A1))),
        eq("e2", [A2, A3, A1], [h["A4"], h["A1"]], (hcat(A2, A3, A1), hcat(A4, A1))),
        eq("e3", [A2, A4, A1], [h["A3"], h["A1"]], (hcat(A2, A4, A1), hcat(A3, A1))),
        eq("e4", [A3, A4, A1], [h["A2"], h["A1"]], (hcat(A3, A4, A1), hcat(A2, A1))),
        rank.equality("e5", big, (rhs5,), factor=2),
    ]


# pair system --------------------------------------------------------------------------

PAIR_SIDE_NAMES = ("A11LA22", "RB11B22")


def pair_side_conditions(sys: PairSystem, tol=None, cache=None):
    """Reports for the hypotheses ``A11 L_A22 = 0`` and ``R_B11 B22 = 0``."""
    c = cache or InverseCache(PINV_FLOOR)
    if tol is None:
        tol = projector_tol(max(m.max_norm() for m in sys.as_dict().values()))
    return [
        _residual_report("A11LA22", sys.A11 @ c.left(sys.A22), tol),
        _residual_report("RB11B22", c.right(sys.B11) @ sys.B22, tol),
    ]


def pair_unit_scaled(sys: PairSystem):
    """Scale ``A``, ``B`` and ``C`` groups by a common factor each.

    Returns the scaled system and ``(a, b, c)``; a solution of the scaled
    system times ``c / (a b)`` solves the original.
    """
    def group(*mats):
        s = max(m.max_norm() for m in mats)
        return s if s > 0 else 1.0

    a = group(sys.A11, sys.A22)
    b = group(sys.B11, sys.B22)
    c = group(sys.C1, sys.C2)
    scaled = PairSystem(sys.A11 / a, sys.B11 / b, sys.C1 / c, sys.A22 / a, sys.B22 / b, sys.C2 / c)
    return scaled, (a, b, c)


def check_pair_conditions(sys: PairSystem, tol=None, rank_tol=None):
    """Reports for the three equivalent consistency statements of the pair system.

    Names are prefixed ``P2:`` (vanishing projections), ``P3:`` (reproduction
    equalities) and ``P4:`` (rank equalities).  Raises
    :class:`SideConditionViolated` when the system's hypotheses fail.
    """
    sys, _ = pair_unit_scaled(sys)
    c = InverseCache(PINV_FLOOR)
    if tol is None:
        tol = projector_tol(1.0)
    side = pair_side_conditions(sys, tol, c)
    bad = [r.name for r in side if not r.holds]
    if bad:
        raise SideConditionViolated(f"pair-system hypotheses fail: {', '.join(bad)}")
    A11, B11, C1, A22, B22, C2 = (sys.A11, sys.B11, sys.C1, sys.A22, sys.B22, sys.C2)
    A11p, B11p, A22p, B22p = c.pinv(A11), c.pinv(B11), c.pinv(A22), c.pinv(B22)
    A1 = A22 @ c.left(A11)
    C11 = C2 - A22 @ A11p @ C1 @ B11p @ B22
    reports = [
        _residual_report("P2:RA11C1", c.right(A11) @ C1, tol),
        _residual_report("P2:C1LB11", C1 @ c.left(B11), tol),
        _residual_report("P2:RA22C2", c.right(A22) @ C2, tol),
        _residual_report("P2:C2LB22", C2 @ c.left(B22), tol),
        _residual_report("P2:RA1C11", c.right(A1) @ C11, tol),
        _residual_report("P3:A11C1B11", A11 @ A11p @ C1 @ B11p @ B11 - C1, tol),
        _residual_report("P3:A22C2B22", A22 @ A22p @ C2 @ B22p @ B22 - C2, tol),
        _residual_report("P3:C1B22", C1 @ B11p @ B22 - A11 @ A22p @ C2, tol),
    ]
    rank = _Ranker(rank_tol)
    z = QMatrix.zeros
    reports += [
        rank.equality("P4:rA11C1", hcat(A11, C1), (A11,)),
        rank.equality("P4:rB11C1", vcat(B11, C1), (B11,)),
        rank.equality("P4:rA22C2", hcat(A22, C2), (A22,)),
        rank.equality("P4:rB22C2", vcat(B22, C2), (B22,)),
        rank.equality("P4:block", block([
            [C1, z(C1.rows, C2.cols), A11],
            [z(C2.rows, C1.cols), -C2, A22],
            [B11, B22, z(B11.rows, A11.cols)],
        ]), (A22, B11)),
    ]
    return reports


def statement_verdicts(reports):
    """Verdict of each pair-system statement, keyed ``"P2"``, ``"P3"``, ``"P4"``."""
    return {p: verdict(r for r in reports if r.name.startswith(p + ":")) for p in ("P2", "P3", "P4")}
