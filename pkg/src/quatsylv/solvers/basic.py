"""Building blocks: the two-term, two-sided, four-term and pair solvers.

Each public solver scales its inputs to unit max entry norm, works on the
scaled copy with pseudoinverse cutoff ``max(auto, PINV_FLOOR)`` and scales the
answer back.  The ``_core`` functions take already-scaled data and a shared
:class:`~quatsylv.decomp.InverseCache`.
"""

from __future__ import annotations

from typing import NamedTuple

from ..conditions import (
    PINV_FLOOR,
    ConditionReport,
    INCONSISTENT,
    _residual_report,
    check_four_term_rank_conditions,
    check_pair_conditions,
    pair_side_conditions,
    pair_unit_scaled,
    projector_tol,
    statement_verdicts,
    unit_scaled,
    verdict,
)
from ..decomp import InverseCache
from ..errors import DimensionMismatch, Inconsistent
from ..instances import PairSystem
from ..qmatrix import QMatrix
from .params import (
    FOUR_TERM_PARAM_UNITS,
    as_parameters,
    axyb_parameter_shapes,
    four_term_parameter_shapes,
    pair_parameter_shapes,
)


def _need(cond, msg):
    if not cond:
        raise DimensionMismatch(msg)


# cores ------------------------------------------------------------------------------


def axyb_core(c, A, B, C, U1, U2, U3):
    """``A X + Y B = C``: the particular-plus-free solution (valid when consistent)."""
    Ap = c.pinv(A)
    X = Ap @ C - Ap @ U1 @ B + c.left(A) @ U2
    Y = c.right(A) @ C @ c.pinv(B) + A @ Ap @ U1 + U3 @ c.right(B)
    return X, Y


def two_sided_core(c, A, B, C, D, E, P1, P2, P3, P4, P5):
    """``A X B + C Y D = E``.

    Returns ``X``, ``Y`` and the four products that vanish exactly when the
    equation is consistent: ``R_M R_A E``, ``E L_B L_N``, ``R_A E L_D`` and
    ``R_C E L_B`` with ``M = R_A C``, ``N = D L_B``.
    """
    RA, LB = c.right(A), c.left(B)
    M = RA @ C
    N = D @ LB
    LM, RN = c.left(M), c.right(N)
    S = C @ LM
    Ap, Bp, Cp, Dp = c.pinv(A), c.pinv(B), c.pinv(C), c.pinv(D)
    Mp, Np, Sp = c.pinv(M), c.pinv(N), c.pinv(S)
    CEN = Cp @ E @ Np
    X = (Ap @ E @ Bp - Ap @ C @ Mp @ E @ Bp - Ap @ S @ CEN @ D @ Bp
         - Ap @ S @ P2 @ RN @ D @ Bp + c.left(A) @ P4 + P5 @ c.right(B))
    Y = Mp @ E @ Dp + Sp @ S @ CEN + LM @ c.left(S) @ P1 + LM @ P2 @ RN + P3 @ c.right(D)
    vanish = (c.right(M) @ RA @ E, E @ LB @ c.left(N), RA @ E @ c.left(D), c.right(C) @ E @ LB)
    return X, Y, vanish


def four_term_core(c, A1, B1, C3, D3, C4, D4, E1, p):
    """``A1 X1 + X2 B1 + C3 X3 D3 + C4 X4 D4 = E1`` with parameters ``p['T1'..'T8']``."""
    RA1, LB1 = c.right(A1), c.left(B1)
    X3, X4, vanish = two_sided_core(
        c, RA1 @ C3, D3 @ LB1, RA1 @ C4, D4 @ LB1, RA1 @ E1 @ LB1,
        p["T1"], p["T2"], p["T3"], p["T4"], p["T5"])
    rest = E1 - C3 @ X3 @ D3 - C4 @ X4 @ D4
    X1, X2 = axyb_core(c, A1, B1, rest, p["T7"], p["T6"], p["T8"])
    return X1, X2, X3, X4, vanish


def pair_core(c, s: PairSystem, V1, V2, V3):
    LA11 = c.left(s.A11)
    return (c.pinv(s.A11) @ s.C1 @ c.pinv(s.B11)
            + LA11 @ c.pinv(s.A22) @ s.C2 @ c.pinv(s.B22)
            + c.left(s.A22) @ V1 + V2 @ c.right(s.B11) + LA11 @ V3 @ c.right(s.B22))


# two-term -----------------------------------------------------------------------------


class AxybResult(NamedTuple):
    consistent: bool
    X: QMatrix | None
    Y: QMatrix | None
    report: ConditionReport


def solve_axyb(A1, B1, C1, params=None, tol=None) -> AxybResult:
    """Solve ``A1 X + Y B1 = C1``.

    Consistent iff ``R_A1 C1 L_B1`` vanishes (max entry norm at most ``tol``
    on the unit-scaled data, default ``2e-8``).  ``params`` supplies
    ``U1, U2, U3``; see :func:`~quatsylv.solvers.params.axyb_parameter_shapes`.
    """
    _need(A1.rows == C1.rows and B1.cols == C1.cols,
          f"A1 {A1.shape}, B1 {B1.shape} and C1 {C1.shape} are not conformable")
    _, p = as_parameters(params, axyb_parameter_shapes(A1, B1, C1))
    (A, a), (B, b), (C, s) = unit_scaled(A1), unit_scaled(B1), unit_scaled(C1)
    c = InverseCache(PINV_FLOOR)
    tol = projector_tol(1.0) if tol is None else tol
    rep = _residual_report("RA1C1LB1", c.right(A) @ C @ c.left(B), tol)
    if not rep.holds:
        return AxybResult(False, None, None, rep)
    X, Y = axyb_core(c, A, B, C, p["U1"] * (b / s), p["U2"] * (a / s), p["U3"] * (b / s))
    return AxybResult(True, X * (s / a), Y * (s / b), rep)


# four-term ----------------------------------------------------------------------------


class FourTermResult(NamedTuple):
    consistent: bool
    X1: QMatrix
    X2: QMatrix
    X3: QMatrix
    X4: QMatrix
    reports: list


FOUR_TERM_VANISH = ("RMRAE", "ELBLN", "RAELD", "RCELB")


def solve_four_term(A1, B1, C3, D3, C4, D4, E1, params=None, tol=None, rank_tol=None) -> FourTermResult:
    """Solve ``A1 X1 + X2 B1 + C3 X3 D3 + C4 X4 D4 = E1``.

    The verdict comes from the four rank equalities; the projector-form
    products are appended to ``reports`` as diagnostics.  Raises
    :class:`Inconsistent` with the reports when a rank equality fails.
    """
    m, n = E1.shape
    _need(A1.rows == m and C3.rows == m and C4.rows == m, "A1, C3, C4 need as many rows as E1")
    _need(B1.cols == n and D3.cols == n and D4.cols == n, "B1, D3, D4 need as many columns as E1")
    mats = (A1, B1, C3, D3, C4, D4, E1)
    _, p = as_parameters(params, four_term_parameter_shapes(*mats))
    reports = check_four_term_rank_conditions(*mats, tol=rank_tol)
    if verdict(reports) == INCONSISTENT:
        raise Inconsistent("four-term equation is inconsistent", reports=reports)
    (A1s, a1), (B1s, b1), (C3s, c3), (D3s, d3), (C4s, c4), (D4s, d4), (E1s, e) = map(unit_scaled, mats)
    unit = {"X1": e / a1, "X2": e / b1, "X3": e / (c3 * d3), "X4": e / (c4 * d4)}
    ps = {k: v / unit[FOUR_TERM_PARAM_UNITS[k]] for k, v in p.items()}
    c = InverseCache(PINV_FLOOR)
    X1, X2, X3, X4, vanish = four_term_core(c, A1s, B1s, C3s, D3s, C4s, D4s, E1s, ps)
    tol = projector_tol(1.0) if tol is None else tol
    reports = reports + [_residual_report(nm, v, tol) for nm, v in zip(FOUR_TERM_VANISH, vanish)]
    ok = verdict(reports[:4]) != INCONSISTENT
    return FourTermResult(ok, X1 * unit["X1"], X2 * unit["X2"], X3 * unit["X3"], X4 * unit["X4"], reports)


# pair system --------------------------------------------------------------------------


class PairResult(NamedTuple):
    consistent: bool
    X: QMatrix
    reports: list


def solve_pair_system(sys: PairSystem, V1=None, V2=None, V3=None, tol=None) -> PairResult:
    """Solve ``A11 X B11 = C1``, ``A22 X B22 = C2`` for a shared ``X``.

    Requires ``A11 L_A22 = 0`` and ``R_B11 B22 = 0``.  Consistency is decided
    by the vanishing-projection statement; the other two statements are
    reported alongside.  Missing ``V`` arguments default to zero.
    """
    given = {k: v for k, v in (("V1", V1), ("V2", V2), ("V3", V3)) if v is not None}
    _, p = as_parameters(given, pair_parameter_shapes(sys))
    reports = check_pair_conditions(sys, tol)
    if statement_verdicts(reports)["P2"] == INCONSISTENT:
        raise Inconsistent("pair system is inconsistent",
                           reports=[r for r in reports if not r.holds])
    s, (a, b, cs) = pair_unit_scaled(sys)
    unit = cs / (a * b)
    c = InverseCache(PINV_FLOOR)
    X = pair_core(c, s, p["V1"] / unit, p["V2"] / unit, p["V3"] / unit)
    return PairResult(True, X * unit, reports)


def pair_hypotheses_hold(sys: PairSystem, tol=None):
    s, _ = pair_unit_scaled(sys)
    return all(r.holds for r in pair_side_conditions(s, tol))

