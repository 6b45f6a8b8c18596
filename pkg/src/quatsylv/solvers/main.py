"""The five-term equation ``A1 X1 + X2 B1 + A2 Y1 B2 + A3 Y2 B3 + A4 Y3 B4 = B``.

Solving follows the reduction chain: compress by ``R_A1``/``L_B1`` to a
three-term two-sided equation in the ``Y``'s, turn its solvability in ``Y3``
into four one-sided-projected equations, solve their coupled form for the
``V``/``W`` blocks, build ``Y3``, then ``Y1, Y2`` from the two-sided layer and
finally ``X1, X2`` from the two-term layer.
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields

from ..conditions import (
    CONSISTENT,
    INCONSISTENT,
    PINV_FLOOR,
    check_implied_conditions,
    check_projector_conditions,
    check_rank_conditions,
    check_three_term_rank_conditions,
    unit_scaled,
    verdict,
)
from ..decomp import InverseCache
from ..errors import Inconsistent
from ..instances import MainInstance, MainSolution, main_lhs
from ..qmatrix import QMatrix, hcat, vcat
from .basic import axyb_core, four_term_core, two_sided_core
from .params import MAIN_PARAM_UNITS, FreeParameters, as_parameters, main_parameter_shapes

BRANCHES = ("f1", "f2")


@dataclass(frozen=True)
class MainDerived:
    """Every intermediate of the reduction, computed from one instance."""

    instance: MainInstance
    A11: QMatrix
    A22: QMatrix
    A33: QMatrix
    B11: QMatrix
    B22: QMatrix
    B33: QMatrix
    M1: QMatrix
    S1: QMatrix
    N1: QMatrix
    T1: QMatrix
    C: QMatrix
    C1: QMatrix
    C2: QMatrix
    C3: QMatrix
    C4: QMatrix
    D: QMatrix
    D1: QMatrix
    D2: QMatrix
    D3: QMatrix
    D4: QMatrix
    E1: QMatrix
    E2: QMatrix
    E3: QMatrix
    E4: QMatrix
    C11: QMatrix
    D11: QMatrix
    C22: QMatrix
    D22: QMatrix
    C33: QMatrix
    D33: QMatrix
    E11: QMatrix
    E22: QMatrix
    E33: QMatrix
    E44: QMatrix
    M: QMatrix
    N: QMatrix
    S: QMatrix
    F: QMatrix
    E: QMatrix
    F11: QMatrix
    G1: QMatrix
    F22: QMatrix
    G2: QMatrix
    F1: QMatrix
    F2: QMatrix
    cache: InverseCache = field(repr=False, compare=False)

    def matrices(self):
        return {f.name: getattr(self, f.name) for f in fields(self) if f.name not in ("instance", "cache")}


def derive_main_quantities(inst: MainInstance, floor=None) -> MainDerived:
    """All intermediates of the reduction chain.

    ``floor`` is the absolute pseudoinverse cutoff; the default is
    ``PINV_FLOOR`` times the largest input entry norm, which is what the
    solver uses on its unit-scaled copy.
    """
    if floor is None:
        floor = PINV_FLOOR * (inst.scale() or 1.0)
    c = InverseCache(floor)
    A1, B1, A2, B2, A3, B3, A4, B4, B = (inst.A1, inst.B1, inst.A2, inst.B2, inst.A3,
                                        inst.B3, inst.A4, inst.B4, inst.B)
    RA1, LB1 = c.right(A1), c.left(B1)
    A11, A22, A33 = RA1 @ A2, RA1 @ A3, RA1 @ A4
    B11, B22, B33 = B2 @ LB1, B3 @ LB1, B4 @ LB1
    N1 = B22 @ c.left(B11)
    M1 = c.right(A11) @ A22
    S1 = A22 @ c.left(M1)
    T1 = RA1 @ B @ LB1

    C = c.right(M1) @ c.right(A11)
    C1, C2, C3, C4 = C @ A33, c.right(A11) @ A33, c.right(A22) @ A33, A33
    D = c.left(B11) @ c.left(N1)
    D1, D2, D3, D4 = B33, B33 @ c.left(B22), B33 @ c.left(B11), B33 @ D
    E1 = C @ T1
    E2 = c.right(A11) @ T1 @ c.left(B22)
    E3 = c.right(A22) @ T1 @ c.left(B11)
    E4 = T1 @ D

    C11 = hcat(c.left(C2), c.left(C4))
    D11 = vcat(c.right(D1), c.right(D3))
    C22, D22, C33, D33 = c.left(C1), c.right(D2), c.left(C3), c.right(D4)
    E11, E22 = c.right(C11) @ C22, c.right(C11) @ C33
    E33, E44 = D22 @ c.left(D11), D33 @ c.left(D11)
    M = c.right(E11) @ E22
    N = E44 @ c.left(E33)
    S = E22 @ c.left(M)

    C1p, C2p, C3p, C4p = (c.pinv(x) for x in (C1, C2, C3, C4))
    D1p, D2p, D3p, D4p = (c.pinv(x) for x in (D1, D2, D3, D4))
    F11 = C2 @ c.left(C1)
    G1 = E2 - C2 @ C1p @ E1 @ D1p @ D2
    F22 = C4 @ c.left(C3)
    G2 = E4 - C4 @ C3p @ E3 @ D3p @ D4
    F1 = C1p @ E1 @ D1p + c.left(C1) @ C2p @ E2 @ D2p
    F2 = C3p @ E3 @ D3p + c.left(C3) @ C4p @ E4 @ D4p
    F = F2 - F1
    E = c.right(C11) @ F @ c.left(D11)
    return MainDerived(inst, A11, A22, A33, B11, B22, B33, M1, S1, N1, T1,
                       C, C1, C2, C3, C4, D, D1, D2, D3, D4, E1, E2, E3, E4,
                       C11, D11, C22, D22, C33, D33, E11, E22, E33, E44, M, N, S, F, E,
                       F11, G1, F22, G2, F1, F2, c)


@dataclass
class SolveReport:
    """Verdict, both condition families and, when solved, the solution.

    ``verdict`` comes from the rank form.  ``derived`` holds the
    intermediates of the unit-scaled instance the solver worked on.
    """

    verdict: str
    rank_reports: list
    projector_reports: list
    implied_reports: list
    derived: MainDerived | None = None
    solution: MainSolution | None = None
    residual: float | None = None
    params: FreeParameters | None = None
    branch: str = "f1"

    @property
    def consistent(self):
        return self.verdict == CONSISTENT

    @property
    def projector_verdict(self):
        return verdict(self.projector_reports)

    @property
    def forms_agree(self):
        return self.verdict == self.projector_verdict


class _Scaled:
    """Unit-scaled copy of a main instance plus the factors to undo it."""

    def __init__(self, inst: MainInstance):
        parts = {k: unit_scaled(v) for k, v in inst.as_dict().items()}
        self.inst = MainInstance(**{k: v[0] for k, v in parts.items()})
        f = {k: v[1] for k, v in parts.items()}
        beta = f["B"]
        self.unit = {
            "X1": beta / f["A1"], "X2": beta / f["B1"],
            "Y1": beta / (f["A2"] * f["B2"]), "Y2": beta / (f["A3"] * f["B3"]),
            "Y3": beta / (f["A4"] * f["B4"]),
        }


def _assess(inst: MainInstance, rank_reports=None, tol=None, rank_tol=None):
    scaled = _Scaled(inst)
    if rank_reports is None:
        rank_reports = check_rank_conditions(inst, rank_tol)
    d = derive_main_quantities(scaled.inst, PINV_FLOOR)
    report = SolveReport(verdict(rank_reports), rank_reports,
                         check_projector_conditions(d, tol), check_implied_conditions(d, tol), d)
    return report, scaled


def assess_main(inst: MainInstance, tol=None, rank_tol=None) -> SolveReport:
    """Both condition families and the verdict, without solving."""
    return _assess(inst, None, tol, rank_tol)[0]


def _build(d: MainDerived, p, branch):
    inst, c = d.instance, d.cache
    m3, n3 = inst.A4.cols, inst.B4.rows
    t = {"T1": p["U41"], "T2": p["U31"], "T3": -p["U42"], "T4": p["U32"], "T5": p["U33"],
         "T6": p["U12"], "T7": p["U11"], "T8": p["U21"]}
    VW1, VW2, V3, W3, _ = four_term_core(c, d.C11, d.D11, d.C22, d.D22, d.C33, d.D33, d.F, t)
    if branch == "f1":
        V1, V2 = VW1[:m3], VW2[:, :n3]
        Y3 = d.F1 + c.left(d.C2) @ V1 + V2 @ c.right(d.D1) + c.left(d.C1) @ V3 @ c.right(d.D2)
    elif branch == "f2":
        W1, W2 = VW1[m3:], VW2[:, n3:]
        Y3 = d.F2 - c.left(d.C4) @ W1 - W2 @ c.right(d.D3) - c.left(d.C3) @ W3 @ c.right(d.D4)
    else:
        raise ValueError(f"branch must be one of {BRANCHES}, got {branch!r}")
    T = d.T1 - d.A33 @ Y3 @ d.B33
    Y1, Y2, _ = two_sided_core(c, d.A11, d.B11, d.A22, d.B22, T,
                               p["U7"], p["U4"], p["U8"], p["U5"], p["U6"])
    rest = inst.B - inst.A2 @ Y1 @ inst.B2 - inst.A3 @ Y2 @ inst.B3 - inst.A4 @ Y3 @ inst.B4
    X1, X2 = axyb_core(c, inst.A1, inst.B1, rest, p["U1"], p["U2"], p["U3"])
    return MainSolution(X1, X2, Y1, Y2, Y3, branch)


def _solve(inst, params, branch, rank_reports=None, tol=None, rank_tol=None):
    if branch not in BRANCHES:
        raise ValueError(f"branch must be one of {BRANCHES}, got {branch!r}")
    params, p = as_parameters(params, main_parameter_shapes(inst))
    report, scaled = _assess(inst, rank_reports, tol, rank_tol)
    report.params, report.branch = params, branch
    if report.verdict == INCONSISTENT:
        failed = ", ".join(r.name for r in report.rank_reports if not r.holds)
        raise Inconsistent(f"equation is inconsistent (fails {failed})", report=report)
    u = scaled.unit
    ps = {k: v / u[MAIN_PARAM_UNITS[k]] for k, v in p.items()}
    raw = _build(report.derived, ps, branch)
    sol = MainSolution(*(getattr(raw, k) * u[k] for k in ("X1", "X2", "Y1", "Y2", "Y3")), branch)
    report.solution = sol
    report.residual = (main_lhs(inst, sol) - inst.B).norm()
    return report, sol


def solve_main(inst: MainInstance, params=None, branch="f1", *, tol=None, rank_tol=None):
    """Decide consistency and build one member of the solution family.

    ``params`` is ``None`` (all zero), ``"zero"``, ``"random"`` (seed 0), a
    mapping of parameter names to matrices, or :class:`FreeParameters`; see
    :func:`~quatsylv.solvers.params.main_parameter_shapes`.  ``branch`` picks
    which of the two equivalent ``Y3`` forms to use.

    Returns ``(report, solution)``.  Raises :class:`Inconsistent` carrying the
    report when a rank equality fails.  An indeterminate verdict still
    produces a solution; check ``report.residual``.
    """
    return _solve(inst, params, branch, None, tol, rank_tol)


# three-term ---------------------------------------------------------------------------


def three_term_instance(A11, B11, A22, B22, A33, B33, T1) -> MainInstance:
    """The main instance with an empty ``A1``/``B1`` pair."""
    m, n = T1.shape
    return MainInstance(QMatrix.zeros(m, 0), QMatrix.zeros(0, n), A11, B11, A22, B22, A33, B33, T1)


def solve_three_term(A11, B11, A22, B22, A33, B33, T1, params=None, branch="f1", *, tol=None, rank_tol=None):
    """Solve ``A11 Y1 B11 + A22 Y2 B22 + A33 Y3 B33 = T1``.

    Runs the main solver with ``A1``, ``B1`` empty; the verdict uses the
    nine rank equalities specific to this equation.  Returns
    ``(report, (Y1, Y2, Y3))``.
    """
    inst = three_term_instance(A11, B11, A22, B22, A33, B33, T1)
    ranks = check_three_term_rank_conditions(A11, B11, A22, B22, A33, B33, T1, rank_tol)
    report, sol = _solve(inst, params, branch, ranks, tol, rank_tol)
    return report, (sol.Y1, sol.Y2, sol.Y3)
