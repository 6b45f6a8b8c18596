"""The eta-Hermitian equation
``A1 X1 + (A1 X1)^{eta*} + A2 Y1 A2^{eta*} + A3 Y2 A3^{eta*} + A4 Y3 A4^{eta*} = B``.

It is solved through the main equation with ``Bi = Ai^{eta*}``: any solution
``(X1h, X2h, Y1h, Y2h, Y3h)`` of that one symmetrizes to a solution here via
``X1 = (X1h + X2h^{eta*}) / 2`` and ``Yi = (Yih + Yih^{eta*}) / 2``.
"""

from __future__ import annotations

from typing import NamedTuple

from ..conditions import check_eta_rank_conditions
from ..instances import EtaInstance, EtaSolution, eta_lhs
from ..qmatrix import QMatrix, eta_conj_transpose
from .main import SolveReport, _solve


class EtaResult(NamedTuple):
    consistent: bool
    X1: QMatrix
    Y1: QMatrix
    Y2: QMatrix
    Y3: QMatrix
    report: SolveReport

    @property
    def solution(self):
        return EtaSolution(self.X1, self.Y1, self.Y2, self.Y3, self.report.branch)


def symmetrize(a: QMatrix, eta):
    return (a + eta_conj_transpose(a, eta)) * 0.5


def solve_eta(inst: EtaInstance, params=None, branch="f1", *, tol=None, rank_tol=None, herm_tol=None) -> EtaResult:
    """Decide consistency and build an eta-Hermitian solution.

    ``params`` are those of the auxiliary main equation.  Raises
    :class:`~quatsylv.errors.NotEtaHermitian` when ``B`` is not
    eta-Hermitian and :class:`~quatsylv.errors.Inconsistent` when a rank
    equality fails.  ``report.residual`` is the residual of this equation,
    not of the auxiliary one.
    """
    ranks = check_eta_rank_conditions(inst, rank_tol, herm_tol)
    report, hat = _solve(inst.auxiliary(), params, branch, ranks, tol, rank_tol)
    eta = inst.eta
    X1 = (hat.X1 + eta_conj_transpose(hat.X2, eta)) * 0.5
    sol = EtaSolution(X1, symmetrize(hat.Y1, eta), symmetrize(hat.Y2, eta), symmetrize(hat.Y3, eta), branch)
    report.residual = (eta_lhs(inst, sol) - inst.B).norm()
    return EtaResult(report.consistent, sol.X1, sol.Y1, sol.Y2, sol.Y3, report)
