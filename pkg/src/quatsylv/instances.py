"""Problem and solution containers for the equations handled by the solvers.

The main equation is

    A1 X1 + X2 B1 + A2 Y1 B2 + A3 Y2 B3 + A4 Y3 B4 = B

and the eta-Hermitian variant is

    A1 X1 + (A1 X1)^{eta*} + A2 Y1 A2^{eta*} + A3 Y2 A3^{eta*} + A4 Y3 A4^{eta*} = B.
"""

from __future__ import annotations

from dataclasses import dataclass, fields

from .errors import DimensionMismatch
from .qmatrix import QMatrix, eta_conj_transpose
from .quaternion import EtaAxis

MAIN_COEFFS = ("A1", "B1", "A2", "B2", "A3", "B3", "A4", "B4", "B")
MAIN_UNKNOWNS = ("X1", "X2", "Y1", "Y2", "Y3")
ETA_COEFFS = ("A1", "A2", "A3", "A4", "B")
ETA_UNKNOWNS = ("X1", "Y1", "Y2", "Y3")
PAIR_COEFFS = ("A11", "B11", "C1", "A22", "B22", "C2")


def _need(cond, msg):
    if not cond:
        raise DimensionMismatch(msg)


def max_entry_norm(*mats):
    return max((m.max_norm() for m in mats), default=0.0)


@dataclass(frozen=True)
class MainInstance:
    A1: QMatrix
    B1: QMatrix
    A2: QMatrix
    B2: QMatrix
    A3: QMatrix
    B3: QMatrix
    A4: QMatrix
    B4: QMatrix
    B: QMatrix

    def __post_init__(self):
        m, n = self.B.shape
        for name in ("A1", "A2", "A3", "A4"):
            _need(getattr(self, name).rows == m, f"{name} has {getattr(self, name).rows} rows, B has {m}")
        for name in ("B1", "B2", "B3", "B4"):
            _need(getattr(self, name).cols == n, f"{name} has {getattr(self, name).cols} columns, B has {n}")

    @classmethod
    def from_mapping(cls, mats):
        return cls(**{k: mats[k] for k in MAIN_COEFFS})

    def as_dict(self):
        return {f.name: getattr(self, f.name) for f in fields(self)}

    def unknown_shapes(self):
        """Shapes of ``X1, X2, Y1, Y2, Y3``."""
        m, n = self.B.shape
        return {
            "X1": (self.A1.cols, n),
            "X2": (m, self.B1.rows),
            "Y1": (self.A2.cols, self.B2.rows),
            "Y2": (self.A3.cols, self.B3.rows),
            "Y3": (self.A4.cols, self.B4.rows),
        }

    def scale(self):
        return max_entry_norm(*self.as_dict().values())


@dataclass(frozen=True)
class MainSolution:
    X1: QMatrix
    X2: QMatrix
    Y1: QMatrix
    Y2: QMatrix
    Y3: QMatrix
    branch: str = "f1"

    def as_dict(self):
        return {k: getattr(self, k) for k in MAIN_UNKNOWNS}


def check_solution_shapes(inst: MainInstance, sol: MainSolution):
    for name, shape in inst.unknown_shapes().items():
        got = getattr(sol, name).shape
        _need(got == shape, f"{name} has shape {got}, expected {shape}")


def main_lhs(inst: MainInstance, sol: MainSolution) -> QMatrix:
    check_solution_shapes(inst, sol)
    return (inst.A1 @ sol.X1 + sol.X2 @ inst.B1 + inst.A2 @ sol.Y1 @ inst.B2
            + inst.A3 @ sol.Y2 @ inst.B3 + inst.A4 @ sol.Y3 @ inst.B4)


@dataclass(frozen=True)
class PairSystem:
    """``A11 X B11 = C1`` and ``A22 X B22 = C2`` with a shared ``X``."""

    A11: QMatrix
    B11: QMatrix
    C1: QMatrix
    A22: QMatrix
    B22: QMatrix
    C2: QMatrix

    def __post_init__(self):
        _need(self.A11.cols == self.A22.cols, "A11 and A22 must have the same number of columns")
        _need(self.B11.rows == self.B22.rows, "B11 and B22 must have the same number of rows")
        _need(self.C1.shape == (self.A11.rows, self.B11.cols), f"C1 must be {self.A11.rows}x{self.B11.cols}")
        _need(self.C2.shape == (self.A22.rows, self.B22.cols), f"C2 must be {self.A22.rows}x{self.B22.cols}")

    @property
    def unknown_shape(self):
        return (self.A11.cols, self.B11.rows)

    def as_dict(self):
        return {k: getattr(self, k) for k in PAIR_COEFFS}


@dataclass(frozen=True)
class EtaInstance:
    A1: QMatrix
    A2: QMatrix
    A3: QMatrix
    A4: QMatrix
    B: QMatrix
    eta: EtaAxis

    def __post_init__(self):
        object.__setattr__(self, "eta", EtaAxis.parse(self.eta))
        _need(self.B.rows == self.B.cols, f"B must be square, got {self.B.shape}")
        for name in ("A1", "A2", "A3", "A4"):
            _need(getattr(self, name).rows == self.B.rows, f"{name} must have {self.B.rows} rows")

    def as_dict(self):
        return {k: getattr(self, k) for k in ETA_COEFFS}

    def auxiliary(self) -> MainInstance:
        """The main instance with ``Bi = Ai^{eta*}``."""
        h = lambda a: eta_conj_transpose(a, self.eta)  # noqa: E731
        return MainInstance(self.A1, h(self.A1), self.A2, h(self.A2), self.A3, h(self.A3),
                            self.A4, h(self.A4), self.B)

    def unknown_shapes(self):
        n = self.B.rows
        return {"X1": (self.A1.cols, n), "Y1": (self.A2.cols,) * 2,
                "Y2": (self.A3.cols,) * 2, "Y3": (self.A4.cols,) * 2}


@dataclass(frozen=True)
class EtaSolution:
    X1: QMatrix
    Y1: QMatrix
    Y2: QMatrix
    Y3: QMatrix
    branch: str = "f1"

    def as_dict(self):
        return {k: getattr(self, k) for k in ETA_UNKNOWNS}


def eta_lhs(inst: EtaInstance, sol: EtaSolution) -> QMatrix:
    for name, shape in inst.unknown_shapes().items():
        got = getattr(sol, name).shape
        _need(got == shape, f"{name} has shape {got}, expected {shape}")
    h = lambda a: eta_conj_transpose(a, inst.eta)  # noqa: E731
    ax = inst.A1 @ sol.X1
    return (ax + h(ax) + inst.A2 @ sol.Y1 @ h(inst.A2) + inst.A3 @ sol.Y2 @ h(inst.A3)
            + inst.A4 @ sol.Y3 @ h(inst.A4))
