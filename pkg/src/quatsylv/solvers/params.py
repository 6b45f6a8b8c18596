"""Free parameters of the solution families and their shape tables.

The closed-form solutions are families indexed by arbitrary matrices.  Their
shapes follow from the formulas they appear in; each table below lists them
in a fixed order, which also fixes the random stream used for each one.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .. import rng
from ..errors import DimensionMismatch
from ..qmatrix import QMatrix

MAIN_PARAMS = ("U1", "U2", "U3", "U4", "U5", "U6", "U7", "U8",
               "U11", "U12", "U21", "U31", "U32", "U33", "U41", "U42")

# which unknown each main parameter shares units with (used for rescaling)
MAIN_PARAM_UNITS = {
    "U1": "X2", "U2": "X1", "U3": "X2",
    "U4": "Y2", "U5": "Y1", "U6": "Y1", "U7": "Y2", "U8": "Y2",
    **{k: "Y3" for k in ("U11", "U12", "U21", "U31", "U32", "U33", "U41", "U42")},
}


def main_parameter_shapes(inst):
    m, n = inst.B.shape
    k1, l1 = inst.A1.cols, inst.B1.rows
    y1 = (inst.A2.cols, inst.B2.rows)
    y2 = (inst.A3.cols, inst.B3.rows)
    m3, n3 = inst.A4.cols, inst.B4.rows
    return {
        "U1": (m, l1), "U2": (k1, n), "U3": (m, l1),
        "U4": y2, "U5": y1, "U6": y1, "U7": y2, "U8": y2,
        "U11": (m3, 2 * n3), "U12": (2 * m3, n3), "U21": (m3, 2 * n3),
        "U31": (m3, n3), "U32": (m3, n3), "U33": (m3, n3), "U41": (m3, n3), "U42": (m3, n3),
    }


FOUR_TERM_PARAMS = ("T1", "T2", "T3", "T4", "T5", "T6", "T7", "T8")
FOUR_TERM_PARAM_UNITS = {"T1": "X4", "T2": "X4", "T3": "X4", "T4": "X3", "T5": "X3",
                         "T6": "X1", "T7": "X2", "T8": "X2"}


def four_term_parameter_shapes(A1, B1, C3, D3, C4, D4, E1):
    x4 = (C4.cols, D4.rows)
    x3 = (C3.cols, D3.rows)
    return {"T1": x4, "T2": x4, "T3": x4, "T4": x3, "T5": x3,
            "T6": (A1.cols, E1.cols), "T7": (A1.rows, B1.rows), "T8": (A1.rows, B1.rows)}


def axyb_parameter_shapes(A, B, C):
    y = (A.rows, B.rows)
    return {"U1": y, "U2": (A.cols, C.cols), "U3": y}


def pair_parameter_shapes(sys):
    x = sys.unknown_shape
    return {"V1": x, "V2": x, "V3": x}


@dataclass(frozen=True)
class FreeParameters:
    """A named set of parameter matrices; ``mode`` records how it was made."""

    values: dict = field(default_factory=dict)
    mode: str = "zero"
    seed: int | None = None

    @classmethod
    def zeros(cls, shapes):
        return cls({k: QMatrix.zeros(*s) for k, s in shapes.items()}, "zero")

    @classmethod
    def random(cls, shapes, seed, scale=1.0):
        vals = {k: rng.uniform_qmatrix(rng.stream(seed, rng.PARAMS, i), s, scale)
                for i, (k, s) in enumerate(shapes.items())}
        return cls(vals, "random", int(seed))

    @classmethod
    def make(cls, shapes, mode="zero", seed=None):
        if mode == "zero":
            return cls.zeros(shapes)
        if mode == "random":
            return cls.random(shapes, 0 if seed is None else seed)
        raise ValueError(f"unknown parameter mode {mode!r}")

    def __getitem__(self, name):
        return self.values[name]

    def resolved(self, shapes):
        """Values for every slot of ``shapes``, zero-filling missing ones and checking sizes."""
        out = {}
        for k, s in shapes.items():
            v = self.values.get(k)
            if v is None:
                v = QMatrix.zeros(*s)
            elif v.shape != tuple(s):
                raise DimensionMismatch(f"parameter {k} has shape {v.shape}, expected {tuple(s)}")
            out[k] = v
        unknown = set(self.values) - set(shapes)
        if unknown:
            raise DimensionMismatch(f"unknown parameters: {', '.join(sorted(unknown))}")
        return out


def as_parameters(params, shapes):
    """Accept ``None``, a mode string, a mapping or :class:`FreeParameters`."""
    if params is None:
        params = FreeParameters.zeros(shapes)
    elif isinstance(params, str):
        params = FreeParameters.make(shapes, params)
    elif not isinstance(params, FreeParameters):
        params = FreeParameters(dict(params), "given")
    return params, params.resolved(shapes)
