"""Problem and solution files.

Both are JSON documents::

    {"format": 1, "kind": "main", "eta": null, "tol": null,
     "matrices": {"A1": {"rows": 2, "cols": 2, "entries": [[[w, x, y, z], ...], ...]}, ...}}

Solution files add ``"solution": true`` and the metadata ``branch``,
``params``, ``seed`` and ``residual``.  Floats are written with ``repr``, the
shortest decimal that reads back to the same double, so a write/read round
trip is bit-exact.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import DimensionMismatch, NotEtaHermitian, ParseError, ValidationError
from .instances import ETA_COEFFS, MAIN_COEFFS, PAIR_COEFFS, EtaInstance, MainInstance, PairSystem
from .qmatrix import QMatrix
from .quaternion import EtaAxis

FORMAT = 1

KIND_MATRICES = {
    "main": MAIN_COEFFS,
    "four-term": ("A1", "B1", "C3", "D3", "C4", "D4", "E1"),
    "three-term": ("A11", "B11", "A22", "B22", "A33", "B33", "T1"),
    "pair": PAIR_COEFFS,
    "axyb": ("A1", "B1", "C1"),
    "eta": ETA_COEFFS,
}
KIND_UNKNOWNS = {
    "main": ("X1", "X2", "Y1", "Y2", "Y3"),
    "four-term": ("X1", "X2", "X3", "X4"),
    "three-term": ("Y1", "Y2", "Y3"),
    "pair": ("X",),
    "axyb": ("X", "Y"),
    "eta": ("X1", "Y1", "Y2", "Y3"),
}
KINDS = tuple(KIND_MATRICES)


@dataclass
class ProblemFile:
    kind: str
    matrices: dict
    eta: EtaAxis | None = None
    tol: float | None = None

    def instance(self):
        """The typed problem: an instance class, or the matrix dict for the plain kinds."""
        m = self.matrices
        if self.kind == "main":
            return MainInstance.from_mapping(m)
        if self.kind == "eta":
            return EtaInstance(eta=self.eta, **{k: m[k] for k in ETA_COEFFS})
        if self.kind == "pair":
            return PairSystem(**{k: m[k] for k in PAIR_COEFFS})
        return {k: m[k] for k in KIND_MATRICES[self.kind]}

    def unknown_shapes(self):
        m = self.matrices
        if self.kind == "main":
            return MainInstance.from_mapping(m).unknown_shapes()
        if self.kind == "eta":
            return self.instance().unknown_shapes()
        if self.kind == "pair":
            return {"X": self.instance().unknown_shape}
        if self.kind == "axyb":
            return {"X": (m["A1"].cols, m["C1"].cols), "Y": (m["C1"].rows, m["B1"].rows)}
        if self.kind == "four-term":
            return {"X1": (m["A1"].cols, m["E1"].cols), "X2": (m["E1"].rows, m["B1"].rows),
                    "X3": (m["C3"].cols, m["D3"].rows), "X4": (m["C4"].cols, m["D4"].rows)}
        return {"Y1": (m["A11"].cols, m["B11"].rows), "Y2": (m["A22"].cols, m["B22"].rows),
                "Y3": (m["A33"].cols, m["B33"].rows)}


@dataclass
class SolutionFile:
    kind: str
    matrices: dict
    branch: str | None = None
    params: str | None = None
    seed: int | None = None
    residual: float | None = None
    eta: EtaAxis | None = None
    extra: dict = field(default_factory=dict)


# residuals --------------------------------------------------------------------------


def lhs(problem: ProblemFile, unknowns: dict) -> QMatrix:
    """Left-hand side of the problem's equation at ``unknowns``."""
    m, u, kind = problem.matrices, unknowns, problem.kind
    for name, shape in problem.unknown_shapes().items():
        if name not in u:
            raise ValidationError(f"solution lacks {name}")
        if u[name].shape != tuple(shape):
            raise ValidationError(f"solution {name} has shape {u[name].shape}, expected {tuple(shape)}")
    if kind == "main":
        return (m["A1"] @ u["X1"] + u["X2"] @ m["B1"] + m["A2"] @ u["Y1"] @ m["B2"]
                + m["A3"] @ u["Y2"] @ m["B3"] + m["A4"] @ u["Y3"] @ m["B4"])
    if kind == "eta":
        from .instances import EtaSolution, eta_lhs
        return eta_lhs(problem.instance(), EtaSolution(**{k: u[k] for k in KIND_UNKNOWNS["eta"]}))
    if kind == "axyb":
        return m["A1"] @ u["X"] + u["Y"] @ m["B1"]
    if kind == "four-term":
        return (m["A1"] @ u["X1"] + u["X2"] @ m["B1"] + m["C3"] @ u["X3"] @ m["D3"]
                + m["C4"] @ u["X4"] @ m["D4"])
    if kind == "three-term":
        return (m["A11"] @ u["Y1"] @ m["B11"] + m["A22"] @ u["Y2"] @ m["B22"]
                + m["A33"] @ u["Y3"] @ m["B33"])
    raise ValueError("the pair system has two equations; use residual()")


def residual(problem: ProblemFile, unknowns: dict) -> float:
    """Frobenius norm of the equation error (both equations stacked for ``pair``)."""
    m = problem.matrices
    if problem.kind == "pair":
        X = unknowns.get("X")
        shape = problem.instance().unknown_shape
        if X is None:
            raise ValidationError("solution lacks X")
        if X.shape != shape:
            raise ValidationError(f"solution X has shape {X.shape}, expected {shape}")
        r1 = (m["A11"] @ X @ m["B11"] - m["C1"]).norm()
        r2 = (m["A22"] @ X @ m["B22"] - m["C2"]).norm()
        return math.hypot(r1, r2)
    return (lhs(problem, unknowns) - rhs(problem)).norm()


def rhs(problem: ProblemFile) -> QMatrix:
    return problem.matrices[{"main": "B", "eta": "B", "axyb": "C1", "four-term": "E1",
                             "three-term": "T1"}[problem.kind]]


# reading ------------------------------------------------------------------------------


def _load_json(text, source):
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"{source}:{e.lineno}:{e.colno}: {e.msg}") from None


def _field(doc, key, source, types, required=True):
    if key not in doc:
        if required:
            raise ParseError(f"{source}: missing field '{key}'")
        return None
    v = doc[key]
    if v is not None and not isinstance(v, types):
        raise ParseError(f"{source}: field '{key}' has type {type(v).__name__}")
    return v


def _real(v, locus):
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ParseError(f"{locus}: expected a number, got {json.dumps(v)}")
    v = float(v)
    if not math.isfinite(v):
        raise ParseError(f"{locus}: non-finite value")
    return v


def _matrix(name, doc, source):
    locus = f"{source}: matrices.{name}"
    if not isinstance(doc, dict):
        raise ParseError(f"{locus}: expected an object with rows, cols, entries")
    rows = _field(doc, "rows", locus, int)
    cols = _field(doc, "cols", locus, int)
    entries = _field(doc, "entries", locus, list)
    if rows < 0 or cols < 0:
        raise ParseError(f"{locus}: negative dimension")
    if len(entries) != rows:
        raise ParseError(f"{locus}.entries: {len(entries)} rows, declared {rows}")
    data = np.zeros((rows, cols, 4))
    for i, row in enumerate(entries):
        if not isinstance(row, list) or len(row) != cols:
            raise ParseError(f"{locus}.entries[{i}]: expected a list of {cols} quaternions")
        for j, q in enumerate(row):
            if not isinstance(q, list) or len(q) != 4:
                raise ParseError(f"{locus}.entries[{i}][{j}]: expected [w, x, y, z], got {json.dumps(q)}")
            data[i, j] = [_real(v, f"{locus}.entries[{i}][{j}]") for v in q]
    return QMatrix(data, check=False)


def _header(doc, source, solution):
    if not isinstance(doc, dict):
        raise ParseError(f"{source}: top level must be an object")
    fmt = _field(doc, "format", source, int)
    if fmt != FORMAT:
        raise ParseError(f"{source}: unsupported format {fmt}")
    kind = _field(doc, "kind", source, str)
    if kind not in KINDS:
        raise ParseError(f"{source}: kind must be one of {', '.join(KINDS)}, got {kind!r}")
    if bool(doc.get("solution", False)) != solution:
        raise ParseError(f"{source}: expected a {'solution' if solution else 'problem'} file")
    eta = _field(doc, "eta", source, str, required=False)
    try:
        eta = None if eta is None else EtaAxis.parse(eta)
    except ValueError as e:
        raise ParseError(f"{source}: {e}") from None
    mats = _field(doc, "matrices", source, dict)
    return kind, eta, {k: _matrix(k, v, source) for k, v in mats.items()}


def loads_problem(text, source="<string>") -> ProblemFile:
    doc = _load_json(text, source)
    kind, eta, mats = _header(doc, source, solution=False)
    tol = _field(doc, "tol", source, (int, float), required=False)
    if tol is not None:
        tol = _real(tol, f"{source}: tol")
        if tol < 0:
            raise ParseError(f"{source}: tol must be nonnegative")
    missing = [k for k in KIND_MATRICES[kind] if k not in mats]
    if missing:
        raise ValidationError(f"{source}: kind {kind} needs matrices {', '.join(missing)}")
    extra = sorted(set(mats) - set(KIND_MATRICES[kind]))
    if extra:
        raise ValidationError(f"{source}: unexpected matrices {', '.join(extra)} for kind {kind}")
    if kind == "eta" and eta is None:
        raise ValidationError(f"{source}: kind eta needs an 'eta' axis")
    problem = ProblemFile(kind, {k: mats[k] for k in KIND_MATRICES[kind]}, eta, tol)
    validate(problem, source)
    return problem


def parse_problem(path) -> ProblemFile:
    path = Path(path)
    return loads_problem(path.read_text(), str(path))


def loads_solution(text, source="<string>") -> SolutionFile:
    doc = _load_json(text, source)
    kind, eta, mats = _header(doc, source, solution=True)
    known = ("format", "kind", "solution", "eta", "matrices", "branch", "params", "seed", "residual")
    return SolutionFile(
        kind, mats,
        branch=_field(doc, "branch", source, str, required=False),
        params=_field(doc, "params", source, str, required=False),
        seed=_field(doc, "seed", source, int, required=False),
        residual=_field(doc, "residual", source, (int, float), required=False),
        eta=eta,
        extra={k: v for k, v in doc.items() if k not in known},
    )


def parse_solution(path) -> SolutionFile:
    path = Path(path)
    return loads_solution(path.read_text(), str(path))


def _conform(cond, source, msg):
    if not cond:
        raise ValidationError(f"{source}: {msg}")


def validate(problem: ProblemFile, source="<problem>"):
    """Raise :class:`ValidationError` unless the shapes conform for the kind."""
    m, kind = problem.matrices, problem.kind
    try:
        problem.instance()
    except (DimensionMismatch, NotEtaHermitian) as e:
        raise ValidationError(f"{source}: {e}") from None
    if kind in ("axyb", "four-term", "three-term"):
        r, c = rhs(problem).shape
        lefts = {"axyb": ("A1",), "four-term": ("A1", "C3", "C4"), "three-term": ("A11", "A22", "A33")}[kind]
        rights = {"axyb": ("B1",), "four-term": ("B1", "D3", "D4"), "three-term": ("B11", "B22", "B33")}[kind]
        for name in lefts:
            _conform(m[name].rows == r, source, f"{name} has {m[name].rows} rows, right-hand side has {r}")
        for name in rights:
            _conform(m[name].cols == c, source, f"{name} has {m[name].cols} columns, right-hand side has {c}")


# writing ------------------------------------------------------------------------------


def _matrix_doc(a: QMatrix):
    return {"rows": a.rows, "cols": a.cols, "entries": a.data.tolist()}


def _dump(doc):
    """JSON with one matrix row per line."""
    head = {k: v for k, v in doc.items() if k != "matrices"}
    lines = ["{"] + [f"  {json.dumps(k)}: {json.dumps(v)}," for k, v in head.items()]
    lines.append('  "matrices": {')
    mats = list(doc["matrices"].items())
    for i, (name, m) in enumerate(mats):
        rows = [json.dumps(r) for r in m["entries"]]
        body = ",\n".join(f"      {r}" for r in rows)
        lines.append(f'    {json.dumps(name)}: {{"rows": {m["rows"]}, "cols": {m["cols"]}, "entries": ['
                     + (f"\n{body}\n    " if rows else "") + "]}" + ("," if i < len(mats) - 1 else ""))
    lines += ["  }", "}"]
    return "\n".join(lines) + "\n"


def dumps_problem(problem: ProblemFile) -> str:
    return _dump({
        "format": FORMAT,
        "kind": problem.kind,
        "eta": None if problem.eta is None else str(problem.eta),
        "tol": problem.tol,
        "matrices": {k: _matrix_doc(v) for k, v in problem.matrices.items()},
    })


def dumps_solution(sol: SolutionFile) -> str:
    doc = {
        "format": FORMAT,
        "kind": sol.kind,
        "solution": True,
        "eta": None if sol.eta is None else str(sol.eta),
        "branch": sol.branch,
        "params": sol.params,
        "seed": sol.seed,
        "residual": sol.residual,
    }
    doc.update(sol.extra)
    doc["matrices"] = {k: _matrix_doc(v) for k, v in sol.matrices.items()}
    return _dump(doc)


def write_problem(problem: ProblemFile, path):
    Path(path).write_text(dumps_problem(problem))


def write_solution(sol: SolutionFile, path):
    Path(path).write_text(dumps_solution(sol))


def bundled(name) -> Path:
    """Path of a data file shipped with the package, e.g. ``reference_example.json``."""
    from importlib.resources import files

    return Path(str(files("quatsylv") / "data" / name))
