"""Command-line front end: ``check``, ``solve``, ``verify``, ``gen``, ``eta-solve``.

Exit codes: 0 consistent or verified, 2 inconsistent or failed verification,
3 indeterminate, 4 generation failure, 1 usage, parse or validation errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import conditions as cond
from . import genval
from .errors import GenerationFailed, Inconsistent, NotEtaHermitian, ParseError, SideConditionViolated, ValidationError
from .fileio import (
    ProblemFile,
    SolutionFile,
    dumps_solution,
    parse_problem,
    parse_solution,
    residual,
    rhs,
    write_problem,
    write_solution,
)
from .quaternion import EtaAxis
from .solvers import (
    FreeParameters,
    axyb_parameter_shapes,
    four_term_parameter_shapes,
    main_parameter_shapes,
    pair_parameter_shapes,
    solve_axyb,
    solve_eta,
    solve_four_term,
    solve_main,
    solve_pair_system,
    solve_three_term,
)
from .solvers.main import three_term_instance

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INCONSISTENT = 2
EXIT_INDETERMINATE = 3
EXIT_GENERATION = 4

_VERDICT_EXIT = {cond.CONSISTENT: EXIT_OK, cond.INCONSISTENT: EXIT_INCONSISTENT,
                 cond.INDETERMINATE: EXIT_INDETERMINATE}


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageError(f"{self.prog}: error: {message}")


# tables -------------------------------------------------------------------------------


def _label(r):
    return f"({r.name})" if r.form == "rank" and r.name[:1].isdigit() else r.name


def format_table(reports, out=None):
    """One row per condition: name, lhs rank, rhs rank, verdict, residual."""
    lines = [f"{'condition':<14} {'lhs':>4} {'rhs':>4}  {'verdict':<7} residual"]
    for r in reports:
        name, lhs, rhs_, verdict, res = r.row()
        lines.append(f"{_label(r):<14} {'-' if lhs is None else lhs:>4} {'-' if rhs_ is None else rhs_:>4}  "
                     f"{verdict:<7} {'' if res is None else f'{res:.3e}'}")
    text = "\n".join(lines)
    print(text, file=out or sys.stdout)
    return text


# commands -----------------------------------------------------------------------------


def _load(args, eta_override=True):
    problem = parse_problem(args.input)
    if eta_override and getattr(args, "eta", None):
        problem.eta = EtaAxis.parse(args.eta)
    if getattr(args, "tol", None) is not None:
        problem.tol = args.tol
    return problem


def _check_reports(problem: ProblemFile):
    """``(verdict, reports)`` for the problem's own condition set."""
    m, tol, kind = problem.matrices, problem.tol, problem.kind
    if kind == "main":
        from .solvers import assess_main
        rep = assess_main(problem.instance(), tol=tol)
        return rep.verdict, rep.rank_reports + rep.projector_reports
    if kind == "eta":
        reports = cond.check_eta_rank_conditions(problem.instance())
        return cond.verdict(reports), reports
    if kind == "three-term":
        reports = cond.check_three_term_rank_conditions(*(m[k] for k in ("A11", "B11", "A22", "B22", "A33", "B33", "T1")))
        return cond.verdict(reports), reports
    if kind == "four-term":
        reports = cond.check_four_term_rank_conditions(*(m[k] for k in ("A1", "B1", "C3", "D3", "C4", "D4", "E1")))
        return cond.verdict(reports), reports
    if kind == "pair":
        reports = cond.check_pair_conditions(problem.instance(), tol)
        return cond.statement_verdicts(reports)["P2"], reports
    res = solve_axyb(m["A1"], m["B1"], m["C1"], tol=tol)
    return cond.verdict([res.report]), [res.report]


def run_check(args):
    problem = _load(args)
    verdict, reports = _check_reports(problem)
    format_table(reports)
    print(f"verdict: {verdict}")
    return _VERDICT_EXIT[verdict]


def _params(mode, seed, shapes):
    if mode == "random":
        return FreeParameters.random(shapes, 0 if seed is None else seed)
    return FreeParameters.zeros(shapes)


def _solve(problem: ProblemFile, mode, seed, branch):
    """``(verdict, unknowns)``; raises :class:`Inconsistent`."""
    m, tol, kind = problem.matrices, problem.tol, problem.kind
    if kind == "main":
        inst = problem.instance()
        rep, sol = solve_main(inst, _params(mode, seed, main_parameter_shapes(inst)), branch, tol=tol)
        return rep.verdict, sol.as_dict()
    if kind == "eta":
        inst = problem.instance()
        p = _params(mode, seed, main_parameter_shapes(inst.auxiliary()))
        res = solve_eta(inst, p, branch, tol=tol)
        return res.report.verdict, res.solution.as_dict()
    if kind == "three-term":
        mats = [m[k] for k in ("A11", "B11", "A22", "B22", "A33", "B33", "T1")]
        p = _params(mode, seed, main_parameter_shapes(three_term_instance(*mats)))
        rep, ys = solve_three_term(*mats, p, branch, tol=tol)
        return rep.verdict, dict(zip(("Y1", "Y2", "Y3"), ys))
    if kind == "four-term":
        mats = [m[k] for k in ("A1", "B1", "C3", "D3", "C4", "D4", "E1")]
        res = solve_four_term(*mats, _params(mode, seed, four_term_parameter_shapes(*mats)), tol=tol)
        return cond.verdict(res.reports[:4]), {"X1": res.X1, "X2": res.X2, "X3": res.X3, "X4": res.X4}
    if kind == "pair":
        s = problem.instance()
        p = _params(mode, seed, pair_parameter_shapes(s))
        res = solve_pair_system(s, p["V1"], p["V2"], p["V3"], tol=tol)
        return cond.CONSISTENT, {"X": res.X}
    p = _params(mode, seed, axyb_parameter_shapes(m["A1"], m["B1"], m["C1"]))
    res = solve_axyb(m["A1"], m["B1"], m["C1"], p, tol)
    if not res.consistent:
        raise Inconsistent("equation is inconsistent (fails RA1C1LB1)", reports=[res.report])
    return cond.CONSISTENT, {"X": res.X, "Y": res.Y}


def run_solve(args, eta_only=False):
    problem = _load(args)
    if eta_only and problem.kind != "eta":
        raise _UsageError(f"eta-solve needs a problem of kind eta, got {problem.kind}")
    try:
        verdict, unknowns = _solve(problem, args.params, args.seed, args.branch)
    except Inconsistent as e:
        reports = e.reports or (e.report.rank_reports if e.report is not None else [])
        if reports:
            format_table(reports)
        print(f"verdict: {cond.INCONSISTENT}")
        return EXIT_INCONSISTENT
    res = residual(problem, unknowns)
    sol = SolutionFile(problem.kind, unknowns, branch=args.branch, params=args.params,
                       seed=args.seed if args.params == "random" else None, residual=res, eta=problem.eta)
    if args.output:
        write_solution(sol, args.output)
    elif args.print:
        sys.stdout.write(dumps_solution(sol))
    print(f"verdict: {verdict}")
    print(f"residual: {res:.6e}")
    return _VERDICT_EXIT[verdict]


def _default_verify_tol(problem):
    return 1e-8 * (1.0 + (rhs(problem).norm() if problem.kind != "pair"
                          else problem.matrices["C1"].norm() + problem.matrices["C2"].norm()))


def run_verify(args):
    problem = parse_problem(args.input)
    sol = parse_solution(args.solution)
    if sol.kind != problem.kind:
        raise ValidationError(f"solution is for kind {sol.kind}, problem is {problem.kind}")
    tol = args.tol if args.tol is not None else _default_verify_tol(problem)
    res = residual(problem, sol.matrices)
    ok = res <= tol
    print(f"residual: {res!r}")
    print(f"tol: {tol!r}")
    print("verified" if ok else "FAILED")
    return EXIT_OK if ok else EXIT_INCONSISTENT


def _dims(text, kind):
    vals = [int(v) for v in text.replace("x", ",").split(",") if v.strip()]
    if kind == "eta-consistent":
        if len(vals) == 1:
            vals = vals * 5
        if len(vals) != 5:
            raise _UsageError("--dims for eta takes 1 or 5 values: n,k1,k2,k3,k4")
        n, k1, k2, k3, k4 = vals
        return dict(m=n, n=n, k1=k1, y1=(k2, k2), y2=(k3, k3), y3=(k4, k4))
    if len(vals) == 1:
        vals = vals * 10
    if len(vals) != 10:
        raise _UsageError("--dims takes 1 or 10 values: m,n,k1,l1,p1,q1,p2,q2,p3,q3")
    m, n, k1, l1, p1, q1, p2, q2, p3, q3 = vals
    return dict(m=m, n=n, k1=k1, l1=l1, y1=(p1, q1), y2=(p2, q2), y3=(p3, q3))


def run_gen(args):
    try:
        spec = genval.GenSpec(seed=args.seed or 0, entry_scale=args.scale, kind=args.kind,
                              deficiency=args.deficiency, mixed_rank=args.mixed_rank,
                              eta=args.eta or "i", **_dims(args.dims, args.kind))
    except ValueError as e:
        raise _UsageError(str(e)) from None
    try:
        if args.kind == "inconsistent":
            inst, witness = genval.gen_inconsistent(spec), None
        else:
            inst, witness = genval.gen_consistent(spec)
    except GenerationFailed as e:
        print(f"generation failed: {e}", file=sys.stderr)
        return EXIT_GENERATION
    kind = "eta" if args.kind == "eta-consistent" else "main"
    problem = ProblemFile(kind, inst.as_dict(), spec.eta if kind == "eta" else None, None)
    write_problem(problem, args.output)
    print(f"wrote {args.output}")
    if witness is not None:
        path = args.witness or str(Path(args.output).with_suffix("")) + ".witness.json"
        unknowns = witness.as_dict()
        write_solution(SolutionFile(kind, unknowns, params="witness", seed=spec.seed,
                                    residual=residual(problem, unknowns), eta=problem.eta), path)
        print(f"wrote {path}")
    return EXIT_OK


# entry point --------------------------------------------------------------------------


def build_parser():
    p = _Parser(prog="quatsylv", description="Solvability and general solutions of quaternion Sylvester-type equations.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, tol_help):
        sp.add_argument("--input", required=True, help="problem file")
        sp.add_argument("--tol", type=float, help=tol_help)
        sp.add_argument("--eta", choices=("i", "j", "k"), help="override the eta axis")

    def solving(sp):
        common(sp, "projector-form tolerance on unit-scaled data")
        sp.add_argument("--output", help="solution file to write")
        sp.add_argument("--print", action="store_true", help="print the solution file when --output is absent")
        sp.add_argument("--params", choices=("zero", "random"), default="zero")
        sp.add_argument("--seed", type=int, help="seed for --params random (default 0)")
        sp.add_argument("--branch", choices=("f1", "f2"), default="f1")

    common(sub.add_parser("check", help="print the condition table and the verdict"),
           "projector-form tolerance on unit-scaled data")
    solving(sub.add_parser("solve", help="solve and write a solution file"))
    solving(sub.add_parser("eta-solve", help="solve an eta-Hermitian problem"))
    v = sub.add_parser("verify", help="recompute the residual of a solution file")
    v.add_argument("--input", required=True, help="problem file")
    v.add_argument("--tol", type=float, help="residual bound (default 1e-8 * (1 + |rhs|))")
    v.add_argument("--solution", required=True)
    g = sub.add_parser("gen", help="write a random problem (and witness) file")
    g.add_argument("--kind", choices=genval.KINDS, default="consistent")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--dims", default="2", help="one value, or m,n,k1,l1,p1,q1,p2,q2,p3,q3 (eta: n,k1,k2,k3,k4)")
    g.add_argument("--deficiency", type=int, default=0, help="rank drop of every coefficient")
    g.add_argument("--mixed-rank", action="store_true", help="draw a rank drop per coefficient")
    g.add_argument("--scale", type=float, default=1.0, help="entry scale")
    g.add_argument("--eta", choices=("i", "j", "k"))
    g.add_argument("--output", required=True)
    g.add_argument("--witness", help="witness file (default <output>.witness.json)")
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as e:
        print(e, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE
    try:
        if args.command == "check":
            return run_check(args)
        if args.command in ("solve", "eta-solve"):
            return run_solve(args, eta_only=args.command == "eta-solve")
        if args.command == "verify":
            return run_verify(args)
        return run_gen(args)
    except (ParseError, ValidationError, _UsageError, NotEtaHermitian, SideConditionViolated, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

