import numpy as np
import pytest
from dataclasses import replace

from quatsylv.conditions import CONSISTENT, INCONSISTENT
from quatsylv.decomp import pinv
from quatsylv.errors import DimensionMismatch, Inconsistent, SideConditionViolated
from quatsylv.fileio import bundled, parse_problem, parse_solution
from quatsylv.genval import GenSpec, gen_consistent, residual
from quatsylv.instances import MainInstance, PairSystem
from quatsylv.qmatrix import QMatrix
from quatsylv.solvers import (
    BRANCHES,
    FreeParameters,
    axyb_parameter_shapes,
    four_term_parameter_shapes,
    main_parameter_shapes,
    pair_parameter_shapes,
    solve_axyb,
    solve_four_term,
    solve_main,
    solve_pair_system,
    solve_three_term,
)

from conftest import low_rank, rand_q

Z = QMatrix.zeros


def reference_instance():
    return parse_problem(bundled("reference_example.json")).instance()


def rel(x, scale):
    return x / (1 + scale)


# two-term -------------------------------------------------------------------------------


def test_axyb_identity_coefficient(rng):
    C = rand_q(rng, 3, 2)
    res = solve_axyb(QMatrix.eye(3), rand_q(rng, 4, 2), C)
    assert res.consistent
    assert (res.X - C).max_norm() <= 1e-12 and res.Y.max_norm() <= 1e-12


def test_axyb_zero_coefficients_inconsistent(rng):
    res = solve_axyb(Z(2, 2), Z(2, 2), rand_q(rng, 2, 2))
    assert not res.consistent and res.X is None


def test_axyb_family(rng):
    for _ in range(10):
        A, B = low_rank(rng, 4, 3, 2), low_rank(rng, 2, 5, 1)
        C = A @ rand_q(rng, 3, 5) + rand_q(rng, 4, 2) @ B
        shapes = axyb_parameter_shapes(A, B, C)
        for seed in range(10):
            res = solve_axyb(A, B, C, FreeParameters.random(shapes, seed))
            assert res.consistent
            assert rel((A @ res.X + res.Y @ B - C).norm(), C.norm()) <= 1e-9


def test_axyb_shape_check(rng):
    with pytest.raises(DimensionMismatch):
        solve_axyb(rand_q(rng, 2, 2), rand_q(rng, 2, 2), rand_q(rng, 3, 2))


# pair system ----------------------------------------------------------------------------


def pair_from(rng, X0):
    A11 = low_rank(rng, 3, X0.rows, 2)
    A22 = rand_q(rng, 2, 3) @ A11
    B11 = low_rank(rng, X0.cols, 3, 2)
    B22 = B11 @ rand_q(rng, 3, 2)
    return PairSystem(A11, B11, A11 @ X0 @ B11, A22, B22, A22 @ X0 @ B22)


def test_pair_identity_case(rng):
    C = rand_q(rng, 3, 3)
    I3 = QMatrix.eye(3)
    res = solve_pair_system(PairSystem(I3, I3, C, I3, I3, C))
    assert (res.X - C).max_norm() <= 1e-12


def test_pair_family(rng):
    for _ in range(5):
        sys = pair_from(rng, rand_q(rng, 4, 4))
        shapes = pair_parameter_shapes(sys)
        for seed in range(10):
            p = FreeParameters.random(shapes, seed).values
            res = solve_pair_system(sys, **p)
            err = max((sys.A11 @ res.X @ sys.B11 - sys.C1).norm(), (sys.A22 @ res.X @ sys.B22 - sys.C2).norm())
            assert rel(err, max(sys.C1.norm(), sys.C2.norm())) <= 1e-9


def test_pair_reproduces_any_solution(rng):
    for _ in range(5):
        X0 = rand_q(rng, 4, 4)
        sys = pair_from(rng, X0)
        # any solution is recovered by a suitable choice of the free matrices
        B22p, B11p = pinv(sys.B22).pinv, pinv(sys.B11).pinv
        res = solve_pair_system(sys, V1=X0 @ sys.B22 @ B22p, V2=X0, V3=X0 @ sys.B11 @ B11p)
        assert (res.X - X0).max_norm() <= 1e-10 * (1 + X0.max_norm())


def test_pair_inconsistent_and_side_conditions(rng):
    sys = pair_from(rng, rand_q(rng, 4, 4))
    with pytest.raises(Inconsistent) as info:
        solve_pair_system(replace(sys, C1=sys.C1 + rand_q(rng, 3, 3)))
    assert info.value.reports
    bad = PairSystem(rand_q(rng, 3, 3), rand_q(rng, 3, 3), rand_q(rng, 3, 3),
                     low_rank(rng, 3, 3, 1), rand_q(rng, 3, 3), rand_q(rng, 3, 3))
    with pytest.raises(SideConditionViolated):
        solve_pair_system(bad)


# four-term ------------------------------------------------------------------------------


def test_four_term_reduces_to_axyb(rng):
    for _ in range(50):
        m, n = (int(v) for v in rng.integers(1, 5, 2))
        A, B = low_rank(rng, m, 3, int(rng.integers(0, 3))), low_rank(rng, 2, n, int(rng.integers(0, 3)))
        C = rand_q(rng, m, n) if rng.random() < 0.3 else A @ rand_q(rng, 3, n) + rand_q(rng, m, 2) @ B
        two = solve_axyb(A, B, C)
        try:
            four = solve_four_term(A, B, Z(m, 1), Z(1, n), Z(m, 2), Z(2, n), C)
            agree = four.consistent
        except Inconsistent:
            agree = False
        assert agree == two.consistent


def test_four_term_zero_instance():
    res = solve_four_term(Z(2, 2), Z(2, 2), Z(2, 2), Z(2, 2), Z(2, 2), Z(2, 2), Z(2, 2))
    assert res.consistent and all(x.max_norm() == 0 for x in res[1:5])


def test_four_term_family(rng):
    for _ in range(10):
        A1, B1 = low_rank(rng, 4, 2, 1), low_rank(rng, 2, 4, 2)
        C3, D3 = low_rank(rng, 4, 3, 2), low_rank(rng, 3, 4, 2)
        C4, D4 = low_rank(rng, 4, 2, 2), low_rank(rng, 2, 4, 1)
        E1 = (A1 @ rand_q(rng, 2, 4) + rand_q(rng, 4, 2) @ B1 + C3 @ rand_q(rng, 3, 3) @ D3
              + C4 @ rand_q(rng, 2, 2) @ D4)
        shapes = four_term_parameter_shapes(A1, B1, C3, D3, C4, D4, E1)
        for seed in range(5):
            r = solve_four_term(A1, B1, C3, D3, C4, D4, E1, FreeParameters.random(shapes, seed))
            assert r.consistent and all(rep.holds for rep in r.reports)
            lhs = A1 @ r.X1 + r.X2 @ B1 + C3 @ r.X3 @ D3 + C4 @ r.X4 @ D4
            assert rel((lhs - E1).norm(), E1.norm()) <= 1e-9


# main equation --------------------------------------------------------------------------


def test_main_reference_example():
    inst = reference_instance()
    report, sol = solve_main(inst)
    assert report.consistent and report.forms_agree
    assert report.residual <= 1e-10
    given = parse_solution(bundled("reference_solution.json"))
    assert residual(inst, type(sol)(**given.matrices)) == 0.0


def test_main_zero_instance():
    inst = MainInstance(*(Z(2, 2) for _ in range(9)))
    shapes = main_parameter_shapes(inst)
    report, _ = solve_main(inst, FreeParameters.random(shapes, 3))
    assert report.consistent and report.residual == 0.0


def test_main_zero_coefficients_inconsistent(rng):
    inst = MainInstance(*(Z(2, 2) for _ in range(8)), rand_q(rng, 2, 2))
    with pytest.raises(Inconsistent) as info:
        solve_main(inst)
    report = info.value.report
    assert report.verdict == INCONSISTENT and report.solution is None
    assert not report.projector_reports[0].holds


@pytest.mark.parametrize("branch", BRANCHES)
def test_main_family(branch):
    gen = np.random.default_rng(3)
    for seed in range(100):
        d = [int(v) for v in gen.integers(1, 6, 10)]
        spec = GenSpec(m=d[0], n=d[1], k1=d[2], l1=d[3], y1=d[4:6], y2=d[6:8], y3=d[8:10],
                       seed=seed, mixed_rank=True)
        inst, _ = gen_consistent(spec)
        shapes = main_parameter_shapes(inst)
        for draw in range(5):
            report, _ = solve_main(inst, FreeParameters.random(shapes, draw), branch)
            assert report.verdict == CONSISTENT
            assert report.residual <= 1e-8 * (1 + inst.B.norm())


def test_main_branches_both_valid_on_same_instance():
    inst, _ = gen_consistent(GenSpec.square(3, seed=9, mixed_rank=True))
    p = FreeParameters.random(main_parameter_shapes(inst), 1)
    r1, s1 = solve_main(inst, p, "f1")
    r2, s2 = solve_main(inst, p, "f2")
    assert max(r1.residual, r2.residual) <= 1e-8 * (1 + inst.B.norm())
    assert s1.branch == "f1" and s2.branch == "f2"


def test_main_scale_invariance():
    inst, _ = gen_consistent(GenSpec.square(3, seed=4, mixed_rank=True))
    big = MainInstance(**{k: v * (1e6 if k == "B" else 1e-3) for k, v in inst.as_dict().items()})
    report, _ = solve_main(big)
    assert report.consistent and report.residual <= 1e-8 * (1 + big.B.norm())


def test_main_parameter_validation():
    inst = reference_instance()
    with pytest.raises(DimensionMismatch):
        solve_main(inst, {"U1": Z(7, 7)})
    with pytest.raises(DimensionMismatch):
        solve_main(inst, {"Q9": Z(1, 1)})
    with pytest.raises(ValueError):
        solve_main(inst, branch="f3")


def test_parameters_are_deterministic():
    shapes = main_parameter_shapes(reference_instance())
    a, b = FreeParameters.random(shapes, 7), FreeParameters.random(shapes, 7)
    assert all(a[k] == b[k] for k in shapes)
    assert any(a[k] != FreeParameters.random(shapes, 8)[k] for k in shapes)


# three-term -----------------------------------------------------------------------------


def test_three_term_identity_case(rng):
    T1 = rand_q(rng, 3, 3)
    report, (Y1, Y2, Y3) = solve_three_term(QMatrix.eye(3), QMatrix.eye(3), Z(3, 2), Z(2, 3), Z(3, 2), Z(2, 3), T1)
    assert report.consistent
    assert (Y1 - T1).max_norm() <= 1e-12


def test_three_term_family():
    for seed in range(20):
        inst, _ = gen_consistent(GenSpec(m=3, n=4, k1=0, l1=0, y1=(2, 3), y2=(3, 2), y3=(2, 2),
                                         seed=seed, mixed_rank=True))
        args = (inst.A2, inst.B2, inst.A3, inst.B3, inst.A4, inst.B4, inst.B)
        report, (Y1, Y2, Y3) = solve_three_term(*args, params="random")
        lhs = inst.A2 @ Y1 @ inst.B2 + inst.A3 @ Y2 @ inst.B3 + inst.A4 @ Y3 @ inst.B4
        assert rel((lhs - inst.B).norm(), inst.B.norm()) <= 1e-9
        assert [r.name for r in report.rank_reports] == [f"c{i}" for i in range(1, 10)]


def test_three_term_inconsistent(rng):
    z = Z(2, 2)
    with pytest.raises(Inconsistent):
        solve_three_term(z, z, z, z, z, z, rand_q(rng, 2, 2))
