import numpy as np
import pytest
from dataclasses import replace

from quatsylv.conditions import (
    CONSISTENT,
    INCONSISTENT,
    INDETERMINATE,
    MAIN_RANK_NAMES,
    PROJECTOR_NAMES,
    ConditionReport,
    check_eta_rank_conditions,
    check_implied_conditions,
    check_pair_conditions,
    check_projector_conditions,
    check_rank_conditions,
    ms_rank_identity,
    rank_with_margin,
    statement_verdicts,
    verdict,
)
from quatsylv.decomp import qrank
from quatsylv.errors import NotEtaHermitian, SideConditionViolated
from quatsylv.fileio import bundled, parse_problem
from quatsylv.genval import GenSpec, bruteforce_consistent, gen_consistent, gen_inconsistent
from quatsylv.instances import EtaInstance, MainInstance, PairSystem
from quatsylv.qmatrix import QMatrix, block, hcat, vcat
from quatsylv.quaternion import ONE, EtaAxis
from quatsylv.solvers import derive_main_quantities

from conftest import exact_rank, low_rank, rand_q

Z = QMatrix.zeros


def reference_instance():
    return parse_problem(bundled("reference_example.json")).instance()


def zero_instance(m=2, n=2, w=2, B=None):
    return MainInstance(Z(m, w), Z(w, n), Z(m, w), Z(w, n), Z(m, w), Z(w, n), Z(m, w), Z(w, n),
                        Z(m, n) if B is None else B)


def test_verdict_combination():
    ok = ConditionReport("a", 1, 1, True)
    bad = ConditionReport("b", 1, 2, False)
    unsure = ConditionReport("c", 1, 2, False, indeterminate=True)
    assert verdict([ok]) == CONSISTENT
    assert verdict([ok, unsure]) == INDETERMINATE
    assert verdict([unsure, bad]) == INCONSISTENT
    assert verdict([]) == CONSISTENT


def test_rank_with_margin_flags_borderline_values():
    a = QMatrix.from_components(np.diag([1.0, 2e-9]))
    r, near = rank_with_margin(a)
    assert (r, near) == (2, True)
    r, near = rank_with_margin(QMatrix.from_components(np.diag([1.0, 1e-3, 1e-15])))
    assert (r, near) == (2, False)


# rank identity oracle ------------------------------------------------------------------


def test_rank_identity_collapses_to_rank_of_a(rng):
    A = low_rank(rng, 3, 4, 2)
    assert ms_rank_identity(A, Z(3, 2), Z(1, 4), Z(2, 2), Z(1, 3)) == (2, 2)


def test_rank_identity_random_integer_family(rng):
    for _ in range(30):
        mats = [QMatrix(rng.integers(-2, 3, size=(3, 3, 4)).astype(float)) for _ in range(5)]
        mats[int(rng.integers(0, 5))] = low_rank(rng, 3, 3, 1)
        lhs, rhs = ms_rank_identity(*mats)
        assert lhs == rhs


# main equation, rank form ---------------------------------------------------------------


def test_reference_example_rank_conditions_hold():
    reports = check_rank_conditions(reference_instance())
    assert [r.name for r in reports] == list(MAIN_RANK_NAMES)
    assert all(r.holds and not r.indeterminate for r in reports)


def exact_rank_equalities(inst):
    """``(lhs, rhs)`` of the nine equalities, blocks laid out by hand, ranks exact."""
    B, A1, A2, A3, A4 = inst.B, inst.A1, inst.A2, inst.A3, inst.A4
    B1, B2, B3, B4 = inst.B1, inst.B2, inst.B3, inst.B4

    def eq(arow, brows):
        lhs = block([[B] + arow] + [[b] + [0] * len(arow) for b in brows])
        return exact_rank(lhs), exact_rank(vcat(*brows)) + exact_rank(hcat(*arow))

    out = [
        eq([A2, A3, A4, A1], [B1]),
        eq([A2, A4, A1], [B3, B1]),
        eq([A3, A4, A1], [B2, B1]),
        eq([A4, A1], [B2, B3, B1]),
        eq([A2, A3, A1], [B4, B1]),
        eq([A2, A1], [B3, B4, B1]),
        eq([A3, A1], [B2, B4, B1]),
        eq([A1], [B2, B3, B4, B1]),
    ]
    big = block([
        [B, A2, A1, 0, 0, 0, A4],
        [B3, 0, 0, 0, 0, 0, 0],
        [B1, 0, 0, 0, 0, 0, 0],
        [0, 0, 0, -1.0 * B, A3, A1, A4],
        [0, 0, 0, B2, 0, 0, 0],
        [0, 0, 0, B1, 0, 0, 0],
        [B4, 0, 0, B4, 0, 0, 0],
    ])
    rhs = exact_rank(block([[B3, 0], [B1, 0], [0, B2], [0, B1], [B4, B4]]))
    rhs += exact_rank(block([[A2, A1, 0, 0, A4], [0, 0, A3, A1, A4]]))
    out.append((exact_rank(big), rhs))
    return out


def test_reference_example_ranks_match_exact_elimination():
    inst = reference_instance()
    exact = exact_rank_equalities(inst)
    reports = check_rank_conditions(inst)
    assert [(r.lhs_rank, r.rhs_rank) for r in reports] == exact
    assert tuple(lhs for lhs, _ in exact) == (3, 4, 2, 3, 4, 4, 3, 3, 7)


def test_reference_example_perturbed_fails():
    inst = reference_instance()
    bumped = replace(inst, B=inst.B + QMatrix.from_entries([[0, 0], [ONE, 0]]))
    assert verdict(check_rank_conditions(bumped)) == INCONSISTENT
    assert not bruteforce_consistent(bumped)


def test_zero_instance_rank_conditions_hold():
    reports = check_rank_conditions(zero_instance())
    assert all(r.holds and r.lhs_rank == 0 for r in reports)


def test_rank_form_matches_bruteforce_oracle():
    seed, seen = 0, {True: 0, False: 0}
    gen = np.random.default_rng(11)
    while seed < 60:
        d = [int(v) for v in gen.integers(1, 3, 8)]
        kind = "inconsistent" if seed % 2 else "consistent"
        spec = GenSpec(m=3, n=3, k1=d[0], l1=d[1], y1=d[2:4], y2=d[4:6], y3=d[6:8], seed=seed,
                       kind=kind, mixed_rank=True)
        seed += 1
        try:
            inst = gen_inconsistent(spec) if kind == "inconsistent" else gen_consistent(spec)[0]
        except Exception:
            continue
        truth = bruteforce_consistent(inst)
        seen[truth] += 1
        assert (verdict(check_rank_conditions(inst)) == CONSISTENT) == truth
    assert seen[True] and seen[False]


# main equation, projector form ----------------------------------------------------------


def test_projector_conditions_on_example_and_constructed():
    d = derive_main_quantities(reference_instance())
    reports = check_projector_conditions(d)
    assert [r.name for r in reports] == list(PROJECTOR_NAMES)
    assert all(r.holds for r in reports)
    for seed in range(10):
        inst, _ = gen_consistent(GenSpec.square(3, seed=seed, mixed_rank=True))
        assert all(r.holds for r in check_projector_conditions(derive_main_quantities(inst)))


def test_projector_conditions_fail_for_zero_coefficients():
    B = QMatrix.from_entries([[ONE, 0], [0, 2 * ONE]])
    reports = check_projector_conditions(derive_main_quantities(zero_instance(B=B)))
    first = reports[0]
    assert first.name == "RC1E1" and not first.holds
    assert first.residual == pytest.approx(2.0)


def test_printed_nine_conditions_are_not_sufficient():
    # every product but R_E22 E L_E33 vanishes, yet no solution exists
    gen = np.random.default_rng(123)
    found = None
    seed = 0
    while found is None and seed < 400:
        d = [int(v) for v in gen.integers(1, 3, 8)]
        m, n = (int(v) for v in gen.integers(3, 6, 2))
        spec = GenSpec(m=m, n=n, k1=d[0], l1=d[1], y1=d[2:4], y2=d[4:6], y3=d[6:8], seed=seed,
                       kind="inconsistent", mixed_rank=bool(seed % 2))
        seed += 1
        try:
            inst = gen_inconsistent(spec)
        except Exception:
            continue
        reports = check_projector_conditions(derive_main_quantities(inst))
        if all(r.holds for r in reports[:9]) and not reports[9].holds:
            found = inst
    assert found is not None
    assert not bruteforce_consistent(found)
    assert verdict(check_rank_conditions(found)) == INCONSISTENT


def test_implied_conditions_follow_from_projector_conditions():
    for seed in range(40):
        inst, _ = gen_consistent(GenSpec.square(3, seed=seed, mixed_rank=True))
        d = derive_main_quantities(inst)
        if all(r.holds for r in check_projector_conditions(d)):
            assert all(r.holds for r in check_implied_conditions(d))


def test_derived_quantities_of_reference_example():
    from quatsylv.quaternion import I

    d = derive_main_quantities(reference_instance())
    assert (d.A11 - QMatrix.from_entries([[0, 0], [I, 0]])).max_norm() <= 1e-14


def test_derived_quantities_of_zero_instance():
    d = derive_main_quantities(zero_instance())
    for name in ("A11", "A22", "A33", "B11", "T1", "C1", "E1", "E2", "E3", "E4", "F", "E"):
        assert getattr(d, name).max_norm() == 0
    assert d.C == QMatrix.eye(2) and d.D == QMatrix.eye(2)


def test_derived_quantities_internal_identities(rng):
    from quatsylv.decomp import left_projector, right_projector

    for seed in range(10):
        inst, _ = gen_consistent(GenSpec.square(3, seed=seed, mixed_rank=True))
        d = derive_main_quantities(inst)
        tol = 1e-10 * (1 + inst.scale())
        # each Ci is a left-projected copy of A33 and each Di a right-projected copy of B33
        for x, y in ((d.C1, d.C2), (d.C2, d.C4), (d.C3, d.C4)):
            assert (x @ left_projector(y)).max_norm() <= tol
        for x in (d.D2, d.D3, d.D4):
            assert (right_projector(d.D1) @ x).max_norm() <= tol
        assert (d.A11 - right_projector(inst.A1) @ inst.A2).max_norm() <= tol
        assert (d.T1 - right_projector(inst.A1) @ inst.B @ left_projector(inst.B1)).max_norm() <= tol


# eta equation ----------------------------------------------------------------------------


@pytest.mark.parametrize("eta", list(EtaAxis))
def test_eta_rank_conditions(eta):
    n = 2
    zeros = dict(A1=Z(n, 2), A2=Z(n, 2), A3=Z(n, 2), A4=Z(n, 2))
    assert all(r.holds for r in check_eta_rank_conditions(EtaInstance(B=Z(n, n), eta=eta, **zeros)))
    assert verdict(check_eta_rank_conditions(EtaInstance(B=QMatrix.eye(n), eta=eta, **zeros))) == INCONSISTENT
    for seed in range(10):
        inst, _ = gen_consistent(GenSpec.square(3, seed=seed, kind="eta-consistent", eta=eta, mixed_rank=True))
        assert verdict(check_eta_rank_conditions(inst)) == CONSISTENT


def test_eta_rank_conditions_reject_non_hermitian(rng):
    inst = EtaInstance(A1=Z(2, 1), A2=Z(2, 1), A3=Z(2, 1), A4=Z(2, 1), B=rand_q(rng, 2, 2), eta="i")
    with pytest.raises(NotEtaHermitian):
        check_eta_rank_conditions(inst)


# pair system ------------------------------------------------------------------------------


def constructed_pair(rng, seed_rank=2):
    # A22 = P A11 keeps A11 L_A22 = 0; B22 = B11 Q keeps R_B11 B22 = 0
    A11 = low_rank(rng, 3, 4, seed_rank)
    A22 = rand_q(rng, 2, 3) @ A11
    B11 = low_rank(rng, 4, 3, seed_rank)
    B22 = B11 @ rand_q(rng, 3, 2)
    X0 = rand_q(rng, 4, 4)
    return PairSystem(A11, B11, A11 @ X0 @ B11, A22, B22, A22 @ X0 @ B22)


def test_pair_statements_agree_on_constructed(rng):
    for _ in range(10):
        reports = check_pair_conditions(constructed_pair(rng))
        assert set(statement_verdicts(reports).values()) == {CONSISTENT}


def test_pair_perturbed_c1_fails_statements_two_and_four(rng):
    sys = constructed_pair(rng)
    C1 = sys.C1 + rand_q(rng, *sys.C1.shape)
    assert qrank(hcat(sys.A11, C1)) > qrank(sys.A11)
    bad = replace(sys, C1=C1)
    v = statement_verdicts(check_pair_conditions(bad))
    assert v["P2"] == INCONSISTENT and v["P4"] == INCONSISTENT and v["P3"] == INCONSISTENT


def test_pair_zero_system_holds():
    sys = PairSystem(Z(2, 2), Z(2, 2), Z(2, 2), Z(2, 2), Z(2, 2), Z(2, 2))
    assert set(statement_verdicts(check_pair_conditions(sys)).values()) == {CONSISTENT}


def test_pair_side_conditions_enforced(rng):
    sys = PairSystem(rand_q(rng, 3, 3), rand_q(rng, 3, 3), rand_q(rng, 3, 3),
                     low_rank(rng, 3, 3, 1), rand_q(rng, 3, 3), rand_q(rng, 3, 3))
    with pytest.raises(SideConditionViolated):
        check_pair_conditions(sys)
