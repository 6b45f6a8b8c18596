import numpy as np
import pytest
from dataclasses import replace

from quatsylv.conditions import CONSISTENT, INCONSISTENT, check_rank_conditions, verdict
from quatsylv.errors import GenerationFailed
from quatsylv.genval import (
    GenSpec,
    bruteforce_consistent,
    gen_consistent,
    gen_inconsistent,
    linear_map,
    perturb_inconsistent,
    residual,
    two_sided_map,
)
from quatsylv.instances import MainInstance
from quatsylv.qmatrix import QMatrix
from quatsylv.decomp import qrank

from conftest import rand_q

Z = QMatrix.zeros


def test_same_seed_same_instance():
    spec = GenSpec.square(3, seed=5, mixed_rank=True)
    (a, wa), (b, wb) = gen_consistent(spec), gen_consistent(spec)
    assert a == b and wa == wb
    assert gen_consistent(replace(spec, seed=6))[0] != a


def test_witness_residual_is_tiny():
    for seed in range(20):
        inst, witness = gen_consistent(GenSpec.square(4, seed=seed, deficiency=1))
        assert residual(inst, witness) <= 1e-12 * (1 + inst.B.norm())


def test_deficiency_lowers_coefficient_rank():
    inst, _ = gen_consistent(GenSpec.square(4, seed=1, deficiency=2))
    for name in ("A1", "B1", "A2", "B4"):
        assert qrank(getattr(inst, name)) == 2
    inst, _ = gen_consistent(GenSpec.square(3, seed=1))
    assert qrank(inst.A1) == 3


def test_spec_validation():
    with pytest.raises(ValueError):
        GenSpec(kind="weird")
    with pytest.raises(ValueError):
        GenSpec(m=-1)
    with pytest.raises(ValueError):
        GenSpec(entry_scale=0)


def test_two_sided_map_matches_products(rng):
    A, B, X = rand_q(rng, 3, 2), rand_q(rng, 4, 5), rand_q(rng, 2, 4)
    got = two_sided_map(A, B) @ X.data.reshape(-1)
    assert np.allclose(got, (A @ X @ B).data.reshape(-1), atol=1e-12)


def test_linear_map_matches_lhs():
    inst, witness = gen_consistent(GenSpec.square(2, seed=3))
    x = np.concatenate([m.data.reshape(-1) for m in witness.as_dict().values()])
    assert np.allclose(linear_map(inst) @ x, inst.B.data.reshape(-1), atol=1e-12)


def test_oracle_closure():
    for seed in range(10):
        inst, _ = gen_consistent(GenSpec.square(2, seed=seed, mixed_rank=True))
        assert bruteforce_consistent(inst)


def test_inconsistent_instances_fail_both_oracles():
    made = 0
    for seed in range(20):
        spec = GenSpec(m=4, n=4, k1=1, l1=1, y1=(1, 1), y2=(1, 1), y3=(1, 1), seed=seed, kind="inconsistent")
        inst = gen_inconsistent(spec)
        made += 1
        assert not bruteforce_consistent(inst)
        assert verdict(check_rank_conditions(inst)) == INCONSISTENT
    assert made == 20


def test_surjective_shape_fails():
    with pytest.raises(GenerationFailed):
        gen_inconsistent(GenSpec.square(2, seed=0, kind="inconsistent"))


def test_zero_coefficients_fast_path():
    base = MainInstance(*(Z(2, 2) for _ in range(9)))
    inst = perturb_inconsistent(base, 1)
    assert inst.B.max_norm() > 0
    assert verdict(check_rank_conditions(inst)) == INCONSISTENT


def test_empty_rhs_cannot_be_inconsistent():
    base = MainInstance(Z(0, 1), Z(1, 2), Z(0, 1), Z(1, 2), Z(0, 1), Z(1, 2), Z(0, 1), Z(1, 2), Z(0, 2))
    with pytest.raises(GenerationFailed):
        perturb_inconsistent(base)


@pytest.mark.parametrize("eta", ["i", "j", "k"])
def test_eta_instances_consistent_by_oracle(eta):
    for seed in range(5):
        inst, witness = gen_consistent(GenSpec.square(2, seed=seed, kind="eta-consistent", eta=eta))
        assert residual(inst, witness) <= 1e-12 * (1 + inst.B.norm())
        assert bruteforce_consistent(inst)
        assert verdict(check_rank_conditions(inst.auxiliary())) == CONSISTENT
