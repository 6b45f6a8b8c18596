import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from quatsylv.quaternion import I, J, K, ONE, EtaAxis, Quaternion, eta_conj, norm, qconj, qinv, qmul

finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)
quats = st.builds(Quaternion, finite, finite, finite, finite)
axes = st.sampled_from(list(EtaAxis))


def close(p, q, tol):
    return max(abs(a - b) for a, b in zip(p.as_tuple(), q.as_tuple())) <= tol


# Hamilton table written out independently: row * column
TABLE = {
    ("1", "1"): (1, "1"), ("1", "i"): (1, "i"), ("1", "j"): (1, "j"), ("1", "k"): (1, "k"),
    ("i", "1"): (1, "i"), ("i", "i"): (-1, "1"), ("i", "j"): (1, "k"), ("i", "k"): (-1, "j"),
    ("j", "1"): (1, "j"), ("j", "i"): (-1, "k"), ("j", "j"): (-1, "1"), ("j", "k"): (1, "i"),
    ("k", "1"): (1, "k"), ("k", "i"): (1, "j"), ("k", "j"): (-1, "i"), ("k", "k"): (-1, "1"),
}
BASIS = {"1": ONE, "i": I, "j": J, "k": K}


@pytest.mark.parametrize("a,b", list(itertools.product("1ijk", repeat=2)))
def test_hamilton_table(a, b):
    sign, unit = TABLE[(a, b)]
    assert qmul(BASIS[a], BASIS[b]) == sign * BASIS[unit]


def test_ij_is_k_and_ijk_is_minus_one():
    assert qmul(I, J) == K
    assert qmul(qmul(I, J), K) == -ONE


def test_conjugate_pair_product():
    assert qmul(ONE + I, ONE - I) == Quaternion(2.0)


def test_associativity_random_triples():
    rng = np.random.default_rng(1)
    for _ in range(1000):
        p, q, r = (Quaternion(*rng.uniform(-1, 1, 4)) for _ in range(3))
        assert close(qmul(qmul(p, q), r), qmul(p, qmul(q, r)), 1e-12)


@pytest.mark.parametrize("q,expected", [
    (ONE, ONE),
    (I, -I),
    (Quaternion(2, 1, -1, 3), Quaternion(2, -1, 1, -3)),
])
def test_qconj_examples(q, expected):
    assert qconj(q) == expected


@given(quats)
def test_qconj_involution_and_norm(q):
    assert qconj(qconj(q)) == q
    prod = qmul(q, qconj(q))
    assert close(prod, Quaternion(norm(q) ** 2), 1e-9)


def test_eta_conj_examples():
    q = Quaternion(1.5, -2.0, 0.25, 3.0)
    assert eta_conj(q, EtaAxis.I) == Quaternion(1.5, 2.0, 0.25, 3.0)
    assert eta_conj(J, EtaAxis.I) == J
    assert eta_conj(ONE, EtaAxis.J) == ONE


@pytest.mark.parametrize("eta", list(EtaAxis))
def test_eta_conj_matches_definition_on_basis(eta):
    u = eta.unit
    for e in (ONE, I, J, K):
        assert eta_conj(e, eta) == qmul(qmul(-u, qconj(e)), u)


@given(quats, axes)
def test_eta_conj_involution(q, eta):
    assert eta_conj(eta_conj(q, eta), eta) == q


@given(quats, quats, axes)
def test_eta_conj_reverses_products(p, q, eta):
    lhs = eta_conj(qmul(p, q), eta)
    rhs = qmul(eta_conj(q, eta), eta_conj(p, eta))
    assert close(lhs, rhs, 1e-12 * (1 + norm(p) * norm(q)))


@given(quats, quats)
def test_norm_multiplicative(p, q):
    assert norm(qmul(p, q)) == pytest.approx(norm(p) * norm(q), rel=1e-12, abs=1e-300)


def test_qinv_examples():
    assert qinv(I) == -I
    assert qinv(Quaternion(2.0)) == Quaternion(0.5)
    with pytest.raises(ZeroDivisionError):
        qinv(Quaternion(0.0))


def test_qinv_of_unit_is_conjugate():
    rng = np.random.default_rng(2)
    for _ in range(100):
        v = rng.normal(size=4)
        q = Quaternion(*(v / np.linalg.norm(v)))
        assert close(qinv(q), qconj(q), 1e-14)
        assert close(qmul(q, qinv(q)), ONE, 1e-14)
        assert close(qmul(qinv(q), q), ONE, 1e-14)


def test_eta_axis_parse():
    assert EtaAxis.parse("j") is EtaAxis.J
    assert EtaAxis.parse(" K ") is EtaAxis.K
    with pytest.raises(ValueError):
        EtaAxis.parse("x")
