import numpy as np
import pytest

from quatsylv import _pykernels, kernels
from quatsylv.errors import ConvergenceFailure
from quatsylv.qmatrix import QMatrix, embed_complex

needs_compiled = pytest.mark.skipif("cython" not in kernels.AVAILABLE, reason="compiled backend not built")


def test_backend_switch_restores():
    before = kernels.backend()
    with kernels.use_backend("python"):
        assert kernels.backend() == "python"
    assert kernels.backend() == before
    with pytest.raises(ValueError):
        kernels.set_backend("fortran")


@needs_compiled
@pytest.mark.parametrize("shape", [(1, 1, 1), (3, 4, 2), (7, 5, 9), (24, 24, 24)])
def test_qmatmul_parity(rng, shape):
    m, k, n = shape
    a, b = rng.normal(size=(m, k, 4)), rng.normal(size=(k, n, 4))
    with kernels.use_backend("cython"):
        c = kernels.qmatmul(a, b)
    assert np.abs(c - _pykernels.qmatmul(a, b)).max() <= 1e-12 * k


@needs_compiled
@pytest.mark.parametrize("shape", [(5, 3), (3, 5), (8, 8), (12, 2)])
def test_complex_svd_parity(rng, shape):
    a = rng.normal(size=shape) + 1j * rng.normal(size=shape)
    u, s, v = kernels.jacobi_svd(a, 100 * max(shape))
    assert np.allclose(s, np.linalg.svd(a, compute_uv=False), atol=1e-12)
    assert np.abs(u @ np.diag(s) @ v.conj().T - a).max() <= 1e-12


@needs_compiled
@pytest.mark.parametrize("shape", [(4, 3), (3, 4), (6, 6), (2, 12)])
def test_quaternion_svd_parity(rng, shape):
    a = QMatrix(rng.normal(size=shape + (4,)))
    a = a @ QMatrix(rng.normal(size=(shape[1], shape[1], 4))) if shape[1] < 3 else a
    with kernels.use_backend("cython"):
        u, s, v = kernels.qsvd(a.data, 100 * max(shape))
    s_embed = np.linalg.svd(embed_complex(a), compute_uv=False)[0::2]
    assert np.allclose(s, s_embed[: len(s)], atol=1e-12)
    us = QMatrix(u * s[None, :, None])
    assert ((us @ QMatrix(v).H) - a).max_norm() <= 1e-12


@needs_compiled
def test_jacobi_sweep_cap():
    a = np.random.default_rng(0).normal(size=(6, 6)) + 0j
    with pytest.raises(ConvergenceFailure):
        kernels.jacobi_svd(a, 0)


def test_empty_shapes(backend):
    u, s, v = kernels.svd(np.zeros((0, 3), complex), 10)
    assert u.shape == (0, 0) and s.shape == (0,) and v.shape == (3, 0)
    assert kernels.qmatmul(np.zeros((2, 0, 4)), np.zeros((0, 3, 4))).shape == (2, 3, 4)
