"""Numpy fallback for the compiled kernels (used when the extension is absent)."""

import numpy as np

NAME = "python"


def qmatmul(a, b):
    # (a1 + a2 j)(b1 + b2 j) = (a1 b1 - a2 conj(b2)) + (a1 b2 + a2 conj(b1)) j
    a1 = a[..., 0] + 1j * a[..., 1]
    a2 = a[..., 2] + 1j * a[..., 3]
    b1 = b[..., 0] + 1j * b[..., 1]
    b2 = b[..., 2] + 1j * b[..., 3]
    c1 = a1 @ b1 - a2 @ b2.conj()
    c2 = a1 @ b2 + a2 @ b1.conj()
    return np.stack([c1.real, c1.imag, c2.real, c2.imag], axis=-1)


def svd(m, max_sweeps):
    """Thin SVD through LAPACK; ``max_sweeps`` is accepted for signature parity."""
    u, s, vh = np.linalg.svd(m, full_matrices=False)
    return u, s, vh.conj().T
