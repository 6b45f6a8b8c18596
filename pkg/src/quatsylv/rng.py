"""Seeded random streams.

Every random matrix comes from its own PCG64 stream,
``SeedSequence(entropy=seed, spawn_key=(family, slot))``, so adding or
removing one slot never shifts the values drawn for another and any slot can
be reproduced in isolation.
"""

import numpy as np

from .qmatrix import QMatrix

INSTANCE = 0  # coefficient and witness matrices of generated instances
PARAMS = 1  # free parameters of a solution family


def stream(seed, family, slot):
    seq = np.random.SeedSequence(entropy=int(seed), spawn_key=(family, slot))
    return np.random.Generator(np.random.PCG64(seq))


def uniform_qmatrix(gen, shape, scale=1.0):
    """Entries with every real component uniform in ``[-scale, scale]``."""
    return QMatrix(gen.uniform(-scale, scale, size=tuple(shape) + (4,)), check=False)
