"""One counter-based generator family for every stochastic routine."""

import numpy as np


def make_rng(master_seed, *stream):
    """Philox generator for the substream ``stream`` of ``master_seed``.

    Substreams are independent of each other and of the order in which they
    are created, so trial i always sees the same draws.
    """
    if not 0 <= int(master_seed) < 1 << 64:
        raise ValueError(f"master seed must be a 64-bit unsigned integer, got {master_seed}")
    ss = np.random.SeedSequence(int(master_seed), spawn_key=tuple(int(s) for s in stream))
    return np.random.Generator(np.random.Philox(ss))
