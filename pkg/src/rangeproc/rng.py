"""Counter-based random streams keyed by ``(seed, stream ids...)``.

Each stream is a Philox generator whose key is derived from the seed and a
tuple of stream ids, so replicas and coordinates are reproducible and do not
depend on the order in which they are drawn. No global state is touched.
"""
from __future__ import annotations

import numpy as np

# reserved leading stream ids
PATH = 0
PROBES = 1
SAMPLES = 2


def stream(seed: int, *ids: int) -> np.random.Generator:
    if not 0 <= int(seed) < 2**64:
        raise ValueError(f"seed must be an unsigned 64-bit integer, got {seed!r}")
    ss = np.random.SeedSequence(int(seed), spawn_key=tuple(int(i) for i in ids))
    return np.random.Generator(np.random.Philox(ss))
