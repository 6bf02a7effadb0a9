"""Reproducible random streams.

Every random draw in the package comes from a Philox4x64 counter-based
generator.  A stream is addressed by a 64-bit ``seed`` plus a ``(tag, index)``
pair, and the Philox key is::

    key = (seed mod 2**64, (tag << 32) | index)

so stream ``(seed, tag, index)`` is independent of every other stream and
does not depend on how many draws other streams made.  Tags used internally:

=====  ==========================================
tag    consumer
=====  ==========================================
0      G(n, p) edge sampling
1      vertex split
2      forest builder restarts (index = restart)
3      Monte Carlo batches (index = batch)
=====  ==========================================
"""

import numpy as np

GRAPH = 0
SPLIT = 1
FOREST = 2
MONTE_CARLO = 3

_MASK64 = (1 << 64) - 1
_MASK32 = (1 << 32) - 1


def stream_key(seed: int, tag: int = GRAPH, index: int = 0) -> tuple[int, int]:
    if not 0 <= tag <= _MASK32 or not 0 <= index <= _MASK32:
        raise ValueError("tag and index must fit in 32 bits")
    return seed & _MASK64, (tag << 32) | index


def make_rng(seed: int, tag: int = GRAPH, index: int = 0) -> np.random.Generator:
    key = np.array(stream_key(seed, tag, index), dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))
