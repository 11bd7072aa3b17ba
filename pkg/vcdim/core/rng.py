"""Counter-based random streams.

Every random draw in the package comes from a Philox generator whose key
is derived from the user seed plus a tuple naming the task that consumes
it, e.g. ``(XI, l, i, b)`` for inner bootstrap replicate ``b`` of outer
replicate ``i`` at design point ``l``. Two runs with the same seed see
identical streams no matter how tasks are scheduled over threads.
"""

import numpy as np
from numpy.random import Generator, Philox, SeedSequence

# Stream families
XI = 1
SIMULATION = 2
CV = 3

SEED_MAX = 2**64 - 1


def stream(seed: int, *key: int) -> Generator:
    """Return the generator keyed by ``(seed, *key)``."""
    return Generator(Philox(SeedSequence(seed, spawn_key=key)))


def replicate_stream(seed: int, l: int, i: int, b: int) -> Generator:
    """Stream for inner bootstrap replicate ``b`` of outer replicate ``i`` at design point ``l``."""
    return stream(seed, XI, l, i, b)


def integer_seed(seed: int, *key: int) -> int:
    """A 32-bit integer derived from the keyed stream, for libraries that only take ints."""
    return int(SeedSequence(seed, spawn_key=key).generate_state(1, dtype=np.uint32)[0])
