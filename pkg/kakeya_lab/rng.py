"""
Seeded, splittable random streams.

Every randomized operation takes an integer seed; independent trials
derive their streams from ``(seed, trial_index)`` so that results do not
depend on scheduling.
"""

import numpy as np

SEED_BITS = 64


def check_seed(seed):
    """Return ``seed`` as a non-negative Python int below 2**64."""
    if seed is None:
        raise ValueError('a seed is required for reproducible runs')
    seed = int(seed)
    if not 0 <= seed < 2 ** SEED_BITS:
        raise ValueError('seed must lie in [0, 2**64), got %d' % seed)
    return seed


def make_rng(seed, *key):
    """Return a PCG64 generator for ``seed`` and an optional spawn key."""
    sequence = np.random.SeedSequence(check_seed(seed),
                                      spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.PCG64(sequence))


def sub_seed(seed, index):
    """Return the 64-bit seed recorded in reports for trial ``index``."""
    sequence = np.random.SeedSequence(check_seed(seed),
                                      spawn_key=(int(index),))
    return int(sequence.generate_state(1, dtype=np.uint64)[0])
