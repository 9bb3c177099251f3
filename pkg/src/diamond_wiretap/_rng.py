"""Deterministic, order-independent random streams.

Every draw in the package is keyed by ``(seed, stream, index)`` through
:class:`numpy.random.SeedSequence` spawn keys, so the value produced for a
given fade or trial block never depends on which other blocks were drawn,
or in what order.
"""
import numpy as np

FADING = 0
SYMBOLS = 1
NOISE = 2
PMF = 3


def generator(seed, *key):
    """Return a Generator for ``seed`` refined by the integer ``key`` path.

    ``seed`` may be an int, a sequence of ints, a SeedSequence or an
    existing Generator (returned unchanged when no key is given).
    """
    if isinstance(seed, np.random.Generator):
        if key:
            raise TypeError("cannot derive keyed streams from a Generator")
        return seed
    if isinstance(seed, np.random.SeedSequence):
        ss = np.random.SeedSequence(seed.entropy,
                                    spawn_key=tuple(seed.spawn_key) + key)
    else:
        ss = np.random.SeedSequence(seed, spawn_key=key)
    return np.random.default_rng(ss)
