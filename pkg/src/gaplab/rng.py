"""Deterministic RNG plumbing.

Every random draw in the project flows from a named integer seed through
`spawn`. Derived streams are tagged with string labels so that adding a new
consumer never shifts the draws of an existing one.
"""

import zlib

import numpy as np


def _tag_to_int(tag) -> int:
    if isinstance(tag, int):
        return tag
    return zlib.crc32(str(tag).encode("utf-8"))


def spawn(seed: int, *tags) -> np.random.Generator:
    """Return a Generator derived from (seed, *tags), independent per tag path."""
    entropy = (int(seed),) + tuple(_tag_to_int(t) for t in tags)
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy)))
