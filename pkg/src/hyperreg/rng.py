"""Named random streams.

All randomness is derived from one integer seed plus a component name, so adding
a new consumer never shifts the numbers another consumer sees.
"""

from __future__ import annotations

import hashlib
import random

import numpy as np


def derive_seed(seed: int | None, *names) -> int:
    text = "/".join([str(0 if seed is None else seed), *map(str, names)])
    return int.from_bytes(hashlib.sha256(text.encode()).digest()[:8], "big")


def stream(seed: int | None, *names) -> random.Random:
    """A ``random.Random`` for the substream ``names`` of ``seed``."""
    return random.Random(derive_seed(seed, *names))


def np_stream(seed: int | None, *names) -> np.random.Generator:
    return np.random.default_rng(derive_seed(seed, *names))


def as_random(rng) -> random.Random:
    """Accept an int seed, None, or an existing ``random.Random``."""
    if isinstance(rng, random.Random):
        return rng
    return random.Random(rng)
