"""Seedable, splittable random streams.

A :class:`RandomStream` wraps a numpy ``Generator`` on the PCG64 bit
generator, seeded through ``SeedSequence`` so that :meth:`RandomStream.spawn`
hands out statistically independent substreams (one per worker).
Normal variates come from numpy's ziggurat method; since every sample
depends on it, the numpy version is part of the reproducibility contract.
"""

from __future__ import annotations

import os
from typing import List, Optional, Union

import numpy as np

__all__ = ["RandomStream", "as_stream", "default_seed", "SEED_ENV_VAR"]

SEED_ENV_VAR = "CONESAMPLE_SEED"


def default_seed() -> int:
    """Seed from ``$CONESAMPLE_SEED`` if set, else 0."""
    raw = os.environ.get(SEED_ENV_VAR)
    if raw is None or raw.strip() == "":
        return 0
    return int(raw)


class RandomStream:
    """Deterministic source of standard uniform and standard normal variates."""

    def __init__(self, seed: Union[int, np.random.SeedSequence, None] = None):
        if seed is None:
            seed = default_seed()
        if isinstance(seed, np.random.SeedSequence):
            self._seq = seed
        else:
            self._seq = np.random.SeedSequence(int(seed))
        self._gen = np.random.Generator(np.random.PCG64(self._seq))

    @property
    def generator(self) -> np.random.Generator:
        return self._gen

    @property
    def seed_sequence(self) -> np.random.SeedSequence:
        return self._seq

    def uniform(self, size=None, high=1.0):
        """Uniform variates on ``[0, high)``."""
        return self._gen.uniform(0.0, high, size)

    def normal(self, size=None):
        return self._gen.standard_normal(size)

    def spawn(self, k: int) -> List["RandomStream"]:
        """Return ``k`` independent child streams."""
        return [RandomStream(s) for s in self._seq.spawn(k)]

    def __repr__(self):
        return f"RandomStream(entropy={self._seq.entropy}, spawn_key={self._seq.spawn_key})"


def as_stream(rng: Optional[Union["RandomStream", int]]) -> RandomStream:
    if isinstance(rng, RandomStream):
        return rng
    return RandomStream(rng)
