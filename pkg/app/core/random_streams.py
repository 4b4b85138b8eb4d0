"""Deterministic, splittable random streams.

A stream is identified by ``(seed, stream_index)``. The pair is fed to numpy's
``SeedSequence`` as entropy plus spawn key, which hashes it into PCG64 state, so
equal pairs replay identical draws and distinct indices give independent
streams no matter which worker consumes them.
"""

from dataclasses import dataclass, field

import numpy as np

U64_MASK = (1 << 64) - 1


@dataclass
class RandomStream:
    """Single-owner sequential random source. Never share across tasks; derive instead."""

    seed: int
    stream_index: int
    _generator: np.random.Generator = field(init=False, repr=False)

    def __post_init__(self) -> None:
        if not (0 <= self.seed <= U64_MASK and 0 <= self.stream_index <= U64_MASK):
            raise ValueError(f"seed and stream_index must be unsigned 64-bit integers, got ({self.seed}, {self.stream_index})")
        sequence = np.random.SeedSequence(entropy=self.seed, spawn_key=(self.stream_index,))
        self._generator = np.random.Generator(np.random.PCG64(sequence))

    @property
    def generator(self) -> np.random.Generator:
        return self._generator

    def uniform(self, n: int) -> np.ndarray:
        """``n`` draws from U[0, 1)."""
        return self._generator.random(n)

    def normal(self, n: int, scale: float = 1.0) -> np.ndarray:
        return self._generator.normal(0.0, scale, n)


def derive_substream(seed: int, index: int) -> RandomStream:
    """Stream ``index`` of the family rooted at ``seed``."""
    return RandomStream(seed=seed & U64_MASK, stream_index=index & U64_MASK)
