"""Counter-based random streams keyed by what they are for, not when they are drawn."""

from __future__ import annotations

import hashlib

import numpy as np


def stream_key(seed: int, agent: str, job: str, purpose: str) -> int:
    """128-bit Philox key from a blake2b digest of the stream's identity."""
    digest = hashlib.blake2b(
        f"{seed}\x1f{agent}\x1f{job}\x1f{purpose}".encode(), digest_size=16
    ).digest()
    return int.from_bytes(digest, "little")


class RngStream:
    """Independent draw sequence for one (seed, agent, job, purpose).

    Two streams with the same identity produce identical sequences regardless
    of how many other streams were created or drawn from in between.
    """

    def __init__(self, seed: int, agent: str, job: str, purpose: str):
        self.identity = (seed, agent, job, purpose)
        self._generator = np.random.Generator(np.random.Philox(key=stream_key(*self.identity)))
        self.draws = 0

    def random(self) -> float:
        self.draws += 1
        return float(self._generator.random())

    def bernoulli(self, p: float) -> bool:
        """True with probability ``p``; exact for p = 0 and p = 1."""
        return self.random() < p

    def integers(self, low: int, high: int) -> int:
        """Uniform integer in [low, high)."""
        self.draws += 1
        return int(self._generator.integers(low, high))

    def __repr__(self) -> str:
        return f"RngStream{self.identity!r}"
