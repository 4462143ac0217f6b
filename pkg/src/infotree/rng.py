"""Deterministic stream derivation for Monte Carlo work.

Every experiment cell owns a generator derived from (master seed, trial,
purpose tag), so results do not depend on scheduling or evaluation order.
The underlying bit generator is Philox (counter-based, 64-bit words); keys
are 128-bit BLAKE2b digests of the derivation path, which realises the
"streams never collide" contract cryptographically.
"""

from __future__ import annotations

import hashlib

import numpy as np


class SeededGenerator:
    """A named, reproducible random stream.

    Wraps ``numpy.random.Generator(Philox(key=...))``; the key is fully
    determined by the master seed and the derivation path, and the counter
    state advances as variates are drawn.
    """

    def __init__(self, seed, _key=None, _path=""):
        self.seed = int(seed)
        self.path = _path
        if _key is None:
            _key = hashlib.blake2b(
                f"infotree|{self.seed}".encode(), digest_size=16
            ).digest()
        self._key = _key
        bitgen = np.random.Philox(key=int.from_bytes(_key, "little"))
        self.generator = np.random.Generator(bitgen)

    def derive(self, trial, tag):
        """Child stream for (trial, tag); same inputs give the same stream."""
        trial = int(trial)
        child_key = hashlib.blake2b(
            self._key + f"|{trial}|{tag}".encode(), digest_size=16
        ).digest()
        return SeededGenerator(self.seed, _key=child_key,
                               _path=f"{self.path}/{trial}:{tag}")

    # Thin passthroughs for the handful of draws the package uses.
    def uniform(self, size=None):
        return self.generator.uniform(size=size)

    def integers(self, low, high=None, size=None):
        return self.generator.integers(low, high=high, size=size)

    def multinomial(self, n, pvals):
        return self.generator.multinomial(n, pvals)

    def binomial(self, n, p):
        return self.generator.binomial(n, p)

    def permutation(self, n):
        return self.generator.permutation(n)

    def choice(self, n, size, replace=False):
        return self.generator.choice(n, size=size, replace=replace)

    def __repr__(self):
        return f"SeededGenerator(seed={self.seed}, path={self.path!r})"


def derive_stream(gen: SeededGenerator, trial, tag) -> SeededGenerator:
    """Module-level spelling of :meth:`SeededGenerator.derive`."""
    return gen.derive(trial, tag)
