"""Deterministic seeded random streams.

A stream is identified by a 64-bit master seed plus a derivation path of
int/str parts; that pair fully determines every value drawn from it, so
per-image work can run in any order or in parallel without changing results.
"""

from __future__ import annotations

import hashlib

import numpy as np

# Derivation recipe recorded in dataset manifests so runs stay auditable.
SEED_DERIVATION = (
    "sha256(master_seed:le64 || per part: 'i'+int:le64 or 's'+len:le32+utf8)"
    "[:8] as le64 -> numpy PCG64"
)

_MASK64 = (1 << 64) - 1


class SeededStream:
    """A lazily-created PCG64 generator keyed by (master_seed, path)."""

    def __init__(self, master_seed: int, path: tuple = ()):
        self.master_seed = int(master_seed) & _MASK64
        self.path = tuple(path)
        self._rng: np.random.Generator | None = None

    def child(self, *parts) -> "SeededStream":
        return SeededStream(self.master_seed, self.path + tuple(parts))

    @property
    def seed(self) -> int:
        h = hashlib.sha256()
        h.update(self.master_seed.to_bytes(8, "little"))
        for part in self.path:
            if isinstance(part, bool) or not isinstance(part, (int, str)):
                raise TypeError(f"stream path parts must be int or str, got {type(part).__name__}")
            if isinstance(part, int):
                h.update(b"i")
                h.update((part & _MASK64).to_bytes(8, "little"))
            else:
                raw = part.encode("utf-8")
                h.update(b"s")
                h.update(len(raw).to_bytes(4, "little"))
                h.update(raw)
        return int.from_bytes(h.digest()[:8], "little")

    @property
    def rng(self) -> np.random.Generator:
        if self._rng is None:
            self._rng = np.random.default_rng(self.seed)
        return self._rng

    def __repr__(self) -> str:
        return f"SeededStream(master_seed={self.master_seed}, path={self.path!r})"
