"""Deterministic RNG stream derivation.

Every source of randomness in this package is a ``numpy.random.Generator``
derived from a master seed, a purpose string, and zero or more integer
indices.  Streams for distinct (purpose, indices) tuples are statistically
independent, and re-deriving a stream always reproduces it, so results do
not depend on execution order or worker count.
"""

from __future__ import annotations

import zlib

import numpy as np


def derive_rng(master_seed: int, purpose: str, *indices: int) -> np.random.Generator:
    """Return the generator for (master_seed, purpose, *indices).

    The purpose string is hashed with CRC-32 and used, together with the
    indices, as the spawn key of a ``SeedSequence`` rooted at the master
    seed.
    """
    key = zlib.crc32(purpose.encode("utf-8"))
    seq = np.random.SeedSequence(master_seed, spawn_key=(key, *indices))
    return np.random.default_rng(seq)


def child_seed_sequences(rng: np.random.Generator, n: int) -> list[np.random.SeedSequence]:
    """Spawn ``n`` child seed sequences from a generator's seed sequence.

    Unlike ``rng.spawn``, the returned sequences can be turned into fresh
    generators repeatedly (e.g. once per sweep grid value) with identical
    results each time.
    """
    return rng.bit_generator.seed_seq.spawn(n)
