"""Deterministic, splittable random streams.

All randomness in the package flows through substream(), which derives an
independent counter-based generator from (seed, *key) where key is a tuple of
small non-negative integers (domain tag, cell index, trial index, chunk
index, ...).  Two properties matter:

* the stream for a given (seed, key) never depends on how many other streams
  were created, so campaign results are independent of worker count and of
  evaluation order;
* distinct keys give statistically independent streams.

Domain tags keep unrelated consumers (volume sampler, spectral sampler, ...)
from ever sharing a stream even if their remaining key components collide.
"""

from __future__ import annotations

import numpy as np

# Domain separation tags; first component of every key.
DOMAIN_VOLUME = 1
DOMAIN_SPECTRAL = 2
DOMAIN_SYMMETRIZE = 3
DOMAIN_CAMPAIGN = 4
DOMAIN_PERTURB = 5

# Fixed chunk size for chunked Monte Carlo reductions.  Accumulation happens
# per chunk in index order, so totals do not depend on how chunks are
# scheduled.
MC_CHUNK = 65536


def substream(seed: int, *key: int) -> np.random.Generator:
    """Return a Generator for the stream identified by (seed, *key)."""
    seed = int(seed)
    if seed < 0:
        raise ValueError("seed must be a non-negative integer")
    parts = tuple(int(k) for k in key)
    if any(k < 0 for k in parts):
        raise ValueError("key components must be non-negative integers")
    ss = np.random.SeedSequence(entropy=seed, spawn_key=parts)
    return np.random.Generator(np.random.Philox(ss))


def chunk_sizes(total: int, chunk: int = MC_CHUNK) -> list[int]:
    """Split a sample budget into fixed-size chunks (last one ragged)."""
    total = int(total)
    if total <= 0:
        raise ValueError("sample count must be positive")
    full, rest = divmod(total, chunk)
    out = [chunk] * full
    if rest:
        out.append(rest)
    return out


def derive_seed(seed: int, *key: int) -> int:
    """Stable integer seed for the stream identified by (seed, *key).

    Use when a sub-computation takes a scalar seed of its own (and will call
    substream internally); the derived value inherits the independence
    properties of substream keys.
    """
    seed = int(seed)
    if seed < 0:
        raise ValueError("seed must be a non-negative integer")
    parts = tuple(int(k) for k in key)
    if any(k < 0 for k in parts):
        raise ValueError("key components must be non-negative integers")
    ss = np.random.SeedSequence(entropy=seed, spawn_key=parts)
    return int(ss.generate_state(1, dtype=np.uint64)[0])
