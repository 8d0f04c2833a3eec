"""Deterministic randomness for samplers and experiment drivers.

Every stochastic routine in this package draws from numpy's PCG64,
always constructed through `generator(seed)` with an explicit 64-bit
seed. Replicate streams are derived with `derive_seed`, which mixes the
base seed with the replicate index through splitmix64, so replicates
are decorrelated while the whole run stays reproducible from one seed.
"""

from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1


def check_seed(seed: int) -> int:
    """Validate a seed as an unsigned 64-bit integer and return it."""
    if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)):
        raise ValueError(f"seed must be an integer, got {type(seed).__name__}")
    seed = int(seed)
    if not 0 <= seed <= MASK64:
        raise ValueError(f"seed must be in [0, 2**64), got {seed}")
    return seed


def splitmix64(x: int) -> int:
    """One splitmix64 output step; the documented seed-mixing primitive."""
    x = (x + 0x9E3779B97F4A7C15) & MASK64
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return (z ^ (z >> 31)) & MASK64


def derive_seed(seed: int, index: int) -> int:
    """Child seed for stream `index`: splitmix64(seed XOR splitmix64(index+1)).

    The inner mix spreads small indices over the full 64-bit range before
    the XOR, so (seed, index) pairs do not collide for nearby seeds.
    """
    seed = check_seed(seed)
    if index < 0:
        raise ValueError("stream index must be nonnegative")
    return splitmix64(seed ^ splitmix64((index + 1) & MASK64))


def generator(seed: int) -> np.random.Generator:
    """The package-wide generator: PCG64 seeded with a 64-bit integer."""
    return np.random.Generator(np.random.PCG64(check_seed(seed)))
