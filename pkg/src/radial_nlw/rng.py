"""Deterministic per-member random streams.

Member ``i`` of a run with master seed ``s`` uses the 64-bit seed

    derive_stream(s, i) = splitmix64(s XOR (i * 0x9E3779B97F4A7C15 mod 2^64))

where ``splitmix64(x)`` is the SplitMix64 output function applied to
``x + 0x9E3779B97F4A7C15``:

    z = (x + 0x9E3779B97F4A7C15) mod 2^64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) mod 2^64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) mod 2^64
    z = z ^ (z >> 31)

Both maps are bijections of the 64-bit integers, so distinct indices always give
distinct seeds.  The seed initializes a numpy ``PCG64`` generator.
"""
import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15
DERIVATION_RULE = "splitmix64(master ^ index*0x9E3779B97F4A7C15) -> PCG64"


def splitmix64(x: int) -> int:
    z = (x + GOLDEN_GAMMA) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def derive_stream(master_seed: int, index: int) -> int:
    """64-bit seed of member ``index``."""
    if index < 0:
        raise ValueError("member index must be >= 0")
    return splitmix64((master_seed & MASK64) ^ ((index * GOLDEN_GAMMA) & MASK64))


def member_rng(master_seed: int, index: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(derive_stream(master_seed, index)))
