"""Deterministic 64-bit keyed hashing (splitmix64 finalizer).

All seeded randomness in the package flows through this scheme so that
identical inputs reproduce identical values on any platform and on both
kernel backends.  The construction, also documented in the README:

    mix64(z)         = splitmix64 output finalizer of z
    fold(h, w)       = mix64((h XOR w) + 0x9E3779B97F4A7C15 mod 2^64)
    hash_words(s, *) = fold-left over the words, starting from
                       mix64(s + 0x9E3779B97F4A7C15 mod 2^64)
    u01(h)           = (h >> 11) * 2^-53, a float in [0, 1)

This module is the pure-Python integer reference; the kernel backends
re-implement the same arithmetic vectorized.
"""

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
MIX_C1 = 0xBF58476D1CE4B5B9
MIX_C2 = 0x94D049BB133111EB

# Domain separation tags for the package's independent random streams.
TAG_BASE = 0xA1
TAG_PAIR = 0xA2
TAG_PLANT = 0xA3
TAG_NOISE = 0xA4
TAG_SPLIT = 0xA5


def mix64(z: int) -> int:
    z = int(z) & MASK64  # int() guards against numpy scalar semantics
    z = ((z ^ (z >> 30)) * MIX_C1) & MASK64
    z = ((z ^ (z >> 27)) * MIX_C2) & MASK64
    return z ^ (z >> 31)


def hash_words(seed: int, *words: int) -> int:
    h = mix64((int(seed) + GOLDEN) & MASK64)
    for w in words:
        h = mix64(((h ^ (int(w) & MASK64)) + GOLDEN) & MASK64)
    return h


def u01(h: int) -> float:
    return (h >> 11) * 2.0**-53


def shuffled_indices(n: int, seed: int, tag: int) -> list[int]:
    """Fisher-Yates shuffle of range(n) driven by hash_words(seed, tag, k)."""
    order = list(range(n))
    for k in range(n - 1):
        j = k + hash_words(seed, tag, k) % (n - k)
        order[k], order[j] = order[j], order[k]
    return order
