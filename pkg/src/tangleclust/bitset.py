"""Packed bit-vector kernels for set-intersection counting.

Memberships are stored as numpy uint8 arrays produced by ``np.packbits``
(big-endian within a byte, zero padding at the tail).  Padding bits stay
zero under intersection, so popcounts over packed arrays are exact.
"""

import numpy as np

if hasattr(np, "bitwise_count"):
    _popcount_u8 = np.bitwise_count
else:  # numpy < 2.0
    _TABLE = np.array([bin(i).count("1") for i in range(256)], dtype=np.uint8)

    def _popcount_u8(x):
        return _TABLE[x]


def pack(mask) -> np.ndarray:
    """Pack a boolean membership vector into a uint8 bitset."""
    return np.packbits(np.asarray(mask, dtype=bool))


def unpack(bits: np.ndarray, n: int) -> np.ndarray:
    """Inverse of :func:`pack` for a universe of ``n`` objects."""
    return np.unpackbits(bits, count=n).astype(bool)


def count(bits: np.ndarray) -> int:
    """Number of set bits."""
    return int(_popcount_u8(bits).sum())


def count_and2(a: np.ndarray, b: np.ndarray) -> int:
    """|A ∩ B| on packed bitsets."""
    return int(_popcount_u8(a & b).sum())


def count_and3(a: np.ndarray, b: np.ndarray, c: np.ndarray) -> int:
    """|A ∩ B ∩ C| on packed bitsets."""
    return int(_popcount_u8(a & b & c).sum())


def is_subset(a: np.ndarray, b: np.ndarray) -> bool:
    """True iff A ⊆ B on packed bitsets."""
    return bool(np.array_equal(a & b, a))
