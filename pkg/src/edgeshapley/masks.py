"""Bit-mask helpers for coalitions and edge subsets.

Coalitions and edge subsets are plain Python ints: bit ``i`` set means member
``i`` (canonical index) is present. All enumeration helpers yield masks in
ascending integer order, which is the library-wide deterministic order.
"""

from __future__ import annotations

from typing import Iterator

import numpy as np


def indices_of(mask: int) -> list[int]:
    """Set bit positions of ``mask``, ascending."""
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def subsets_of(mask: int) -> Iterator[int]:
    """All submasks of ``mask`` (including 0 and ``mask``), ascending."""
    sub = 0
    while True:
        yield sub
        if sub == mask:
            return
        # next submask in ascending order
        sub = (sub - mask) & mask


def popcount_array(masks: np.ndarray) -> np.ndarray:
    """Per-element popcount of an integer array."""
    return np.bitwise_count(masks)


def all_masks(n: int) -> np.ndarray:
    """0 .. 2^n - 1 as an int64 array (requires n <= 62)."""
    return np.arange(1 << n, dtype=np.int64)
