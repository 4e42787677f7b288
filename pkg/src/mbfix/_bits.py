"""Bit-vector helpers on plain Python ints.

Index sets and order-matrix rows throughout the package are unbounded
ints used as bitsets: bit i set means element i is in the set.
"""

from __future__ import annotations

from typing import Iterator

_WORD_BYTES = 8
_WORD_BITS = 64


def iter_bits(mask: int) -> Iterator[int]:
    """Yield the indices of set bits in ascending order.

    Splits the int into 64-bit words first so each extraction step works
    on a machine-sized int; iterating a multi-thousand-bit mask directly
    with ``mask & -mask`` would cost a full big-int pass per bit.
    """
    if mask < 0:
        raise ValueError("negative mask")
    nbytes = (mask.bit_length() + 7) // 8
    buf = mask.to_bytes(nbytes + (-nbytes) % _WORD_BYTES, "little")
    base = 0
    for off in range(0, len(buf), _WORD_BYTES):
        word = int.from_bytes(buf[off : off + _WORD_BYTES], "little")
        while word:
            low = word & -word
            yield base + low.bit_length() - 1
            word ^= low
        base += _WORD_BITS


def bits_of(mask: int) -> list[int]:
    """Set-bit indices as a list."""
    return list(iter_bits(mask))


def mask_of(indices) -> int:
    out = 0
    for i in indices:
        out |= 1 << i
    return out
