"""Monotone Boolean functions packed as ints, and the families D_n.

A function of n variables is one int of 2^n bits: the bit at point
index sum(x_i * 2^(i-1)) holds f(x_1, ..., x_n).  Written as a string
left to right from index 0, D_2 reads exactly 0000, 0001, 0011, 0101,
0111, 1111.

D_n is generated from the split f = g0 * g1 along the top variable:
g0, g1 in D_{n-1} with g0 <= g1 pointwise.  Families are kept sorted
ascending by packed value, which is also a linear extension of the
pointwise order.
"""

from __future__ import annotations

import os
import struct
from array import array
from bisect import bisect_left
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence, Union

from ._bits import iter_bits
from .errors import OutOfScopeError, ResourceLimitError
from .poset import Poset
from . import matrix as _matrix

MAX_GENERATED_VARS = 6  # d_7 has ~2.4e12 members; only counts beyond here
MAX_DEDEKIND = 7
MAX_POSET_FAMILY = 30_000

MBF1_MAGIC = b"MBF1"


def _point_count(n: int) -> int:
    return 1 << n


def _lower_half_masks(n: int) -> list[int]:
    """For each variable i (0-based), the mask of points with x_{i+1} = 0."""
    points = _point_count(n)
    masks = []
    for i in range(n):
        m = 0
        for p in range(points):
            if not p >> i & 1:
                m |= 1 << p
        masks.append(m)
    return masks


_LOWER_MASKS: dict[int, list[int]] = {}


def _covers_masks(n: int) -> list[int]:
    masks = _LOWER_MASKS.get(n)
    if masks is None:
        masks = _lower_half_masks(n)
        _LOWER_MASKS[n] = masks
    return masks


def is_monotone(bits: int, n: int) -> bool:
    """True iff raising any single coordinate never lowers the value.

    Checking only single-coordinate covers suffices; the full order is
    their transitive closure.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    if bits < 0 or bits >> _point_count(n):
        raise ValueError(f"bit vector does not fit 2^{n} points")
    masks = _covers_masks(n)
    for i in range(n):
        step = 1 << i
        low = bits & masks[i]
        high = (bits >> step) & masks[i]
        if low & ~high:
            return False
    return True


def leq_bits(f: int, g: int) -> bool:
    return f & ~g == 0


@dataclass(frozen=True)
class MonotoneFunction:
    """One monotone Boolean function of n variables."""

    n: int
    bits: int

    def __post_init__(self):
        if not is_monotone(self.bits, self.n):
            raise ValueError("bit vector is not monotone")

    @classmethod
    def from_string(cls, s: str) -> "MonotoneFunction":
        length = len(s)
        if length == 0 or length & (length - 1):
            raise ValueError("string length must be a power of two")
        if set(s) - {"0", "1"}:
            raise ValueError("string must be over 0/1")
        bits = sum(1 << i for i, ch in enumerate(s) if ch == "1")
        return cls(length.bit_length() - 1, bits)

    def to_string(self) -> str:
        return "".join("1" if self.bits >> p & 1 else "0"
                       for p in range(_point_count(self.n)))

    def value_at(self, point: int) -> int:
        return self.bits >> point & 1

    def __str__(self) -> str:
        return self.to_string()


def leq(f: MonotoneFunction, g: MonotoneFunction) -> bool:
    """Pointwise order: f <= g iff f's one-set is a subset of g's."""
    if f.n != g.n:
        raise ValueError(f"cannot compare functions of {f.n} and {g.n} variables")
    return leq_bits(f.bits, g.bits)


class FunctionFamily:
    """Strictly sorted family of monotone functions of n variables.

    Values are stored packed; n <= 6 families sit in a 64-bit array so
    that the multi-million member D_6 stays compact.  Index masks over
    the family (one int per hypercube point marking which members are 1
    there) turn order queries into a handful of word ANDs.
    """

    def __init__(self, n: int, values: Union[array, Sequence[int]], *, _trusted: bool = False):
        self.n = n
        if isinstance(values, array) and values.typecode == "Q":
            self.values = values
        elif n <= 6:
            self.values = array("Q", values)
        else:
            self.values = list(values)
        if not _trusted:
            prev = -1
            for v in self.values:
                if v <= prev:
                    raise ValueError("family must be strictly ascending")
                prev = v
            if len(self.values) <= 200_000:
                for v in self.values:
                    if not is_monotone(v, n):
                        raise ValueError(f"member {v:#x} is not monotone")
        self._ones: Optional[list[int]] = None
        self._zeros: Optional[list[int]] = None
        self._poset: Optional[Poset] = None

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self) -> Iterator[int]:
        return iter(self.values)

    def __getitem__(self, i: int) -> int:
        return self.values[i]

    def __contains__(self, bits: int) -> bool:
        i = bisect_left(self.values, bits)
        return i < len(self.values) and self.values[i] == bits

    def index(self, bits: int) -> int:
        i = bisect_left(self.values, bits)
        if i == len(self.values) or self.values[i] != bits:
            raise ValueError(f"{bits:#x} not in family")
        return i

    def functions(self) -> Iterator[MonotoneFunction]:
        for v in self.values:
            yield MonotoneFunction(self.n, v)

    @property
    def full_index_mask(self) -> int:
        return (1 << len(self.values)) - 1

    def ones_masks(self) -> list[int]:
        """Per point p: bitmask over member indices whose bit p is set."""
        if self._ones is None:
            count = len(self.values)
            if count > 200_000:
                raise ResourceLimitError(
                    f"index masks over {count} members refused")
            points = _point_count(self.n)
            bufs = [bytearray((count + 7) // 8) for _ in range(points)]
            for i, v in enumerate(self.values):
                byte = i >> 3
                bit = 1 << (i & 7)
                for p in iter_bits(v):
                    bufs[p][byte] |= bit
            self._ones = [int.from_bytes(b, "little") for b in bufs]
        return self._ones

    def zeros_masks(self) -> list[int]:
        if self._zeros is None:
            full = self.full_index_mask
            self._zeros = [full ^ m for m in self.ones_masks()]
        return self._zeros

    def up_mask(self, bits: int) -> int:
        """Member indices of everything >= bits (bits need not be a member)."""
        m = self.full_index_mask
        ones = self.ones_masks()
        for p in iter_bits(bits):
            m &= ones[p]
            if not m:
                break
        return m

    def down_mask(self, bits: int) -> int:
        """Member indices of everything <= bits."""
        m = self.full_index_mask
        zeros = self.zeros_masks()
        points_full = (1 << _point_count(self.n)) - 1
        for p in iter_bits(points_full & ~bits):
            m &= zeros[p]
            if not m:
                break
        return m

    def as_poset(self) -> Poset:
        """Pointwise order restricted to the family; rows are up-sets."""
        if self._poset is None:
            if len(self.values) > MAX_POSET_FAMILY:
                raise ResourceLimitError(
                    f"order matrix over {len(self.values)} functions refused")
            rows = [self.up_mask(v) for v in self.values]
            self._poset = Poset(rows)
        return self._poset

    # -- MBF1 binary format -------------------------------------------------

    def save(self, path: Union[str, os.PathLike]) -> None:
        rec = _record_bytes(self.n)
        with open(path, "wb") as fh:
            fh.write(MBF1_MAGIC)
            fh.write(struct.pack("<BQ", self.n, len(self.values)))
            for v in self.values:
                fh.write(v.to_bytes(rec, "little"))

    @classmethod
    def load(cls, path: Union[str, os.PathLike]) -> "FunctionFamily":
        with open(path, "rb") as fh:
            magic = fh.read(4)
            if magic != MBF1_MAGIC:
                raise ValueError("not an MBF1 file")
            n, count = struct.unpack("<BQ", fh.read(9))
            rec = _record_bytes(n)
            payload = fh.read()
        if len(payload) != rec * count:
            raise ValueError("truncated MBF1 payload")
        values = [int.from_bytes(payload[i * rec:(i + 1) * rec], "little")
                  for i in range(count)]
        return cls(n, values)


def _record_bytes(n: int) -> int:
    return max(1, _point_count(n) // 8)


# ---------------------------------------------------------------------------
# Generation of D_n


_FAMILIES: dict[int, FunctionFamily] = {}


def generate_dn(n: int) -> FunctionFamily:
    """All of D_n, sorted ascending.  Refused above n=6 (d_7 ~ 2.4e12)."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n > MAX_GENERATED_VARS:
        raise OutOfScopeError(
            f"materialising D_{n} is out of scope (d_{n} members do not fit memory)")
    cached = _FAMILIES.get(n)
    if cached is not None:
        return cached
    if n == 0:
        family = FunctionFamily(0, [0, 1], _trusted=True)
        _FAMILIES[0] = family
        return family

    prev = generate_dn(n - 1)
    zeros = prev.zeros_masks()
    vals = prev.values
    prev_points_full = (1 << _point_count(n - 1)) - 1
    prev_full_index = prev.full_index_mask
    shift = _point_count(n - 1)
    word_bytes = (len(prev) + 63) // 64 * 8

    out = array("Q") if n <= 6 else []
    append = out.append
    for g1 in vals:
        hi = g1 << shift
        m = prev_full_index
        rem = prev_points_full & ~g1
        while rem:
            low = rem & -rem
            m &= zeros[low.bit_length() - 1]
            rem ^= low
        # ascending g0 within ascending g1 keeps the family sorted
        buf = m.to_bytes(word_bytes, "little")
        for w in range(0, word_bytes, 8):
            word = int.from_bytes(buf[w:w + 8], "little")
            base = w << 3
            while word:
                low = word & -word
                append(vals[base + low.bit_length() - 1] | hi)
                word ^= low
    family = FunctionFamily(n, out, _trusted=True)
    _FAMILIES[n] = family
    return family


def as_poset(family: FunctionFamily) -> Poset:
    return family.as_poset()


# ---------------------------------------------------------------------------
# Dedekind numbers


_DEDEKIND_CACHE: dict[int, int] = {}


def dedekind(n: int) -> int:
    """d_n = |D_n|.  Up to 6 by generation, 7 via |D_5^{B^2}|; 8 refused."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n > MAX_DEDEKIND:
        raise OutOfScopeError(
            f"d_{n} (a 23+ digit count needing distributed computation) is out of scope")
    cached = _DEDEKIND_CACHE.get(n)
    if cached is not None:
        return cached
    if n <= MAX_GENERATED_VARS:
        value = len(generate_dn(n))
    else:
        # d_7 = |D_5^{B^2}| = SumSq(M(D_5)^2), streamed over the 7581
        # element order poset of D_5.
        value = _matrix.sum_squares_of_square(generate_dn(5).as_poset())
    _DEDEKIND_CACHE[n] = value
    return value
