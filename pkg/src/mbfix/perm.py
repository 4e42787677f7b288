"""Variable permutations, their hypercube action, and cycle posets.

A permutation pi of the n variables acts on a point x of the cube by
composition, y(i) = x(pi(i)), which preserves the bitmask-subset order.
The orbits of that action, ordered by "some member below some member",
form the cycle poset; its up-sets are exactly the fixed monotone
functions of pi.
"""

from __future__ import annotations

import math
import re
import sys
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Optional, Sequence

from .errors import ResourceLimitError
from .poset import Poset, boolean_cube, transitive_closure, validate_poset

MAX_ACTION_VARS = 16
MAX_CYCLE_ELEMENTS = 2048


class Permutation:
    """Bijection of {1..n}, stored 0-based internally."""

    __slots__ = ("images",)

    def __init__(self, images: Sequence[int]):
        images = tuple(images)
        if sorted(images) != list(range(len(images))):
            raise ValueError("images must be a bijection of 0..n-1")
        self.images = images

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(range(n))

    @classmethod
    def from_one_based(cls, mapping: Sequence[int]) -> "Permutation":
        return cls([v - 1 for v in mapping])

    @property
    def n(self) -> int:
        return len(self.images)

    @property
    def map(self) -> tuple[int, ...]:
        """1-based image array: map[i-1] = pi(i)."""
        return tuple(v + 1 for v in self.images)

    def __call__(self, i: int) -> int:
        return self.images[i]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Permutation) and self.images == other.images

    def __hash__(self) -> int:
        return hash(self.images)

    def is_identity(self) -> bool:
        return all(v == i for i, v in enumerate(self.images))

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for i, v in enumerate(self.images):
            inv[v] = i
        return Permutation(inv)

    def compose(self, other: "Permutation") -> "Permutation":
        """self after other: result(i) = self(other(i))."""
        if self.n != other.n:
            raise ValueError("degree mismatch")
        return Permutation([self.images[other.images[i]] for i in range(self.n)])

    def cycles(self) -> list[tuple[int, ...]]:
        """Disjoint cycles over 0-based variables, fixed points included."""
        seen = [False] * self.n
        out = []
        for start in range(self.n):
            if seen[start]:
                continue
            cyc = []
            i = start
            while not seen[i]:
                seen[i] = True
                cyc.append(i)
                i = self.images[i]
            out.append(tuple(cyc))
        return out

    def support(self) -> list[int]:
        return [i for i, v in enumerate(self.images) if v != i]

    def to_text(self) -> str:
        moved = [c for c in self.cycles() if len(c) > 1]
        if not moved:
            return "e"
        parts = []
        for cyc in moved:
            if self.n > 9:
                parts.append("(" + " ".join(str(i + 1) for i in cyc) + ")")
            else:
                parts.append("(" + "".join(str(i + 1) for i in cyc) + ")")
        return "".join(parts)

    def __repr__(self) -> str:
        return f"Permutation({self.to_text()!r}, n={self.n})"


def parse_cycles(text: str, n: Optional[int] = None) -> Permutation:
    """Parse cycle notation like "(12)(345)", "e", or "(1 10)(2,11)".

    Digits run together only when every element is a single digit;
    otherwise separate with spaces or commas.  ``n`` adds trailing fixed
    points beyond the largest element mentioned.
    """
    text = text.strip()
    if text in ("e", "()", "id", ""):
        if n is None:
            raise ValueError("identity needs an explicit degree")
        return Permutation.identity(n)
    if not re.fullmatch(r"\s*(\(\s*\d+(?:[\s,]+\d+)*\s*\)\s*)+", text):
        raise ValueError(f"malformed cycle notation: {text!r}")
    cycles = []
    for group in re.findall(r"\(([^()]*)\)", text):
        group = group.strip()
        if re.search(r"[\s,]", group):
            elems = [int(tok) for tok in re.split(r"[\s,]+", group)]
        else:
            elems = [int(ch) for ch in group]
        if any(e < 1 for e in elems):
            raise ValueError("elements are 1-based positive integers")
        cycles.append(elems)
    flat = [e for cyc in cycles for e in cyc]
    if len(set(flat)) != len(flat):
        raise ValueError("cycles are not disjoint")
    top = max(flat)
    degree = n if n is not None else top
    if top > degree:
        raise ValueError(f"element {top} exceeds degree {degree}")
    images = list(range(degree))
    for cyc in cycles:
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            images[a - 1] = b - 1
    return Permutation(images)


@dataclass(frozen=True)
class CycleType:
    """Multiset of cycle lengths, descending, fixed points included."""

    parts: tuple[int, ...]

    def __post_init__(self):
        if any(p < 1 for p in self.parts):
            raise ValueError("cycle lengths are positive")
        if tuple(sorted(self.parts, reverse=True)) != self.parts:
            raise ValueError("parts must be sorted descending")

    @property
    def n(self) -> int:
        return sum(self.parts)

    def moved_parts(self) -> tuple[int, ...]:
        return tuple(p for p in self.parts if p > 1)

    def canonical_permutation(self) -> Permutation:
        """Consecutive blocks, longest cycle first: 3+2 -> (123)(45)."""
        images = []
        start = 0
        for length in self.parts:
            block = list(range(start, start + length))
            images.extend(block[1:] + block[:1])
            start += length
        return Permutation(images)

    def __str__(self) -> str:
        return "+".join(str(p) for p in self.parts)


def cycle_type(perm: Permutation) -> CycleType:
    return CycleType(tuple(sorted((len(c) for c in perm.cycles()), reverse=True)))


def class_size(t: CycleType) -> int:
    """Conjugacy class size n! / prod(k^m_k * m_k!); never read from tables."""
    mult: dict[int, int] = {}
    for p in t.parts:
        mult[p] = mult.get(p, 0) + 1
    denom = 1
    for length, m in mult.items():
        denom *= length ** m * math.factorial(m)
    return math.factorial(t.n) // denom


def _partitions_desc(n: int, cap: int) -> Iterable[tuple[int, ...]]:
    if n == 0:
        yield ()
        return
    for first in range(min(n, cap), 0, -1):
        for rest in _partitions_desc(n - first, first):
            yield (first,) + rest


def enumerate_cycle_types(n: int) -> list[CycleType]:
    """All cycle types of S_n, longest-part-first order."""
    if n < 0 or n > 12:
        raise ValueError("cycle type enumeration supported for 0 <= n <= 12")
    return [CycleType(parts) for parts in _partitions_desc(n, n)]


# ---------------------------------------------------------------------------
# Action on the hypercube


def act_on_point(perm: Permutation, x: int) -> int:
    """y with y(i) = x(pi(i)); preserves the subset order on points."""
    n = perm.n
    if x < 0 or x >> n:
        raise ValueError(f"point {x} out of range for {n} variables")
    y = 0
    for i, v in enumerate(perm.images):
        if x >> v & 1:
            y |= 1 << i
    return y


@lru_cache(maxsize=128)
def _point_table_cached(images: tuple[int, ...]) -> tuple[int, ...]:
    perm = Permutation(images)
    return tuple(act_on_point(perm, x) for x in range(1 << perm.n))


def point_table(perm: Permutation) -> tuple[int, ...]:
    """act_on_point tabulated over the whole cube (n <= 16)."""
    if perm.n > MAX_ACTION_VARS:
        raise ResourceLimitError(f"point table for n={perm.n} refused")
    return _point_table_cached(perm.images)


@dataclass
class CyclePoset:
    """Orbits of the point action, ordered as a poset.

    Element i of the poset is cycles[i]; labels carry (representative
    point, cycle length).  ``closed`` records whether the raw relation
    had to be transitively closed to validate (it never should, but the
    check is cheap insurance against a wrong orbit relation).
    """

    perm: Permutation
    poset: Poset
    cycles: tuple[tuple[int, ...], ...]
    closed: bool = False

    @property
    def size(self) -> int:
        return self.poset.size

    def lengths(self) -> list[int]:
        return [len(c) for c in self.cycles]

    def representatives(self) -> list[int]:
        return [c[0] for c in self.cycles]


def cycle_poset(perm: Permutation) -> CyclePoset:
    """Cycl(pi, B^n): cycles sorted by minimum point, which is a linear
    extension because x <= y on points implies x <= y as integers."""
    n = perm.n
    if n > MAX_ACTION_VARS:
        raise ResourceLimitError(f"cycle poset for n={n} refused")
    if perm.is_identity():
        cube = boolean_cube(n)
        cycles = tuple((x,) for x in range(1 << n))
        labelled = cube.relabel([(x, 1) for x in range(1 << n)])
        return CyclePoset(perm, labelled, cycles)

    table = point_table(perm)
    size = 1 << n
    seen = bytearray(size)
    cycles = []
    for p in range(size):
        if seen[p]:
            continue
        orbit = []
        x = p
        while not seen[x]:
            seen[x] = True
            orbit.append(x)
            x = table[x]
        cycles.append(tuple(orbit))
    cycles.sort(key=min)
    r = len(cycles)
    if r > MAX_CYCLE_ELEMENTS:
        raise ResourceLimitError(f"cycle poset with {r} elements refused")

    rows = [0] * r
    for i, ci in enumerate(cycles):
        x0 = ci[0]  # orbit minimum; x <= y with x in ci iff x0 <= some shift of y
        row = 0
        for j, cj in enumerate(cycles):
            for y in cj:
                if x0 & ~y == 0:
                    row |= 1 << j
                    break
        rows[i] = row

    labels = [(c[0], len(c)) for c in cycles]
    poset = Poset(rows, labels)
    closed = False
    diagnosis = validate_poset(poset)
    if diagnosis != "ok":
        # The orbit relation is expected to already be a partial order;
        # close it rather than fail, but say so loudly.
        print(f"mbfix: cycle poset of {perm.to_text()} required transitive closure: "
              f"{diagnosis}", file=sys.stderr)
        poset = Poset(transitive_closure(rows), labels)
        closed = True
        diagnosis = validate_poset(poset)
        if diagnosis != "ok":
            raise ValueError(f"cycle relation is not a partial order: {diagnosis}")
    return CyclePoset(perm, poset, tuple(cycles), closed)
