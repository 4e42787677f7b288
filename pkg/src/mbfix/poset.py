"""Finite posets with bitset order matrices, and exact up-set counting.

A poset on elements ``0..size-1`` is stored as one int per element:
``rows[i]`` has bit j set iff i <= j.  Rows double as principal up-sets,
so the hot operations (subset tests, interval intersections) are single
int AND/compare steps regardless of poset size.

Every constructor here indexes elements by a linear extension, which
keeps order matrices upper triangular and makes golden-matrix tests
reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Optional, Sequence

from ._bits import iter_bits
from .errors import ResourceLimitError

# Hard caps: exact counting is refused, never approximated, beyond these.
MAX_CUBE_VARS = 13
DEFAULT_MAX_COUNT_STATES = 1_500_000
DEFAULT_MAX_MAP_NODES = 20_000_000


class Poset:
    """Immutable finite partial order.

    Treat instances as frozen: all derived data is computed from the row
    masks, and counting helpers rely on rows never changing.
    """

    __slots__ = ("size", "rows", "labels", "_cols")

    def __init__(self, rows: Sequence[int], labels: Optional[Sequence[Any]] = None,
                 validate: bool = False):
        self.size = len(rows)
        self.rows = tuple(rows)
        self.labels = tuple(labels) if labels is not None else None
        self._cols: Optional[tuple[int, ...]] = None
        if self.labels is not None and len(self.labels) != self.size:
            raise ValueError("labels length does not match poset size")
        if validate:
            diagnosis = validate_poset(self)
            if diagnosis != "ok":
                raise ValueError(diagnosis)

    @property
    def cols(self) -> tuple[int, ...]:
        """Column masks: cols[j] has bit i set iff i <= j (principal down-sets)."""
        if self._cols is None:
            cols = [0] * self.size
            for i, row in enumerate(self.rows):
                bit = 1 << i
                for j in iter_bits(row):
                    cols[j] |= bit
            self._cols = tuple(cols)
        return self._cols

    @property
    def full_mask(self) -> int:
        return (1 << self.size) - 1

    def leq(self, i: int, j: int) -> bool:
        return bool(self.rows[i] >> j & 1)

    def up(self, i: int) -> int:
        return self.rows[i]

    def down(self, j: int) -> int:
        return self.cols[j]

    def is_chain(self) -> bool:
        full = self.full_mask
        return all(self.rows[i] | self.cols[i] == full for i in range(self.size))

    def relabel(self, labels: Optional[Sequence[Any]]) -> "Poset":
        return Poset(self.rows, labels)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Poset) and self.rows == other.rows

    def __hash__(self) -> int:
        return hash(self.rows)

    def __repr__(self) -> str:
        return f"Poset(size={self.size})"

    def to_json_dict(self) -> dict:
        order = ["".join("1" if row >> j & 1 else "0" for j in range(self.size))
                 for row in self.rows]
        out: dict[str, Any] = {"size": self.size, "order": order}
        out["labels"] = list(self.labels) if self.labels is not None else None
        return out

    @classmethod
    def from_json_dict(cls, data: dict) -> "Poset":
        size = data["size"]
        order = data["order"]
        if len(order) != size or any(len(r) != size for r in order):
            raise ValueError("order matrix shape does not match size")
        rows = [sum(1 << j for j, ch in enumerate(r) if ch == "1") for r in order]
        return cls(rows, labels=data.get("labels"), validate=True)


@dataclass(frozen=True)
class UpsetMask:
    """A subset of poset elements that is closed upward."""

    size: int
    bits: int

    def elements(self) -> list[int]:
        return list(iter_bits(self.bits))


def is_upset(poset: Poset, bits: int) -> bool:
    return all(poset.rows[i] & ~bits == 0 for i in iter_bits(bits))


def validate_poset(poset: Poset) -> str:
    """Report the first violated poset axiom, or "ok"."""
    n = poset.size
    full = (1 << n) - 1
    for i, row in enumerate(poset.rows):
        if row & ~full:
            return f"row {i} has bits beyond the element range"
        if not row >> i & 1:
            return f"reflexivity violated at element {i}"
    for i in range(n):
        for j in iter_bits(poset.rows[i] & ~(1 << i)):
            if poset.rows[j] >> i & 1:
                return f"antisymmetry violated between {i} and {j}"
    for i in range(n):
        for j in iter_bits(poset.rows[i]):
            if poset.rows[j] & ~poset.rows[i]:
                k = next(iter_bits(poset.rows[j] & ~poset.rows[i]))
                return f"transitivity violated: {i} <= {j} <= {k} but not {i} <= {k}"
    return "ok"


def transitive_closure(rows: Sequence[int]) -> tuple[int, ...]:
    """Warshall closure over bitmask rows."""
    out = list(rows)
    n = len(out)
    for k in range(n):
        row_k = out[k]
        for i in range(n):
            if out[i] >> k & 1:
                out[i] |= row_k
    return tuple(out)


def linear_extension(poset: Poset) -> list[int]:
    """Element order in which every element follows all elements below it."""
    remaining = poset.full_mask
    cols = poset.cols
    order = []
    while remaining:
        for v in iter_bits(remaining):
            if cols[v] & remaining == 1 << v:
                break
        else:
            raise ValueError("relation has a cycle; not a partial order")
        order.append(v)
        remaining &= ~(1 << v)
    return order


def is_linear_extension_indexed(poset: Poset) -> bool:
    return all(row & ((1 << i) - 1) == 0 for i, row in enumerate(poset.rows))


def reindex_by_linear_extension(poset: Poset) -> Poset:
    if is_linear_extension_indexed(poset):
        return poset
    order = linear_extension(poset)
    position = {v: p for p, v in enumerate(order)}
    rows = [0] * poset.size
    for v in order:
        p = position[v]
        for j in iter_bits(poset.rows[v]):
            rows[p] |= 1 << position[j]
    labels = None
    if poset.labels is not None:
        labels = [poset.labels[v] for v in order]
    return Poset(rows, labels)


# ---------------------------------------------------------------------------
# Constructors


def empty() -> Poset:
    return Poset(())


def chain(k: int) -> Poset:
    """Total order on k elements."""
    if k < 1:
        raise ValueError("chain needs k >= 1")
    full = (1 << k) - 1
    return Poset([full & ~((1 << i) - 1) for i in range(k)])


def antichain(k: int) -> Poset:
    """k pairwise incomparable elements."""
    if k < 1:
        raise ValueError("antichain needs k >= 1")
    return Poset([1 << i for i in range(k)])


def boolean_cube(n: int) -> Poset:
    """Subsets of an n-set ordered by inclusion; element index = subset bitmask."""
    if n < 0 or n > 16:
        raise ValueError("boolean_cube supports 0 <= n <= 16")
    if n > MAX_CUBE_VARS:
        raise ResourceLimitError(
            f"boolean_cube({n}) order matrix needs 2^{2 * n} bits; refusing beyond n={MAX_CUBE_VARS}")
    size = 1 << n
    full = size - 1
    rows = []
    for x in range(size):
        row = 0
        sup = x
        while True:
            row |= 1 << sup
            if sup == full:
                break
            sup = (sup + 1) | x
        rows.append(row)
    return Poset(rows)


def product(s: Poset, t: Poset) -> Poset:
    """Componentwise order on pairs; (a, b) indexed as a + |S|*b."""
    ns = s.size
    rows = []
    for trow_bits in t.rows:
        t_shifts = [ns * j for j in iter_bits(trow_bits)]
        for srow in s.rows:
            row = 0
            for shift in t_shifts:
                row |= srow << shift
            rows.append(row)
    return Poset(rows)


def disjoint_sum(s: Poset, t: Poset) -> Poset:
    """Side-by-side union with no cross relations."""
    rows = list(s.rows) + [row << s.size for row in t.rows]
    labels = None
    if s.labels is not None and t.labels is not None:
        labels = list(s.labels) + list(t.labels)
    return Poset(rows, labels)


# ---------------------------------------------------------------------------
# Counting


def count_upsets(poset: Poset, *, max_states: int = DEFAULT_MAX_COUNT_STATES) -> int:
    """Number of upward-closed subsets, exactly.

    Recursion on a minimal element v of the remaining set S:
    U(S) = U(S - {v}) + U(S - up(v)), the two branches being the up-sets
    without and with v.  Remaining sets are split into connected
    components (their counts multiply) and memoised by bitmask.
    """
    n = poset.size
    if n == 0:
        return 1
    rows = poset.rows
    cols = poset.cols
    neighbours = [(rows[i] | cols[i]) & ~(1 << i) for i in range(n)]
    memo: dict[int, int] = {}

    def split_components(mask: int) -> list[int]:
        comps = []
        rem = mask
        while rem:
            comp = rem & -rem
            frontier = comp
            while frontier:
                grow = 0
                for i in iter_bits(frontier):
                    grow |= neighbours[i]
                grow &= mask & ~comp
                comp |= grow
                frontier = grow
            comps.append(comp)
            rem &= ~comp
        return comps

    def solve(mask: int) -> int:
        if mask == 0:
            return 1
        if mask & (mask - 1) == 0:
            return 2
        cached = memo.get(mask)
        if cached is not None:
            return cached
        if len(memo) >= max_states:
            raise ResourceLimitError(
                f"up-set counting exceeded {max_states} memo states on {n} elements")
        comps = split_components(mask)
        if len(comps) > 1:
            result = 1
            for comp in comps:
                result *= solve(comp)
        else:
            # Branching on the minimal element with the widest up-set
            # removes the most elements in the "v included" branch.
            pivot = -1
            pivot_gain = -1
            for v in iter_bits(mask):
                if cols[v] & mask == 1 << v:
                    gain = (rows[v] & mask).bit_count()
                    if gain > pivot_gain:
                        pivot, pivot_gain = v, gain
            result = solve(mask & ~(1 << pivot)) + solve(mask & ~rows[pivot])
        memo[mask] = result
        return result

    return solve(poset.full_mask)


def enumerate_upsets(poset: Poset, *, max_size: int = 500_000) -> list[int]:
    """All up-sets as bitmasks, ascending.

    Closure construction: every up-set is the union of the principal
    up-sets of its minimal elements, so OR-closing the rows over the
    empty set generates all of them.
    """
    found = {0}
    for c in range(poset.size):
        row = poset.rows[c]
        found.update(u | row for u in list(found))
        if len(found) > max_size:
            raise ResourceLimitError(f"more than {max_size} up-sets; refusing to materialise")
    return sorted(found)


class UpsetLattice(Poset):
    """Poset of all up-sets of a base poset, ordered by inclusion.

    Remembers the base so map counting can use the reduction
    |B^C ^ S| = (number of up-sets of C x S) instead of brute force.
    """

    __slots__ = ("upset_base",)

    def __init__(self, rows, labels, base: Poset):
        super().__init__(rows, labels)
        self.upset_base = base


def upset_lattice(base: Poset, *, max_size: int = 4096) -> UpsetLattice:
    masks = enumerate_upsets(base, max_size=max_size)
    rows = []
    for m in masks:
        row = 0
        for i, other in enumerate(masks):
            if m & ~other == 0:
                row |= 1 << i
        rows.append(row)
    return UpsetLattice(rows, masks, base)


def upset_base_of(lattice: Poset) -> Optional[Poset]:
    return getattr(lattice, "upset_base", None)


def count_chain_maps(q: Poset, k: int) -> int:
    """Monotone maps from a k-element chain into q, exactly.

    Equals the entry sum of the (k-1)-th power of q's order matrix, but
    never materialises that matrix.  A map of a k-chain is a weakly
    increasing k-tuple, so for small k the count collapses to popcount
    arithmetic over the row and column masks: choosing the images of the
    inner elements leaves d(lowest) and u(highest) free choices for the
    ends.  Larger k uses the vector recurrence over comparable pairs.
    """
    if k < 0:
        raise ValueError("chain length must be nonnegative")
    if k == 0:
        return 1
    if q.size == 0:
        return 0
    if k == 1:
        return q.size
    rows = q.rows
    if k == 2:
        return sum(r.bit_count() for r in rows)
    cols = q.cols
    if k == 3:
        return sum(c.bit_count() * r.bit_count() for c, r in zip(cols, rows))
    if k == 4:
        down_counts = [c.bit_count() for c in cols]
        up_counts = [r.bit_count() for r in rows]
        total = 0
        for i in range(q.size):
            d = down_counts[i]
            for j in iter_bits(rows[i]):
                total += d * up_counts[j]
        return total
    if q.size > 100_000:
        raise ResourceLimitError(
            f"chain map recurrence on {q.size} elements with k={k} refused")
    down_lists = [list(iter_bits(c)) for c in cols]
    values = [1] * q.size
    for _ in range(k - 1):
        values = [sum(values[i] for i in down) for down in down_lists]
    return sum(values)


def count_monotone_maps(s: Poset, q: Poset, *,
                        max_nodes: int = DEFAULT_MAX_MAP_NODES) -> int:
    """Number of monotone maps s -> q, exactly.

    Route choice, cheapest first: chains use the vector recurrence; a
    target presented as an up-set lattice B^C reduces to counting
    up-sets of C x S; otherwise a DFS over a linear extension of s with
    bitmask candidate sets (practical for |s| up to ~24).
    """
    if s.size == 0:
        return 1
    if q.size == 0:
        return 0
    if s.is_chain():
        return count_chain_maps(q, s.size)
    base = upset_base_of(q)
    if base is not None:
        return count_upsets(product(base, s))
    if s.size > 24:
        raise ResourceLimitError(
            f"monotone map counting needs |S| <= 24 or a structured target; got |S| = {s.size}")

    order = linear_extension(s)
    # Constraints only flow from already-assigned elements below x.
    preds: list[list[int]] = []
    position = {v: i for i, v in enumerate(order)}
    for v in order:
        preds.append([position[u] for u in iter_bits(s.cols[v] & ~(1 << v))])
    q_rows = q.rows
    q_full = q.full_mask
    budget = max_nodes

    def dfs(depth: int, assigned: list[int]) -> int:
        nonlocal budget
        if depth == len(order):
            return 1
        candidates = q_full
        for p in preds[depth]:
            candidates &= q_rows[assigned[p]]
            if not candidates:
                return 0
        total = 0
        for value in iter_bits(candidates):
            budget -= 1
            if budget < 0:
                raise ResourceLimitError("monotone map DFS exceeded its node budget")
            assigned.append(value)
            total += dfs(depth + 1, assigned)
            assigned.pop()
        return total

    return dfs(0, [])


def principal_upset(poset: Poset, c: int) -> UpsetMask:
    """Up(c) = {x : x >= c}, i.e. row c of the order matrix."""
    if not 0 <= c < poset.size:
        raise IndexError(f"element {c} out of range for poset of size {poset.size}")
    return UpsetMask(poset.size, poset.rows[c])
