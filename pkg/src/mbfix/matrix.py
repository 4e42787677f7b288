"""Order-array arithmetic: powers of M(S), entry sums, sums of squares.

M(S)[i,j] = 1 iff i <= j.  Entry sums of powers count monotone maps from
chains, and sums of squares count maps from the 2-cube:

    Sum(M(S))      = |S^B|          Sum(M(S)^2) = |S^{P_3}|
    Sum(M(S)^3)    = |S^{P_4}|      SumSq(M(S)^2) = |S^{B^2}|

Everything is exact: entries are plain Python ints.  Matrices are only
materialised for small posets; large posets go through the streaming
helpers at the bottom, which never build the dim^2 entry table.
"""

from __future__ import annotations

from dataclasses import dataclass

from ._bits import iter_bits
from .errors import ResourceLimitError
from .poset import Poset, count_chain_maps, reindex_by_linear_extension

# Above this, dense big-int matrices stop being a sensible representation.
MAX_DENSE_DIM = 2000


@dataclass(frozen=True)
class CountMatrix:
    """Square matrix of exact nonnegative counts."""

    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        dim = len(self.entries)
        if any(len(row) != dim for row in self.entries):
            raise ValueError("matrix is not square")
        if any(e < 0 for row in self.entries for e in row):
            raise ValueError("negative entry")

    @property
    def dim(self) -> int:
        return len(self.entries)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i][j]

    def to_csv(self) -> str:
        return "\n".join(",".join(str(e) for e in row) for row in self.entries)


def count_matrix(s: Poset) -> CountMatrix:
    """The 0/1 order array of s, indexed by a linear extension."""
    s = reindex_by_linear_extension(s)
    if s.size > MAX_DENSE_DIM:
        raise ResourceLimitError(
            f"dense matrix on {s.size} elements refused; use the streaming sums")
    entries = tuple(
        tuple(1 if row >> j & 1 else 0 for j in range(s.size)) for row in s.rows
    )
    return CountMatrix(entries)


def mat_mul(a: CountMatrix, b: CountMatrix) -> CountMatrix:
    if a.dim != b.dim:
        raise ValueError("dimension mismatch")
    bt = list(zip(*b.entries))
    entries = tuple(
        tuple(sum(x * y for x, y in zip(row, col) if x) for col in bt)
        for row in a.entries
    )
    return CountMatrix(entries)


def mat_power(m: CountMatrix, k: int) -> CountMatrix:
    """Exact k-th power, k >= 1."""
    if k < 1:
        raise ValueError("exponent must be >= 1")
    result = m
    for _ in range(k - 1):
        result = mat_mul(result, m)
    return result


def sum_entries(m: CountMatrix) -> int:
    return sum(sum(row) for row in m.entries)


def sum_squares(m: CountMatrix) -> int:
    return sum(e * e for row in m.entries for e in row)


def interval_matrix_via_bitsets(s: Poset) -> CountMatrix:
    """M(S)^2 computed entrywise as interval sizes.

    Entry [i,j] = |{k : i <= k <= j}| = popcount(up(i) AND down(j)).
    Same values as mat_power(count_matrix(s), 2) but via one word-AND
    per comparable pair instead of a big-int matrix product.
    """
    s = reindex_by_linear_extension(s)
    if s.size > MAX_DENSE_DIM:
        raise ResourceLimitError(
            f"interval matrix on {s.size} elements refused; use the streaming sums")
    rows = s.rows
    cols = s.cols
    entries = []
    for i in range(s.size):
        up_i = rows[i]
        row_out = [0] * s.size
        for j in iter_bits(up_i):
            row_out[j] = (up_i & cols[j]).bit_count()
        entries.append(tuple(row_out))
    return CountMatrix(tuple(entries))


# ---------------------------------------------------------------------------
# Streaming sums for posets too large to hold as dense matrices.


def sum_of_power(s: Poset, k: int) -> int:
    """Sum(M(S)^k) without materialising the matrix; any poset size."""
    return count_chain_maps(s, k + 1)


def sum_squares_of_square(s: Poset) -> int:
    """SumSq(M(S)^2) streamed over comparable pairs.

    Only pairs i <= j contribute, and there are far fewer of those than
    dim^2 (for the D_5 order poset: 7.8M pairs against 57M entries).
    """
    rows = s.rows
    cols = s.cols
    total = 0
    for i in range(s.size):
        up_i = rows[i]
        for j in iter_bits(up_i):
            c = (up_i & cols[j]).bit_count()
            total += c * c
    return total
