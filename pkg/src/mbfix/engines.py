"""Fix-counting engines and the auto dispatcher.

Every engine computes |Fix(pi, D_n)|, the number of monotone functions
fixed by a variable permutation, by a different route:

  bruteforce  iterate D_n and test pi(f) = f directly (n <= 5)
  upsets      count up-sets of the cycle poset Cycl(pi, B^n)
  generate    materialise the fixes as functions and count them
  coprime     product of per-block cycle posets when all cycle lengths
              across blocks are coprime
  extend      strip fixed variables: for m freed variables the count is
              |FixPoset^{B^m}|, evaluated as matrix sums over the fix
              family (m = 1, 2), as chain maps into D_m when the support
              cycle poset is a chain, or as a product up-set count
  downup      the Down*Up scan over D_{n-2} for types with all cycle
              lengths <= 2

The dispatcher prefers the structural reductions (strip fixed
variables, then coprime split, then Down*Up, then raw up-set counting),
falls back across engines on resource refusals, and never starts work
whose estimate exceeds the budget.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Union

from ._bits import iter_bits
from .errors import OutOfScopeError, ResourceLimitError
from . import matrix as _matrix
from . import mbf as _mbf
from .mbf import FunctionFamily, MonotoneFunction, generate_dn
from .perm import (CyclePoset, CycleType, Permutation, class_size, cycle_poset,
                   cycle_type, parse_cycles, point_table)
from .poset import (Poset, boolean_cube, count_chain_maps, count_upsets, product)

DEFAULT_BUDGET = 2 * 10**8

# Rough family sizes for cost estimates only; the real values are always
# computed, never read from here.
_D_SIZE = (2, 3, 6, 20, 168, 7581, 7_828_354, 2_414_682_040_998)


# ---------------------------------------------------------------------------
# Applying permutations to functions


def _inverse_point_table(perm: Permutation) -> tuple[int, ...]:
    return point_table(perm.inverse())


def _byte_apply_tables(perm: Permutation) -> list[list[int]]:
    """Per byte position, the permuted-point masks of all 256 byte values.

    Applying pi to a packed function is then one table lookup per byte
    of the vector instead of one shift per point.
    """
    inv = _inverse_point_table(perm)
    points = 1 << perm.n
    tables = []
    for base in range(0, points, 8):
        table = [0] * 256
        width = min(8, points - base)
        for value in range(256):
            mask = 0
            v = value & ((1 << width) - 1)
            while v:
                low = v & -v
                mask |= 1 << inv[base + low.bit_length() - 1]
                v ^= low
            table[value] = mask
        tables.append(table)
    return tables


def apply_perm_bits(perm: Permutation, bits: int) -> int:
    """pi(f) as packed bits: result bit at x is f's bit at x o pi."""
    table = point_table(perm)
    out = 0
    for x in range(1 << perm.n):
        if bits >> table[x] & 1:
            out |= 1 << x
    return out


def apply_perm(perm: Permutation, f: MonotoneFunction) -> MonotoneFunction:
    if perm.n != f.n:
        raise ValueError(f"degree mismatch: permutation on {perm.n}, function on {f.n}")
    return MonotoneFunction(f.n, apply_perm_bits(perm, f.bits))


def with_degree(perm: Permutation, n: int) -> Permutation:
    """The same permutation acting on n >= perm.n variables."""
    if n < perm.n:
        if any(v != i for i, v in enumerate(perm.images[n:], start=n)):
            raise ValueError(f"permutation moves variables beyond {n}")
        return Permutation(perm.images[:n])
    return Permutation(perm.images + tuple(range(perm.n, n)))


def restrict_to_support(perm: Permutation) -> Permutation:
    """Relabel the moved variables to 1..k, dropping fixed ones."""
    support = perm.support()
    position = {v: i for i, v in enumerate(support)}
    return Permutation([position[perm.images[v]] for v in support])


# ---------------------------------------------------------------------------
# Fix sets


@dataclass
class FixSet:
    """All fixes of a permutation, materialised as a function family."""

    perm: Permutation
    n: int
    family: FunctionFamily
    cycles: Optional[CyclePoset] = None

    def __len__(self) -> int:
        return len(self.family)


@dataclass
class MethodReport:
    """Outcome of one dispatched fix count."""

    perm_text: str
    n: int
    cycle_type: tuple[int, ...]
    mu: int
    method: str
    count: int
    elapsed: float
    decomposition: list = field(default_factory=list)
    cached: bool = False


MAX_GENERATE_POSET = 64
MAX_GENERATE_FAMILY = 200_000


def fix_generate(perm: Permutation, n: Optional[int] = None) -> FixSet:
    """Materialise Fix(pi, D_n) by OR-closing the principal up-sets of
    the cycle poset, then expanding each up-set to a function that is
    constant on every cycle."""
    if n is not None:
        perm = with_degree(perm, n)
    n = perm.n
    cp = cycle_poset(perm)
    if cp.size > MAX_GENERATE_POSET:
        raise ResourceLimitError(
            f"fix generation over a {cp.size} element cycle poset refused")

    # Closure: start from the zero vector, repeatedly OR in principal
    # up-sets, deduplicating as we go.
    masks = {0}
    for c in range(cp.size):
        row = cp.poset.rows[c]
        masks.update(m | row for m in list(masks))
        if len(masks) > MAX_GENERATE_FAMILY:
            raise ResourceLimitError(
                f"fix family exceeded {MAX_GENERATE_FAMILY} members")

    point_masks = [sum(1 << p for p in cyc) for cyc in cp.cycles]
    values = []
    for m in masks:
        bits = 0
        for c in iter_bits(m):
            bits |= point_masks[c]
        values.append(bits)
    values.sort()
    family = FunctionFamily(n, values)
    return FixSet(perm, n, family, cp)


def fix_count_bruteforce(perm: Permutation, n: Optional[int] = None) -> int:
    """Count pi(f) = f by scanning all of D_n; the definitional oracle."""
    if n is not None:
        perm = with_degree(perm, n)
    n = perm.n
    if n > 5:
        raise OutOfScopeError(f"brute force over d_{n} functions refused (n <= 5)")
    family = generate_dn(n)
    tables = _byte_apply_tables(perm)
    count = 0
    for f in family.values:
        g = 0
        for b, table in enumerate(tables):
            g |= table[f >> (8 * b) & 255]
        if g == f:
            count += 1
    return count


_UPSET_COUNT_CACHE: dict[Poset, int] = {}


def _count_upsets_cached(p: Poset, **kw) -> int:
    cached = _UPSET_COUNT_CACHE.get(p)
    if cached is None:
        cached = count_upsets(p, **kw)
        if len(_UPSET_COUNT_CACHE) < 4096:
            _UPSET_COUNT_CACHE[p] = cached
    return cached


def fix_count_upsets(perm: Permutation, n: Optional[int] = None) -> int:
    """|Fix(pi, D_n)| as the number of up-sets of Cycl(pi, B^n)."""
    if n is not None:
        perm = with_degree(perm, n)
    return _count_upsets_cached(cycle_poset(perm).poset)


def _pairwise_coprime(parts_a: Sequence[int], parts_b: Sequence[int]) -> bool:
    return all(math.gcd(a, b) == 1 for a in parts_a for b in parts_b)


def fix_count_coprime(pi: Permutation, rho: Permutation) -> int:
    """Fix count of pi x rho acting on k+m variables, via the cycle
    poset product; requires coprime cycle lengths across the split."""
    parts_pi = [len(c) for c in pi.cycles()]
    parts_rho = [len(c) for c in rho.cycles()]
    if not _pairwise_coprime(parts_pi, parts_rho):
        raise ValueError(
            f"cycle lengths {sorted(parts_pi)} and {sorted(parts_rho)} are not coprime")
    cp_pi = cycle_poset(pi)
    cp_rho = cycle_poset(rho)
    return _count_upsets_cached(product(cp_pi.poset, cp_rho.poset))


def _support_sigma(perm: Permutation) -> Permutation:
    """Canonical representative of the support restriction."""
    moved = cycle_type(restrict_to_support(perm)).parts
    return CycleType(moved).canonical_permutation()


def _fix_family_of(sigma: Permutation) -> FunctionFamily:
    if sigma.is_identity():
        return generate_dn(sigma.n)
    return fix_generate(sigma).family


def fix_count_extend(perm: Permutation, n: int) -> int:
    """Fix count when pi moves only k < n variables.

    With m = n - k freed variables, Fix(pi, D_n) = FixPoset^{B^m}:
      m = 1: Sum(M(FixPoset))
      m = 2: SumSq(M(FixPoset)^2) over interval popcounts
      m >= 3 and Cycl(pi, B^k) a chain P_r: |D_m^{P_r}| as chain maps
      m >= 3 otherwise: up-sets of Cycl(pi, B^k) x B^m
    """
    sigma = _support_sigma(perm)
    if sigma.n == 0:
        raise ValueError("extension needs a nonempty support; use dedekind for the identity")
    m = n - sigma.n
    if m < 1:
        raise ValueError("extension needs at least one fixed variable")
    if m <= 2:
        family = _fix_family_of(sigma)
        fix_poset = family.as_poset()
        if m == 1:
            return count_chain_maps(fix_poset, 2)
        return _matrix.sum_squares_of_square(fix_poset)
    cp = cycle_poset(sigma)
    if cp.poset.is_chain() and m <= 5:
        return count_chain_maps(generate_dn(m).as_poset(), cp.size)
    return _count_upsets_cached(product(cp.poset, boolean_cube(m)))


# ---------------------------------------------------------------------------
# The Down*Up scan


def _downup_parts(t: CycleType) -> tuple[int, int]:
    twos = sum(1 for p in t.parts if p == 2)
    ones = sum(1 for p in t.parts if p == 1)
    if twos + ones != len(t.parts) or twos == 0:
        raise ValueError("Down*Up needs all cycle lengths <= 2 and at least one transposition")
    return twos, ones


def _cover_masks(n: int) -> tuple[list[int], list[int]]:
    """Per point p: function-vector masks of the points covering p and
    covered by p."""
    points = 1 << n
    ups = [0] * points
    downs = [0] * points
    for p in range(points):
        for i in range(n):
            if not p >> i & 1:
                ups[p] |= 1 << (p | 1 << i)
            else:
                downs[p] |= 1 << (p & ~(1 << i))
    return ups, downs


def fix_count_downup(perm: Permutation, n: Optional[int] = None, *,
                     threads: int = 1) -> int:
    """Sum of Down(f10) * Up(f10) over f10 in D_{n-2}.

    The target must have all cycle lengths <= 2 with at least one
    transposition; one transposition becomes the (n-1, n) factor and the
    rest act on D_{n-2}.  Down counts the fixes below f10 AND f01,
    Up the fixes above f10 OR f01, where f01 is the permuted f10.
    """
    if n is not None:
        perm = with_degree(perm, n)
    n = perm.n
    twos, ones = _downup_parts(cycle_type(perm))
    n2 = n - 2
    if n2 > _mbf.MAX_GENERATED_VARS:
        raise OutOfScopeError(f"Down*Up needs D_{n2} materialised; out of scope")
    sigma2 = CycleType((2,) * (twos - 1) + (1,) * ones).canonical_permutation()
    base = generate_dn(n2)
    fixes = _fix_family_of(sigma2)
    ones_masks = fixes.ones_masks()
    zeros_masks = fixes.zeros_masks()
    full_idx = fixes.full_index_mask
    tables = _byte_apply_tables(sigma2)
    cover_up, cover_down = _cover_masks(n2)
    points_full = (1 << (1 << n2)) - 1

    def scan(lo: int, hi: int) -> int:
        total = 0
        values = base.values
        for idx in range(lo, hi):
            f10 = values[idx]
            f01 = 0
            for b, table in enumerate(tables):
                f01 |= table[f10 >> (8 * b) & 255]
            meet = f10 & f01
            join = f10 | f01
            # Only maximal zero points constrain Down, and only minimal
            # one points constrain Up: both bounds are monotone.
            down_mask = full_idx
            rem = points_full & ~meet
            while rem:
                low = rem & -rem
                rem ^= low
                p = low.bit_length() - 1
                cover = cover_up[p]
                if meet & cover == cover:
                    down_mask &= zeros_masks[p]
            up_mask = full_idx
            rem = join
            while rem:
                low = rem & -rem
                rem ^= low
                p = low.bit_length() - 1
                if not join & cover_down[p]:
                    up_mask &= ones_masks[p]
            total += down_mask.bit_count() * up_mask.bit_count()
        return total

    size = len(base)
    if threads <= 1 or size < 4096:
        return scan(0, size)
    bounds = [size * i // threads for i in range(threads + 1)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = [pool.submit(scan, bounds[i], bounds[i + 1]) for i in range(threads)]
        return sum(f.result() for f in futures)


def downup_trace(perm: Permutation, n: Optional[int] = None) -> list[tuple[int, int, int, int]]:
    """Per-step (f10, f01, Down, Up) tuples of the Down*Up scan, for
    targets small enough to eyeball."""
    if n is not None:
        perm = with_degree(perm, n)
    n = perm.n
    twos, ones = _downup_parts(cycle_type(perm))
    n2 = n - 2
    if n2 > 4:
        raise ResourceLimitError("trace is for small inputs (base degree <= 4)")
    sigma2 = CycleType((2,) * (twos - 1) + (1,) * ones).canonical_permutation()
    base = generate_dn(n2)
    fixes = _fix_family_of(sigma2)
    out = []
    for f10 in base.values:
        f01 = apply_perm_bits(sigma2, f10)
        meet, join = f10 & f01, f10 | f01
        down = sum(1 for g in fixes.values if g & ~meet == 0)
        up = sum(1 for g in fixes.values if join & ~g == 0)
        out.append((f10, f01, down, up))
    return out


# ---------------------------------------------------------------------------
# Dispatcher


def _coprime_blocks(parts: Sequence[int]) -> list[tuple[int, ...]]:
    """Group moved cycle lengths into gcd-connected blocks; lengths in
    different blocks are pairwise coprime."""
    groups: list[list[int]] = []
    for p in parts:
        merged = [p]
        rest = []
        for g in groups:
            if any(math.gcd(p, q) > 1 for q in g):
                merged.extend(g)
            else:
                rest.append(g)
        groups = rest + [merged]
    return sorted((tuple(sorted(g, reverse=True)) for g in groups), reverse=True)


def _est_upsets(r: int, n: int) -> int:
    if r > 512:
        return 1 << 62
    return (1 << n) * (r + 1) + r * r * 2 ** (r // 8)


def _orbit_count_of_type(t: CycleType) -> int:
    """Cycle count of the canonical representative acting on its cube."""
    rep = t.canonical_permutation()
    table = point_table(rep)
    size = 1 << t.n
    seen = bytearray(size)
    count = 0
    for p in range(size):
        if seen[p]:
            continue
        count += 1
        x = p
        while not seen[x]:
            seen[x] = True
            x = table[x]
    return count


@dataclass
class _Plan:
    method: str
    estimate: int
    run: Callable[[], int]
    decomposition: list


def _build_plans(t: CycleType, n: int, threads: int) -> list[_Plan]:
    plans: list[_Plan] = []
    parts = t.parts
    moved = t.moved_parts()
    k = sum(moved)
    m = n - k
    rep = t.canonical_permutation()

    if not moved:
        if n > _mbf.MAX_DEDEKIND:
            raise OutOfScopeError(
                f"Fix(e, D_{n}) = d_{n} is out of scope (23+ digit computation)")
        est = _D_SIZE[n] * 2 if n <= 6 else _D_SIZE[6] * 16
        plans.append(_Plan("dedekind", est, lambda: _mbf.dedekind(n),
                           [{"step": "dedekind", "n": n}]))
        return plans

    sigma = CycleType(moved).canonical_permutation()
    r_sigma = _orbit_count_of_type(CycleType(moved))
    r_total = _orbit_count_of_type(t) if n <= 16 else None

    # extend: strip the m fixed variables (the primary route when m >= 1)
    if m >= 1:
        est = None
        decomp = [{"step": "strip_fixed", "support": k, "free": m}]
        if m <= 2:
            if _est_upsets(r_sigma, k) <= 20_000_000:
                fam_size = _count_upsets_cached(cycle_poset(sigma).poset)
                if fam_size <= _mbf.MAX_POSET_FAMILY:
                    est = _est_upsets(r_sigma, k) + fam_size * fam_size * m
                    decomp = decomp + [{"step": "fix_family", "size": fam_size},
                                       {"step": "matrix_sum", "m": m}]
        elif cycle_poset(sigma).poset.is_chain() and m <= 5:
            est = _D_SIZE[m + 1] * max(1, r_sigma - 2) + _D_SIZE[m] * 64
            decomp = decomp + [{"step": "chain_dual", "chain": r_sigma,
                                "target_family": f"D_{m}"}]
        else:
            est = _est_upsets(r_sigma * (1 << m), n)
            decomp = decomp + [{"step": "product_upsets",
                                "size": r_sigma * (1 << m)}]
        if est is not None:
            plans.append(_Plan("extend", est, lambda: fix_count_extend(rep, n), decomp))

    # coprime split of a full-support permutation
    blocks = _coprime_blocks(moved)
    if m == 0 and len(blocks) > 1:
        sizes = [_orbit_count_of_type(CycleType(b)) for b in blocks]
        prod_size = math.prod(sizes)
        est = _est_upsets(prod_size, n)
        plans.append(_Plan(
            "coprime", est, lambda: _run_coprime(blocks, m),
            [{"step": "coprime_split", "blocks": [list(b) for b in blocks]},
             {"step": "product_upsets", "size": prod_size}]))

    # Down*Up for all-transposition types
    if all(p <= 2 for p in parts) and any(p == 2 for p in parts) and n - 2 <= _mbf.MAX_GENERATED_VARS:
        twos = sum(1 for p in parts if p == 2)
        sub = CycleType((2,) * (twos - 1) + (1,) * (n - 2 - 2 * (twos - 1)))
        fix_size = _count_upsets_cached(cycle_poset(sub.canonical_permutation()).poset) \
            if sub.moved_parts() else _D_SIZE[n - 2]
        words = max(1, fix_size // 64 + 1)
        est = _D_SIZE[n - 2] * ((1 << (n - 2)) // 2 + 24 * words)
        plans.append(_Plan(
            "downup", est,
            lambda: fix_count_downup(rep, n, threads=threads),
            [{"step": "downup", "base": f"D_{n - 2}", "fix_family": fix_size}]))

    # raw up-set counting over the full cycle poset
    if r_total is not None and r_total <= 512:
        est = _est_upsets(r_total, n)
        plans.append(_Plan("upsets", est,
                           lambda: fix_count_upsets(rep, n),
                           [{"step": "cycle_poset", "size": r_total},
                            {"step": "count_upsets"}]))

    if n <= 5:
        est = _D_SIZE[n] * (1 << n) // 4
        plans.append(_Plan("bruteforce", est,
                           lambda: fix_count_bruteforce(rep, n),
                           [{"step": "bruteforce", "family": f"D_{n}"}]))
    return plans


def _run_coprime(blocks: list[tuple[int, ...]], m: int) -> int:
    acc = None
    for b in blocks:
        cp = cycle_poset(CycleType(b).canonical_permutation()).poset
        acc = cp if acc is None else product(acc, cp)
    if m:
        acc = product(acc, boolean_cube(m))
    return _count_upsets_cached(acc)


_PRIMARY_ORDER = {"dedekind": 0, "extend": 1, "coprime": 2, "downup": 3,
                  "upsets": 4, "bruteforce": 5}

_COUNT_CACHE: dict[tuple[int, tuple[int, ...]], tuple[int, str, list]] = {}


def fix_count(perm: Union[Permutation, str], n: Optional[int] = None, *,
              method: str = "auto", threads: int = 1,
              budget: Optional[int] = None) -> MethodReport:
    """Count fixes by the requested engine, or pick one automatically.

    Auto order: identity -> dedekind; fixed variables present -> extend;
    several coprime blocks -> coprime; all-transposition type -> downup;
    otherwise raw up-set counting (bruteforce as a last resort).  A plan
    whose estimate exceeds the budget is skipped; if an attempted plan
    hits a resource refusal the next one runs.
    """
    if isinstance(perm, str):
        perm = parse_cycles(perm, n)
    if n is None:
        n = perm.n
    perm = with_degree(perm, n)
    t = cycle_type(perm)
    budget = DEFAULT_BUDGET if budget is None else budget
    start = time.monotonic()

    if method != "auto":
        count, decomposition = _run_explicit(perm, n, method, threads)
        return MethodReport(perm.to_text(), n, t.parts, class_size(t), method,
                            count, time.monotonic() - start, decomposition)

    key = (n, t.parts)
    cached = _COUNT_CACHE.get(key)
    if cached is not None:
        count, used, decomposition = cached
        return MethodReport(perm.to_text(), n, t.parts, class_size(t), used,
                            count, time.monotonic() - start, decomposition, cached=True)

    plans = _build_plans(t, n, threads)
    plans.sort(key=lambda p: (_PRIMARY_ORDER[p.method], p.estimate))
    feasible = [p for p in plans if p.estimate <= budget]
    if not feasible:
        cheapest = min(plans, key=lambda p: p.estimate, default=None)
        if cheapest is None:
            raise OutOfScopeError(f"no engine applies to {perm.to_text()} on D_{n}")
        raise ResourceLimitError(
            f"no engine fits budget {budget} for {perm.to_text()} on D_{n}; "
            f"cheapest is {cheapest.method} at ~{cheapest.estimate} work units")
    failures = []
    for plan in feasible:
        try:
            count = plan.run()
        except ResourceLimitError as exc:
            failures.append(f"{plan.method}: {exc}")
            continue
        decomposition = plan.decomposition
        if failures:
            decomposition = [{"step": "fallback", "skipped": failures}] + decomposition
        _COUNT_CACHE[key] = (count, plan.method, decomposition)
        return MethodReport(perm.to_text(), n, t.parts, class_size(t), plan.method,
                            count, time.monotonic() - start, decomposition)
    raise ResourceLimitError(
        f"every applicable engine hit a resource limit for {perm.to_text()} on D_{n}: "
        + "; ".join(failures))


def _run_explicit(perm: Permutation, n: int, method: str, threads: int):
    if method == "bruteforce":
        return fix_count_bruteforce(perm, n), [{"step": "bruteforce"}]
    if method == "upsets":
        cp = cycle_poset(perm)
        return _count_upsets_cached(cp.poset), [{"step": "cycle_poset", "size": cp.size},
                                                {"step": "count_upsets"}]
    if method == "generate":
        fs = fix_generate(perm, n)
        return len(fs), [{"step": "generate", "size": len(fs)}]
    if method == "extend":
        return fix_count_extend(perm, n), [{"step": "extend"}]
    if method == "coprime":
        moved = cycle_type(perm).moved_parts()
        blocks = _coprime_blocks(moved)
        if len(blocks) < 2:
            raise ValueError("no coprime split exists for this cycle type")
        return _run_coprime(blocks, n - sum(moved)), [
            {"step": "coprime_split", "blocks": [list(b) for b in blocks]}]
    if method == "downup":
        return fix_count_downup(perm, n, threads=threads), [{"step": "downup"}]
    if method == "dedekind":
        if not perm.is_identity():
            raise ValueError("dedekind route applies to the identity only")
        return _mbf.dedekind(n), [{"step": "dedekind", "n": n}]
    raise ValueError(f"unknown method {method!r}")
