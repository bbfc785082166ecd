"""Exact minimum parity-cover search at desk scale, and the bounds table.

The search is a per-weight-level exhaustion: levels are proven empty in
ascending order (by depth-first branch and bound, or by a vectorized
meet-in-the-middle pass when the cell grid fits in 64 bits), and the first
level holding a solution yields the witness.  An algebraic presolve certifies
levels below the maximum rank of the target's coordinate unfoldings, since
each product unfolds to a rank-one matrix.  Every certificate that backs a
reported value is recorded on the outcome.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations, product
from math import comb, factorial
from typing import Optional, Sequence

import numpy as np

from . import constructions
from .covers import (
    KPartiteProduct,
    Mod2Cover,
    all_cells,
    permute_gp_cover,
    target_mask,
    verify_mod2_cover,
)
from .gf2 import Gf2Matrix, InternalCheckError, rank_gf2, _search_weight_level
from .ranks import cover_size_lower_bound
from .setsystems import SubsetBits

DEFAULT_CAP = 4096
DEFAULT_BUDGET = 8
_DFS_NODE_CAP = 4_000_000
_SYMMETRY_MAX_N = 5  # value-permutation canonicalization is skipped above this


class CapExceededError(ValueError):
    """The product catalog for the instance exceeds the configured cap."""


@dataclass(frozen=True)
class SearchInstance:
    """Catalog of candidate products and the edge-indicator target.

    Columns enumerate all k-tuples of nonempty subsets of [n], subsets in
    ascending-bitmask (colex) order per coordinate, last coordinate fastest.
    Cell r of the grid is ``cells[r]``; column masks and the target are
    bitmasks over cell positions.
    """

    k: int
    t: int
    n: int
    cells: tuple[tuple[int, ...], ...]
    column_parts: tuple[tuple[int, ...], ...]  # per column: subset bitmask per coordinate
    columns: tuple[int, ...]  # per column: covered-cell bitmask
    target: int

    @property
    def num_columns(self) -> int:
        return len(self.columns)


def build_search_instance(k: int, t: int, n: int, cap: int = DEFAULT_CAP) -> SearchInstance:
    if not (2 <= t <= k):
        raise ValueError("need 2 <= t <= k")
    if n < 0:
        raise ValueError("n must be nonnegative")
    n_subsets = (1 << n) - 1
    size = n_subsets**k
    if size > cap:
        raise CapExceededError(
            f"catalog for k={k}, n={n} has {size} products, above the cap {cap}"
        )
    cells = tuple(all_cells(n, k))
    # Bitmask over cells of "coordinate j takes a value in subset s".
    coord_subset_mask = []
    for j in range(k):
        per_subset = {}
        value_masks = [0] * (n + 1)
        for pos, idx in enumerate(cells):
            value_masks[idx[j]] |= 1 << pos
        for s in range(1, n_subsets + 1):
            acc = 0
            for v in range(1, n + 1):
                if (s >> (v - 1)) & 1:
                    acc |= value_masks[v]
            per_subset[s] = acc
        coord_subset_mask.append(per_subset)
    column_parts = []
    columns = []
    for parts in product(range(1, n_subsets + 1), repeat=k):
        acc = coord_subset_mask[0][parts[0]]
        for j in range(1, k):
            acc &= coord_subset_mask[j][parts[j]]
        column_parts.append(parts)
        columns.append(acc)
    return SearchInstance(
        k, t, n, cells, tuple(column_parts), tuple(columns), target_mask(n, k, t, cells)
    )


def _unfolding_rank_bound(k: int, n: int, cells: Sequence[tuple[int, ...]], b: int) -> int:
    if b == 0 or n == 0:
        return 0
    best = 1
    coords = range(k)
    for a in range(1, k // 2 + 1):
        for js in combinations(coords, a):
            jset = set(js)
            rest = [j for j in coords if j not in jset]
            rows = [0] * (n ** len(js))
            for pos, idx in enumerate(cells):
                if not (b >> pos) & 1:
                    continue
                ri = 0
                for j in js:
                    ri = ri * n + (idx[j] - 1)
                ci = 0
                for j in rest:
                    ci = ci * n + (idx[j] - 1)
                rows[ri] |= 1 << ci
            best = max(best, rank_gf2(Gf2Matrix(len(rows), n ** len(rest), tuple(rows))))
    return best


def flattening_rank_bound(instance: SearchInstance) -> int:
    """Largest F_2 rank of a coordinate unfolding of the target tensor.

    Every product unfolds to a rank-one matrix along any coordinate
    bipartition, so any parity cover needs at least this many products.
    """
    return _unfolding_rank_bound(instance.k, instance.n, instance.cells, instance.target)


def rank_lower_bound(k: int, t: int, n: int, max_cells: int = 65536) -> Optional[int]:
    """Unfolding rank bound straight from (k, t, n), without a column catalog;
    None when the cell grid is too large to build."""
    if n**k > max_cells:
        return None
    cells = tuple(all_cells(n, k))
    return _unfolding_rank_bound(k, n, cells, target_mask(n, k, t, cells))


def _canonical_first_columns(instance: SearchInstance) -> Optional[list[int]]:
    """Columns that are the least index of their orbit under value permutations
    (and coordinate permutations when t = k); None when the group is too large
    to be worth it (n > _SYMMETRY_MAX_N).
    """
    n, k = instance.n, instance.k
    if n > _SYMMETRY_MAX_N or n == 0:
        return None
    n_subsets = (1 << n) - 1
    tables = []
    for perm in permutations(range(n)):
        tbl = [0] * (n_subsets + 1)
        for mask in range(1, n_subsets + 1):
            im = 0
            for e in range(n):
                if (mask >> e) & 1:
                    im |= 1 << perm[e]
            tbl[mask] = im
        tables.append(tbl)
    coord_perms = list(permutations(range(k))) if instance.t == k else [tuple(range(k))]

    def col_index(masks: Sequence[int]) -> int:
        idx = 0
        for m in masks:
            idx = idx * n_subsets + (m - 1)
        return idx

    canonical = []
    for ci, masks in enumerate(instance.column_parts):
        best = ci
        for tbl in tables:
            mapped = [tbl[m] for m in masks]
            for cp in coord_perms:
                cand = col_index([mapped[j] for j in cp])
                if cand < best:
                    best = cand
                    break
            if best < ci:
                break
        if best == ci:
            canonical.append(ci)
    return canonical


def _np_membership(sorted_vals: np.ndarray, queries: np.ndarray) -> np.ndarray:
    pos = np.searchsorted(sorted_vals, queries)
    pos = np.minimum(pos, len(sorted_vals) - 1)
    return sorted_vals[pos] == queries


class _LevelTooHard(Exception):
    pass


def _exhaust_level(
    instance: SearchInstance,
    w: int,
    first_columns: Optional[Sequence[int]],
    value_index: dict[int, list[int]],
    suffix_max_pop: list[int],
) -> Optional[tuple[int, ...]]:
    """Support of weight w, or None if the level is empty.

    Small levels run the exact lexicographic DFS; larger ones fall back to a
    vectorized meet-in-the-middle pass (possible while the grid fits in 64
    bits and w <= 4).  Raises _LevelTooHard when neither route is feasible.
    Levels must be exhausted in ascending order: the vectorized paths rule out
    index collisions by appealing to the emptiness of lower levels.
    """
    m = instance.num_columns
    cols = instance.columns
    b = instance.target
    if w == 0:
        return () if b == 0 else None
    est = comb(m, min(w, m) - 1) if w <= m else 0
    if w <= m and est <= _DFS_NODE_CAP:
        return _search_weight_level(cols, b, w, first_columns, value_index, suffix_max_pop)
    if w > m:
        return None
    if len(instance.cells) > 64 or w > 5 or (w == 5 and comb(m, 3) > 8_000_000):
        raise _LevelTooHard(f"level {w} with {m} columns is out of reach")

    cols_u = np.array(cols, dtype=np.uint64)
    order = np.argsort(cols_u, kind="stable")
    sorted_u = cols_u[order]
    b_u = np.uint64(b)

    if w == 3:
        for i in range(m - 2):
            block = cols_u[i + 1 :] ^ (cols_u[i] ^ b_u)
            hits = np.nonzero(_np_membership(sorted_u, block))[0]
            for h in hits:
                j = i + 1 + int(h)
                l_val = int(cols_u[j]) ^ int(cols_u[i]) ^ b
                for l in value_index.get(l_val, []):
                    if l > j:
                        return (i, j, l)
        return None

    # w in (4, 5): pairwise sums against pairwise or triple sums shifted by b.
    total = m * (m - 1) // 2
    pair_vals = np.empty(total, dtype=np.uint64)
    pos = 0
    for i in range(m - 1):
        cnt = m - 1 - i
        pair_vals[pos : pos + cnt] = cols_u[i + 1 :] ^ cols_u[i]
        pos += cnt

    def lex_pair(val: int) -> tuple[int, int]:
        for i in range(m - 1):
            partner = val ^ cols[i]
            for j in value_index.get(partner, []):
                if j > i:
                    return (i, j)
        raise InternalCheckError("pair-sum witness vanished on re-derivation")

    def lex_triple(val: int) -> tuple[int, int, int]:
        for i in range(m - 2):
            for j in range(i + 1, m - 1):
                rest = val ^ cols[i] ^ cols[j]
                for l in value_index.get(rest, []):
                    if l > j:
                        return (i, j, l)
        raise InternalCheckError("triple-sum witness vanished on re-derivation")

    if w == 4:
        common = np.intersect1d(np.sort(pair_vals), pair_vals ^ b_u)
        del pair_vals
        if common.size == 0:
            return None
        v = int(common[0])
        i1, j1 = lex_pair(v)
        i2, j2 = lex_pair(v ^ b)
        support = tuple(sorted({i1, j1, i2, j2}))
        if len(support) != 4:
            raise InternalCheckError("pair supports collided despite refuted lower levels")
        return support

    # w == 5
    triple_vals = np.empty(comb(m, 3), dtype=np.uint64)
    pos = 0
    for i in range(m - 2):
        for j in range(i + 1, m - 1):
            cnt = m - 1 - j
            triple_vals[pos : pos + cnt] = cols_u[j + 1 :] ^ (cols_u[i] ^ cols_u[j])
            pos += cnt
    common = np.intersect1d(np.sort(triple_vals), pair_vals ^ b_u)
    del pair_vals, triple_vals
    if common.size == 0:
        return None
    v = int(common[0])
    i1, j1 = lex_pair(v ^ b)
    i2, j2, l2 = lex_triple(v)
    support = tuple(sorted({i1, j1, i2, j2, l2}))
    if len(support) != 5:
        raise InternalCheckError("pair/triple supports collided despite refuted lower levels")
    return support


@dataclass(frozen=True)
class SearchOutcome:
    """Result of a minimum-cover search with its certificates.

    ``status`` is "exact" (value and witness certified) or "interval"
    (only ``lower`` <= minimum <= ``upper`` is certified; ``upper``/``cover``
    may be absent).  ``rank_bound`` is the algebraic certificate;
    ``levels_exhausted`` is the inclusive range of weights the search itself
    proved empty (or None if none were).
    """

    k: int
    t: int
    n: int
    status: str
    value: Optional[int]
    lower: int
    upper: Optional[int]
    cover: Optional[Mod2Cover]
    rank_bound: int
    levels_exhausted: Optional[tuple[int, int]]

    @property
    def exact(self) -> bool:
        return self.status == "exact"


def _cover_from_support(instance: SearchInstance, support: Sequence[int]) -> Mod2Cover:
    products = []
    for ci in support:
        parts = tuple(
            SubsetBits(instance.n, mask) for mask in instance.column_parts[ci]
        )
        products.append(KPartiteProduct(parts))
    return Mod2Cover(instance.k, instance.t, instance.n, tuple(products))


def min_mod2_cover(
    k: int,
    t: int,
    n: int,
    budget: int = DEFAULT_BUDGET,
    cap: int = DEFAULT_CAP,
    symmetry: bool = True,
    rank_presolve: bool = True,
    incumbent: Optional[Mod2Cover] = None,
) -> SearchOutcome:
    """Exact minimum size of a parity cover of the >= t distinct target.

    Weight levels are exhausted in ascending order up to ``budget``; the rank
    presolve (when enabled) certifies all levels below the unfolding rank
    without search.  ``incumbent`` may supply a known cover: it is verified and
    used as an upper bound, and when it meets the certified lower bound the
    exact value is returned without further search.  Any returned cover is
    re-verified.  The result is deterministic for fixed arguments.
    """
    instance = build_search_instance(k, t, n, cap)
    if incumbent is not None:
        if (incumbent.k, incumbent.t, incumbent.n) != (k, t, n):
            raise ValueError("incumbent cover has mismatched parameters")
        if not verify_mod2_cover(incumbent).valid:
            raise ValueError("incumbent cover is not valid")
    if instance.target == 0:
        empty = Mod2Cover(k, t, n, ())
        return SearchOutcome(k, t, n, "exact", 0, 0, 0, empty, 0, None)

    rank_bound = flattening_rank_bound(instance) if rank_presolve else 0
    upper = len(incumbent.products) if incumbent is not None else None
    best_cover = incumbent

    start = max(1, rank_bound)
    first_columns: Optional[Sequence[int]] = None
    symmetry_ready = False
    value_index: dict[int, list[int]] = {}
    for j, cm in enumerate(instance.columns):
        value_index.setdefault(cm, []).append(j)
    suffix = [0] * (instance.num_columns + 1)
    for j in range(instance.num_columns - 1, -1, -1):
        suffix[j] = max(suffix[j + 1], instance.columns[j].bit_count())

    exhausted: Optional[tuple[int, int]] = None
    w = start
    while w <= budget and (upper is None or w < upper):
        if symmetry and not symmetry_ready:
            first_columns = _canonical_first_columns(instance)
            symmetry_ready = True
        try:
            support = _exhaust_level(instance, w, first_columns, value_index, suffix)
        except _LevelTooHard:
            break
        if support is not None:
            cover = _cover_from_support(instance, support)
            if not verify_mod2_cover(cover).valid:
                raise InternalCheckError("search witness failed cover verification")
            return SearchOutcome(
                k, t, n, "exact", w, w, w, cover, rank_bound, exhausted
            )
        exhausted = (start, w) if exhausted is None else (exhausted[0], w)
        w += 1

    lower = max(1, rank_bound, (exhausted[1] + 1) if exhausted else 1)
    if upper is not None and upper == lower:
        return SearchOutcome(
            k, t, n, "exact", lower, lower, upper, best_cover, rank_bound, exhausted
        )
    return SearchOutcome(
        k, t, n, "interval", None, lower, upper, best_cover, rank_bound, exhausted
    )


def best_constructive_cover(k: int, t: int, n: int) -> Optional[Mod2Cover]:
    """Smallest cover among the applicable explicit constructions, or None."""
    if n < t:
        return Mod2Cover(k, t, n, ())  # no cell has t distinct entries
    candidates: list[Mod2Cover] = [constructions.build_partition_cover(k, t, n)]
    if t == 2:
        candidates.append(constructions.build_cover_t2(k, n))
    if (k, t) == (2, 2):
        candidates.append(constructions.build_cover_22(n))
    if (k, t) == (3, 3):
        candidates.append(constructions.build_cover_33(n))
    if (k, t) == (4, 3):
        candidates.append(constructions.build_cover_43(n))
    if t == k and k <= n:
        candidates.append(_permuted_trivial(n, k))
    return min(candidates, key=len)


def _permuted_trivial(n: int, k: int) -> Mod2Cover:
    return permute_gp_cover(constructions.trivial_gp_cover(n, k))


@dataclass(frozen=True)
class ExactBResult:
    """Largest admissible ground size for tuples of a given index count.

    ``value`` is set when the answer is certified exactly; otherwise
    ``at_least`` is the best certified lower value and the answer is open
    upward (search budget or catalog cap ran out).
    """

    k: int
    t: int
    m: int
    value: Optional[int]
    at_least: int

    @property
    def exact(self) -> bool:
        return self.value is not None


def exact_b(
    k: int,
    t: int,
    m: int,
    budget: Optional[int] = None,
    cap: int = DEFAULT_CAP,
    rank_presolve: bool = True,
) -> ExactBResult:
    """max{n : minimum cover size of the (k,t,n) target <= m}, probed upward.

    Correct because restricting a cover to a smaller ground set keeps it
    valid, so the minimum size is monotone in n.
    """
    if m < 0:
        raise ValueError("m must be nonnegative")
    best = 0
    n = 1
    while True:
        constructive = best_constructive_cover(k, t, n)
        if constructive is not None and len(constructive) <= m:
            if not verify_mod2_cover(constructive).valid:
                raise InternalCheckError("constructive cover failed verification")
            best = n
            n += 1
            continue
        level_budget = min(m, budget) if budget is not None else m
        try:
            out = min_mod2_cover(
                k,
                t,
                n,
                budget=level_budget,
                cap=cap,
                rank_presolve=rank_presolve,
                incumbent=constructive,
            )
        except CapExceededError:
            return ExactBResult(k, t, m, None, best)
        if out.exact and out.value <= m:
            best = n
            n += 1
            continue
        if out.lower > m:
            return ExactBResult(k, t, m, best, best)
        return ExactBResult(k, t, m, None, best)


@dataclass(frozen=True)
class TableRow:
    k: int
    t: int
    n: int
    lower: int
    upper: int
    constructive: int
    exact: Optional[int]

    def fields(self) -> tuple:
        return (self.k, self.t, self.n, self.lower, self.upper, self.constructive,
                "" if self.exact is None else self.exact)


ERRATUM_22 = (
    "note: for (k,t)=(2,2) the published case split (n odd -> n, n even -> n-1) "
    "contradicts the underlying pair sizes (n even -> n+1, n odd -> n); exact "
    "search confirms the corrected pattern 2, 2, 4, 4, 6 shown in this table."
)


def _formula_lower(k: int, t: int, n: int) -> int:
    if n < t:
        return 0
    best = 1
    if t == 2:
        best = max(best, n - 1)
    if (k, t) == (3, 3):
        best = max(best, n - 2)
    if (k, t) == (4, 3) and n >= 5:
        best = max(best, -((-((n - 4) ** 2 - 2)) // 2))
    if t == k:
        if k % 2 == 0 and k <= n:
            best = max(best, cover_size_lower_bound(n, k // 2))
        if k % 2 == 1 and k >= 3 and (k - 1) <= (n - 1):
            best = max(best, cover_size_lower_bound(n - 1, (k - 1) // 2))
    return best


def _formula_upper(k: int, t: int, n: int) -> int:
    """The specific closed-form upper bounds where stated; otherwise the
    generic pattern-by-pattern sum 1 + sum over partitions with < t blocks."""
    if n < t:
        return 0
    specific = []
    if t == 2:
        specific.append(n + 1)
    if (k, t) == (3, 3):
        specific.append(3 * n + 1)
    if (k, t) == (4, 3):
        specific.append(3 * n * n + 4 * n + 1)
    if t == k and k <= n:
        specific.append(factorial(k) * comb(n, k))
    if specific:
        return min(specific)
    return 1 + sum(
        constructions.falling_factorial(
            n, pi.block_count - (1 if any(len(b) == 1 for b in pi.blocks) else 0)
        )
        for pi in constructions.set_partitions(k)
        if pi.block_count <= t - 1
    )


def bounds_table(
    k: int,
    t: int,
    n_values: Sequence[int],
    budget: int = 3,
    cap: int = DEFAULT_CAP,
    run_search: bool = True,
) -> tuple[list[TableRow], list[str]]:
    """One row per n: certified bounds, the best construction, and the exact
    minimum when the search settles it.  Raises on any bound violation.
    """
    rows = []
    notes = []
    if (k, t) == (2, 2):
        notes.append(ERRATUM_22)
    for n in n_values:
        lower = _formula_lower(k, t, n)
        rank_bound = rank_lower_bound(k, t, n)
        if rank_bound is not None:
            lower = max(lower, rank_bound)
        upper = _formula_upper(k, t, n)
        constructive_cover = best_constructive_cover(k, t, n)
        if constructive_cover is None:
            raise InternalCheckError(f"no construction applies at (k,t,n)=({k},{t},{n})")
        if not verify_mod2_cover(constructive_cover).valid:
            raise InternalCheckError("constructive cover failed verification")
        constructive = len(constructive_cover)
        exact: Optional[int] = None
        if run_search:
            try:
                out = min_mod2_cover(
                    k, t, n, budget=budget, cap=cap, incumbent=constructive_cover
                )
                lower = max(lower, out.lower)
                if out.exact:
                    exact = out.value
            except CapExceededError:
                pass
        if constructive > upper:
            raise InternalCheckError(
                f"construction of size {constructive} violates the upper bound {upper}"
            )
        if lower > constructive:
            raise InternalCheckError(
                f"certified lower bound {lower} exceeds a verified cover of size {constructive}"
            )
        if exact is not None and not (lower <= exact <= min(upper, constructive)):
            raise InternalCheckError(
                f"exact value {exact} escapes bounds [{lower}, {min(upper, constructive)}]"
            )
        if lower > upper:
            raise InternalCheckError(f"bounds crossed: {lower} > {upper}")
        rows.append(TableRow(k, t, n, lower, upper, constructive, exact))
    return rows, notes


def format_table(rows: Sequence[TableRow], notes: Sequence[str]) -> str:
    header = ("k", "t", "n", "lower", "upper", "constructive", "exact")
    table = [header] + [tuple(str(f) for f in r.fields()) for r in rows]
    widths = [max(len(row[i]) for row in table) for i in range(len(header))]
    lines = ["  ".join(cell.rjust(widths[i]) for i, cell in enumerate(row)) for row in table]
    lines.extend(notes)
    return "\n".join(lines) + "\n"


def machine_rows(rows: Sequence[TableRow], notes: Sequence[str]) -> str:
    lines = [f"# {note}" for note in notes]
    for r in rows:
        lines.append("\t".join(str(f) for f in r.fields()))
    return "\n".join(lines) + "\n"
