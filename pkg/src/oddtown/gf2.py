"""Dense linear algebra over F_2 (bit-packed) and small prime fields.

Rows of a binary matrix are Python ints, one bit per entry, so a row
operation is a single XOR.  Elimination always picks the leftmost pivot;
all ranks are reproducible bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

MAX_PRIME = 251


class InternalCheckError(RuntimeError):
    """A self-check that can only fail on an internal bug fired."""


def is_prime(p: int) -> bool:
    """Deterministic trial-division primality test."""
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def popcount(x: int) -> int:
    return x.bit_count()


@dataclass(frozen=True)
class Gf2Matrix:
    """Binary matrix, row-major, one bit per entry (bit j of data[i] = entry (i,j))."""

    rows: int
    cols: int
    data: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.rows < 0 or self.cols < 0:
            raise ValueError("matrix dimensions must be nonnegative")
        if len(self.data) != self.rows:
            raise ValueError(f"expected {self.rows} rows, got {len(self.data)}")
        bound = 1 << self.cols
        for i, row in enumerate(self.data):
            if row < 0 or row >= bound:
                raise ValueError(f"row {i} has bits beyond column {self.cols}")

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[int]]) -> "Gf2Matrix":
        packed = []
        width = None
        for row in rows:
            entries = [int(v) & 1 for v in row]
            if width is None:
                width = len(entries)
            elif len(entries) != width:
                raise ValueError("ragged rows")
            bits = 0
            for j, v in enumerate(entries):
                if v:
                    bits |= 1 << j
            packed.append(bits)
        if width is None:
            width = 0
        return cls(len(packed), width, tuple(packed))

    @classmethod
    def from_bitrows(cls, bitrows: Sequence[int], cols: int) -> "Gf2Matrix":
        return cls(len(bitrows), cols, tuple(int(r) for r in bitrows))

    @classmethod
    def identity(cls, n: int) -> "Gf2Matrix":
        return cls(n, n, tuple(1 << i for i in range(n)))

    def entry(self, i: int, j: int) -> int:
        return (self.data[i] >> j) & 1

    def row_list(self, i: int) -> list[int]:
        return [(self.data[i] >> j) & 1 for j in range(self.cols)]

    def transpose(self) -> "Gf2Matrix":
        cols = []
        for j in range(self.cols):
            bits = 0
            for i in range(self.rows):
                if (self.data[i] >> j) & 1:
                    bits |= 1 << i
            cols.append(bits)
        return Gf2Matrix(self.cols, self.rows, tuple(cols))

    def column_masks(self) -> list[int]:
        """Column j as a bitmask over row indices."""
        return list(self.transpose().data)


@dataclass(frozen=True)
class GfpMatrix:
    """Dense matrix over F_p for a small prime p, entries reduced mod p."""

    rows: int
    cols: int
    p: int
    data: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if not (2 <= self.p <= MAX_PRIME) or not is_prime(self.p):
            raise ValueError(f"modulus {self.p} is not a prime in [2, {MAX_PRIME}]")
        if self.rows < 0 or self.cols < 0:
            raise ValueError("matrix dimensions must be nonnegative")
        if len(self.data) != self.rows:
            raise ValueError(f"expected {self.rows} rows, got {len(self.data)}")
        for i, row in enumerate(self.data):
            if len(row) != self.cols:
                raise ValueError(f"row {i} has {len(row)} entries, expected {self.cols}")
            if any(v < 0 or v >= self.p for v in row):
                raise ValueError(f"row {i} has entries not reduced mod {self.p}")

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[int]], p: int) -> "GfpMatrix":
        data = tuple(tuple(int(v) % p for v in row) for row in rows)
        n_cols = len(data[0]) if data else 0
        return cls(len(data), n_cols, p, data)

    @classmethod
    def identity(cls, n: int, p: int) -> "GfpMatrix":
        return cls.from_rows([[1 if i == j else 0 for j in range(n)] for i in range(n)], p)


def _rank_bitrows(bitrows: Sequence[int], cols: int) -> int:
    work = list(bitrows)
    rank = 0
    for col in range(cols):
        mask = 1 << col
        pivot = None
        for r in range(rank, len(work)):
            if work[r] & mask:
                pivot = r
                break
        if pivot is None:
            continue
        work[rank], work[pivot] = work[pivot], work[rank]
        for r in range(rank + 1, len(work)):
            if work[r] & mask:
                work[r] ^= work[rank]
        rank += 1
        if rank == len(work):
            break
    return rank


def rank_gf2(m: Gf2Matrix) -> int:
    """Rank over F_2 by Gaussian elimination; the input is not modified."""
    return _rank_bitrows(m.data, m.cols)


def rank_gfp(m: GfpMatrix) -> int:
    """Rank over F_p by Gaussian elimination (vectorized row updates)."""
    if m.rows == 0 or m.cols == 0:
        return 0
    a = np.array(m.data, dtype=np.int64)
    p = m.p
    rank = 0
    for col in range(m.cols):
        pivots = np.nonzero(a[rank:, col])[0]
        if pivots.size == 0:
            continue
        piv = rank + int(pivots[0])
        if piv != rank:
            a[[rank, piv]] = a[[piv, rank]]
        inv = pow(int(a[rank, col]), p - 2, p)
        a[rank] = (a[rank] * inv) % p
        below = a[rank + 1 :, col]
        if below.any():
            a[rank + 1 :] = (a[rank + 1 :] - np.outer(below, a[rank])) % p
        rank += 1
        if rank == m.rows:
            break
    return rank


def gf2_from_gfp(m: GfpMatrix) -> Gf2Matrix:
    if m.p != 2:
        raise ValueError("conversion requires p = 2")
    return Gf2Matrix.from_rows(m.data)


def is_linearly_independent(vectors: Sequence) -> bool:
    """True iff the characteristic vectors of the given subsets are F_2-independent.

    Accepts any objects with ``bits`` and ``ground_size`` attributes
    (``SubsetBits``); all must share the same ground size.
    """
    if not vectors:
        return True
    n = vectors[0].ground_size
    if any(v.ground_size != n for v in vectors):
        raise ValueError("vectors must share a common ground size")
    rows = [v.bits for v in vectors]
    return _rank_bitrows(rows, n) == len(rows)


def row_dependency(bitrows: Sequence[int], cols: int) -> Optional[tuple[int, ...]]:
    """Indices of a nonzero F_2 combination of the rows summing to zero, or None.

    Elimination on rows augmented with an identity tag; the first row whose
    data part vanishes carries the dependency in its tag part.
    """
    nrows = len(bitrows)
    work = [(int(bitrows[i]), 1 << i) for i in range(nrows)]
    rank = 0
    for col in range(cols):
        mask = 1 << col
        pivot = None
        for r in range(rank, nrows):
            if work[r][0] & mask:
                pivot = r
                break
        if pivot is None:
            continue
        work[rank], work[pivot] = work[pivot], work[rank]
        prow, ptag = work[rank]
        for r in range(rank + 1, nrows):
            if work[r][0] & mask:
                work[r] = (work[r][0] ^ prow, work[r][1] ^ ptag)
        rank += 1
    for row, tag in work[rank:] if rank < nrows else []:
        if row == 0 and tag != 0:
            return tuple(i for i in range(nrows) if (tag >> i) & 1)
    return None


@dataclass(frozen=True)
class MinWeightResult:
    """Outcome of a minimum-weight parity solve.

    status is one of:
      "found"      -- minimal solution located; ``support`` lists its columns
      "exhausted"  -- consistent system, but every weight <= the budget was
                      refuted; ``lower_bound`` = budget + 1 is certified
      "infeasible" -- the system has no solution at any weight
    """

    status: str
    support: Optional[tuple[int, ...]]
    weight: Optional[int]
    lower_bound: int

    @property
    def found(self) -> bool:
        return self.status == "found"

    def as_vector(self, cols: int) -> tuple[int, ...]:
        if self.support is None:
            raise ValueError("no solution to expand")
        sel = set(self.support)
        return tuple(1 if j in sel else 0 for j in range(cols))


def _parity_vector_to_mask(b: Sequence[int]) -> int:
    mask = 0
    for i, v in enumerate(b):
        if int(v) & 1:
            mask |= 1 << i
    return mask


def _consistent(col_masks: Sequence[int], nrows: int, b_mask: int) -> bool:
    # Rank test on the row view: append b as one extra column.
    rows = []
    for r in range(nrows):
        bits = 0
        for j, cm in enumerate(col_masks):
            if (cm >> r) & 1:
                bits |= 1 << j
        if (b_mask >> r) & 1:
            bits |= 1 << len(col_masks)
        rows.append(bits)
    ncols = len(col_masks)
    base = [row & ((1 << ncols) - 1) for row in rows]
    return _rank_bitrows(rows, ncols + 1) == _rank_bitrows(base, ncols)


def _search_weight_level(
    col_masks: Sequence[int],
    b_mask: int,
    weight: int,
    first_columns: Optional[Sequence[int]] = None,
    value_index: Optional[dict[int, list[int]]] = None,
    suffix_max_pop: Optional[Sequence[int]] = None,
) -> Optional[tuple[int, ...]]:
    """First (lexicographically smallest) support of exactly ``weight`` columns
    XOR-ing to ``b_mask``, with columns explored in ascending index; None if the
    level is empty.  ``first_columns`` restricts only the smallest index used.
    """
    m = len(col_masks)
    if weight == 0:
        return () if b_mask == 0 else None
    if value_index is None:
        value_index = {}
        for j, cm in enumerate(col_masks):
            value_index.setdefault(cm, []).append(j)
    if suffix_max_pop is None:
        suffix_max_pop = [0] * (m + 1)
        for j in range(m - 1, -1, -1):
            suffix_max_pop[j] = max(suffix_max_pop[j + 1], col_masks[j].bit_count())

    firsts = range(m) if first_columns is None else sorted(first_columns)

    def lookup_one(residual: int, after: int) -> Optional[int]:
        cands = value_index.get(residual)
        if not cands:
            return None
        for j in cands:
            if j > after:
                return j
        return None

    def dfs(residual: int, last: int, remaining: int, chosen: list[int]) -> Optional[tuple[int, ...]]:
        if remaining == 1:
            j = lookup_one(residual, last)
            if j is None:
                return None
            return tuple(chosen + [j])
        for j in range(last + 1, m - remaining + 1):
            if residual.bit_count() > remaining * suffix_max_pop[j]:
                return None  # suffix_max_pop is nonincreasing: later j prune too
            got = dfs(residual ^ col_masks[j], j, remaining - 1, chosen + [j])
            if got is not None:
                return got
        return None

    for j0 in firsts:
        if j0 > m - weight:
            break
        if weight == 1:
            if col_masks[j0] == b_mask:
                return (j0,)
            continue
        got = dfs(b_mask ^ col_masks[j0], j0, weight - 1, [j0])
        if got is not None:
            return got
    return None


def min_weight_solution(
    a: Gf2Matrix,
    b: Sequence[int],
    max_weight: int,
    first_columns: Optional[Sequence[int]] = None,
) -> MinWeightResult:
    """Minimum-weight x with A x = b over F_2, searched by iterative deepening.

    Args:
        a: constraint matrix, one row per cell, one column per candidate.
        b: right-hand parity vector, length ``a.rows``.
        max_weight: largest support size to explore.
        first_columns: optional restriction of the smallest selected column
            index (used by symmetry-aware callers); the default explores all.

    Candidate columns are explored in ascending index, so the first solution
    found at the minimal weight has the lexicographically smallest support.
    Infeasibility (certified by a rank test) is reported distinctly from
    exhaustion of the weight budget.  Every returned solution is re-checked
    against the system before being reported.
    """
    if len(b) != a.rows:
        raise ValueError(f"b has length {len(b)}, expected {a.rows}")
    if max_weight < 0:
        raise ValueError("max_weight must be nonnegative")
    b_mask = _parity_vector_to_mask(b)
    col_masks = a.column_masks()
    if not _consistent(col_masks, a.rows, b_mask):
        return MinWeightResult("infeasible", None, None, 0)
    value_index: dict[int, list[int]] = {}
    for j, cm in enumerate(col_masks):
        value_index.setdefault(cm, []).append(j)
    suffix = [0] * (len(col_masks) + 1)
    for j in range(len(col_masks) - 1, -1, -1):
        suffix[j] = max(suffix[j + 1], col_masks[j].bit_count())
    for w in range(max_weight + 1):
        support = _search_weight_level(
            col_masks, b_mask, w, first_columns, value_index, suffix
        )
        if support is not None:
            acc = 0
            for j in support:
                acc ^= col_masks[j]
            if acc != b_mask:
                raise InternalCheckError("solution certificate failed recheck")
            return MinWeightResult("found", support, w, w)
    return MinWeightResult("exhausted", None, None, max_weight + 1)
