"""Explicit extremal constructions: set pairs, intersecting families, parity
covers built pattern by pattern, and the reductions down to set pairs.

Every constructor emits an object that passes its matching verifier; the test
suite enforces this over the whole parameter envelope.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations
from math import comb
from typing import Iterator, Sequence

from .covers import GpCover, KPartiteProduct, Mod2Cover, tuple_to_cover
from .ranks import binomial_mod_p
from .setsystems import SetFamily, SubsetBits, TupleSystem, verify_bollobas_tuple


def stirling2(k: int, t: int) -> int:
    """Number of partitions of a k-set into t nonempty blocks."""
    if k < 0 or t < 0:
        raise ValueError("arguments must be nonnegative")
    if t > k:
        return 0
    if k == 0:
        return 1
    # S(k,t) = t*S(k-1,t) + S(k-1,t-1)
    prev = [1] + [0] * t
    for row in range(1, k + 1):
        cur = [0] * (t + 1)
        for j in range(1, min(row, t) + 1):
            cur[j] = j * prev[j] + prev[j - 1]
        prev = cur
    return prev[t]


def falling_factorial(n: int, r: int) -> int:
    """(n)_r = n (n-1) ... (n-r+1)."""
    if n < 0 or r < 0:
        raise ValueError("arguments must be nonnegative")
    out = 1
    for i in range(r):
        out *= n - i
    return out


@dataclass(frozen=True)
class PatternPartition:
    """Set partition of the coordinate set [k]; blocks sorted by minimum."""

    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        seen: set[int] = set()
        for b in self.blocks:
            if not b:
                raise ValueError("blocks must be nonempty")
            if seen & set(b):
                raise ValueError("blocks must be disjoint")
            seen |= set(b)
        if seen != set(range(1, len(seen) + 1)):
            raise ValueError("blocks must partition an initial segment [k]")

    @property
    def k(self) -> int:
        return sum(len(b) for b in self.blocks)

    @property
    def block_count(self) -> int:
        return len(self.blocks)

    @classmethod
    def from_index_tuple(cls, idx: Sequence[int]) -> "PatternPartition":
        """Coincidence pattern of an index tuple: coordinates with equal values."""
        groups: dict[int, list[int]] = {}
        for pos, v in enumerate(idx, start=1):
            groups.setdefault(v, []).append(pos)
        blocks = sorted((tuple(g) for g in groups.values()), key=lambda b: b[0])
        return cls(tuple(blocks))


def set_partitions(k: int) -> Iterator[PatternPartition]:
    """All set partitions of [k], in restricted-growth-string order."""
    if k == 0:
        yield PatternPartition(())
        return

    def rec(pos: int, rgs: list[int], maxblock: int) -> Iterator[list[int]]:
        if pos == k:
            yield rgs[:]
            return
        for b in range(maxblock + 2):
            rgs.append(b)
            yield from rec(pos + 1, rgs, max(maxblock, b))
            rgs.pop()

    for rgs in rec(1, [0], 0):
        nblocks = max(rgs) + 1
        blocks: list[list[int]] = [[] for _ in range(nblocks)]
        for pos, b in enumerate(rgs, start=1):
            blocks[b].append(pos)
        yield PatternPartition(tuple(tuple(b) for b in blocks))


def build_b22_pair(n: int) -> TupleSystem:
    """The singleton/complement pair of size n+1 over an even ground [n].

    A_i = {i}, B_i = [n] \\ {i} for i <= n, and A_{n+1} = B_{n+1} = [n].
    The complement and full-set parities need n even.
    """
    if n < 2 or n % 2 != 0:
        raise ValueError("ground size must be even and at least 2")
    full = SubsetBits.full(n)
    a_sets = [SubsetBits.from_elements(n, [i]) for i in range(1, n + 1)] + [full]
    b_sets = [SubsetBits(n, full.bits ^ (1 << (i - 1))) for i in range(1, n + 1)] + [full]
    return TupleSystem(2, 2, n + 1, n, (tuple(a_sets), tuple(b_sets)))


@dataclass(frozen=True)
class Admissibility:
    ok: bool
    failures: tuple[tuple[int, int, int], ...]  # (d, top, bottom) with C(top, bottom) even

    def __bool__(self) -> bool:
        return self.ok


def admissible_n(t: int, n: int) -> Admissibility:
    """Whether all d-wise intersection sizes C(n-d, t-1-d), 1 <= d <= t-1, are odd."""
    if t < 2:
        raise ValueError("t must be at least 2")
    failures = []
    for d in range(1, t):
        top, bottom = n - d, t - 1 - d
        if top < 0 or binomial_mod_p(top, bottom, 2) == 0:
            failures.append((d, top, bottom))
    return Admissibility(not failures, tuple(failures))


def _subsets_colex(n: int, k: int) -> list[int]:
    """Bitmasks of the k-subsets of [n] in colexicographic order."""
    masks = [sum(1 << (e - 1) for e in c) for c in combinations(range(1, n + 1), k)]
    return sorted(masks)


def build_kt_oddtown_family(t: int, n: int) -> SetFamily:
    """n sets over the (t-1)-subsets of [n]: the i-th collects the subsets containing i.

    d-wise intersections have size C(n-d, t-1-d) for d <= t-1 and 0 for d >= t,
    so for admissible n the family follows the (k,t) variant for every k >= t.
    """
    adm = admissible_n(t, n)
    if not adm.ok:
        detail = ", ".join(f"C({top},{bot}) even (d={d})" for d, top, bot in adm.failures)
        raise ValueError(f"inadmissible n={n} for t={t}: {detail}")
    ground = comb(n, t - 1)
    subsets = _subsets_colex(n, t - 1)
    sets = []
    for i in range(1, n + 1):
        bits = 0
        for pos, mask in enumerate(subsets):
            if (mask >> (i - 1)) & 1:
                bits |= 1 << pos
        sets.append(SubsetBits(ground, bits))
    return SetFamily(ground, tuple(sets))


def _pattern_products(pattern: PatternPartition, n: int) -> Iterator[KPartiteProduct]:
    """Exact-once cover of the cells whose coincidence pattern equals ``pattern``.

    If the pattern has a singleton block, that block rides free over the values
    not pinned elsewhere and the other blocks are pinned to distinct values
    (cost (n)_{r-1}); otherwise all blocks are pinned (cost (n)_r).  Freeing a
    block that spans two or more coordinates would also cover refinements of
    the pattern, which is why only singleton blocks may be free.
    """
    k = pattern.k
    blocks = pattern.blocks
    singles = [b for b in blocks if len(b) == 1]
    free_block = singles[0] if singles else None
    pinned = [b for b in blocks if b is not free_block]
    for values in permutations(range(1, n + 1), len(pinned)):
        by_coord: dict[int, SubsetBits] = {}
        for block, v in zip(pinned, values):
            for coord in block:
                by_coord[coord] = SubsetBits.from_elements(n, [v])
        if free_block is not None:
            rest = SubsetBits(n, SubsetBits.full(n).bits ^ sum(1 << (v - 1) for v in values))
            if rest.bits == 0:
                continue
            by_coord[free_block[0]] = rest
        yield KPartiteProduct(tuple(by_coord[c] for c in range(1, k + 1)))


def build_partition_cover(k: int, t: int, n: int) -> Mod2Cover:
    """Parity cover of the >= t distinct target from per-pattern exact covers.

    Covers every coincidence pattern with fewer than t blocks exactly once and
    adds the full product [n]^k on top: non-edges end up covered twice, edges
    once.  Degenerates gracefully for n < t: patterns needing more than n
    distinct values have no cells and contribute no products.
    """
    if not (2 <= t <= k):
        raise ValueError("need 2 <= t <= k")
    if n < 1:
        raise ValueError("need n >= 1")
    products: list[KPartiteProduct] = []
    for pattern in set_partitions(k):
        if pattern.block_count <= t - 1:
            products.extend(_pattern_products(pattern, n))
    full = SubsetBits.full(n)
    products.append(KPartiteProduct(tuple(full for _ in range(k))))
    return Mod2Cover(k, t, n, tuple(products))


def build_cover_t2(k: int, n: int) -> Mod2Cover:
    """Diagonal singletons plus the full product: size n+1 for the t=2 target."""
    if k < 2:
        raise ValueError("k must be at least 2")
    if n < 1:
        raise ValueError("n must be at least 1")
    products = [
        KPartiteProduct(tuple(SubsetBits.from_elements(n, [i]) for _ in range(k)))
        for i in range(1, n + 1)
    ]
    full = SubsetBits.full(n)
    products.append(KPartiteProduct(tuple(full for _ in range(k))))
    return Mod2Cover(k, 2, n, tuple(products))


def build_cover_33(n: int) -> Mod2Cover:
    """Size 3n+1 cover of the all-distinct triple target.

    For each i: {i} x {i} x [n], {i} x [n] x {i}, [n] x {i} x {i}; plus [n]^3.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    full = SubsetBits.full(n)
    products = []
    for i in range(1, n + 1):
        s = SubsetBits.from_elements(n, [i])
        products.append(KPartiteProduct((s, s, full)))
        products.append(KPartiteProduct((s, full, s)))
        products.append(KPartiteProduct((full, s, s)))
    products.append(KPartiteProduct((full, full, full)))
    return Mod2Cover(3, 3, n, tuple(products))


def build_cover_43(n: int) -> Mod2Cover:
    """Cover of the >= 3 distinct target on 4 coordinates, size 3n^2 + 2n + 1.

    The diagonal-plus-full t=2 cover leaves exactly the two-block patterns at
    the wrong parity; each such pattern is repaired by its exact-once cover.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    base = build_cover_t2(4, n)
    products = list(base.products)
    for pattern in set_partitions(4):
        if pattern.block_count == 2:
            products.extend(_pattern_products(pattern, n))
    return Mod2Cover(4, 3, n, tuple(products))


def build_cover_22(n: int) -> Mod2Cover:
    """Best constructive pair cover: n-1 products for odd n, n for even n.

    Odd n: the size-n singleton/complement pair over the even ground [n-1],
    pushed through the tuple-to-cover correspondence.  Even n: the plain
    singleton/complement pair of size n does it directly.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if n == 1:
        return Mod2Cover(2, 2, 1, ())  # lone cell is a non-edge: cover nothing
    if n % 2 == 1:
        return tuple_to_cover(build_b22_pair(n - 1))
    full = SubsetBits.full(n)
    products = []
    for i in range(1, n + 1):
        a = SubsetBits.from_elements(n, [i])
        b = SubsetBits(n, full.bits ^ a.bits)
        products.append(KPartiteProduct((a, b)))
    return Mod2Cover(2, 2, n, tuple(products))


def trivial_gp_cover(n: int, k: int) -> GpCover:
    """All C(n,k) products of k distinct singletons; an exact-once cover."""
    if not (1 <= k <= n):
        raise ValueError("need 1 <= k <= n")
    products = []
    for subset in combinations(range(1, n + 1), k):
        products.append(
            KPartiteProduct(tuple(SubsetBits.from_elements(n, [e]) for e in subset))
        )
    return GpCover(k, n, tuple(products))


def _intersect_all(sets: Sequence[SubsetBits]) -> SubsetBits:
    acc = SubsetBits.full(sets[0].ground_size)
    for s in sets:
        acc = acc & s
    return acc


def reduce_tuple_to_pair(system: TupleSystem, validate: bool = True) -> TupleSystem:
    """Collapse a valid (k,t)-tuple to a set pair witnessing the size bound.

    For 2t-2 <= k the pair is indexed by (t-1)-subsets I of [m]: the A side
    intersects families 1..t-1 along I, the B side families t..2t-2 along I;
    families beyond 2t-2 are absorbed into the B side at the smallest index of
    I, which keeps every pair intersection a full k-wise intersection.

    For 2t-2 > k, alpha = 2t-k-2 leading families are pinned at the fixed
    indices 1..alpha and the remaining 2(k-t+1) families are split evenly
    between the two sides, indexed by (k-t+1)-subsets of [alpha+1, m].
    """
    if validate:
        report = verify_bollobas_tuple(system)
        if not report.valid:
            raise ValueError("input tuple is not valid")
    k, t, m, n = system.k, system.t, system.m, system.ground_size
    fams = system.families
    a_side: list[SubsetBits] = []
    b_side: list[SubsetBits] = []
    if 2 * t - 2 <= k:
        for idx in combinations(range(m), t - 1):
            a_side.append(_intersect_all([fams[s][idx[s]] for s in range(t - 1)]))
            b_sets = [fams[t - 1 + s][idx[s]] for s in range(t - 1)]
            b_sets += [fams[j][idx[0]] for j in range(2 * t - 2, k)]
            b_side.append(_intersect_all(b_sets))
    else:
        alpha = 2 * t - k - 2
        r = k - t + 1
        if m <= alpha:
            raise ValueError(f"need m > {alpha} to pin the leading families")
        pinned = [fams[j][j] for j in range(alpha)]
        for idx in combinations(range(alpha, m), r):
            a_sets = pinned + [fams[alpha + s][idx[s]] for s in range(r)]
            a_side.append(_intersect_all(a_sets))
            b_side.append(_intersect_all([fams[t - 1 + s][idx[s]] for s in range(r)]))
    if not a_side:
        raise ValueError("reduction produced no index set; m is too small")
    return TupleSystem(2, 2, len(a_side), n, (tuple(a_side), tuple(b_side)))


def reduce_triple_b33(system: TupleSystem, anchor: int = 1, validate: bool = True) -> TupleSystem:
    """Reduce a valid all-distinct triple system to a set pair of size m-1.

    F_1 = {A_{1,a} ∩ A_{2,i}} and F_2 = {A_{1,a} ∩ A_{3,i}} over i != a; the
    anchor a defaults to the first index but any index works.
    """
    if system.k != 3 or system.t != 3:
        raise ValueError("requires a (3,3) tuple system")
    if system.m < 2:
        raise ValueError("need at least two indices")
    if not (1 <= anchor <= system.m):
        raise ValueError(f"anchor {anchor} out of range")
    if validate:
        report = verify_bollobas_tuple(system)
        if not report.valid:
            raise ValueError("input tuple is not valid")
    base = system.families[0][anchor - 1]
    others = [i for i in range(system.m) if i != anchor - 1]
    f1 = tuple(base & system.families[1][i] for i in others)
    f2 = tuple(base & system.families[2][i] for i in others)
    return TupleSystem(2, 2, len(others), system.ground_size, (f1, f2))
