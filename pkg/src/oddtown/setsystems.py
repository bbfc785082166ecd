"""Set families over [n], tuple systems, and the parity verification predicates.

All verifiers are exhaustive and report violation witnesses as 1-based index
tuples together with the observed size/parity and the expected condition.
Duplicate sets inside a family are legal; everything is checked by index.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Iterable, Optional, Sequence

from . import gf2

DEFAULT_VIOLATION_CAP = 16


@dataclass(frozen=True)
class SubsetBits:
    """Subset of {1, ..., ground_size} as a bitmask (element e <-> bit e-1)."""

    ground_size: int
    bits: int

    def __post_init__(self) -> None:
        if self.ground_size < 0:
            raise ValueError("ground size must be nonnegative")
        if self.bits < 0 or self.bits >> self.ground_size:
            raise ValueError("membership bits extend beyond the ground set")

    @classmethod
    def from_elements(cls, ground_size: int, elements: Iterable[int]) -> "SubsetBits":
        bits = 0
        for e in elements:
            if not (1 <= e <= ground_size):
                raise ValueError(f"element {e} outside [1, {ground_size}]")
            bits |= 1 << (e - 1)
        return cls(ground_size, bits)

    @classmethod
    def full(cls, ground_size: int) -> "SubsetBits":
        return cls(ground_size, (1 << ground_size) - 1)

    def elements(self) -> tuple[int, ...]:
        return tuple(e for e in range(1, self.ground_size + 1) if (self.bits >> (e - 1)) & 1)

    @property
    def size(self) -> int:
        return self.bits.bit_count()

    @property
    def parity(self) -> int:
        return self.size & 1

    def __contains__(self, element: int) -> bool:
        return 1 <= element <= self.ground_size and bool((self.bits >> (element - 1)) & 1)

    def __and__(self, other: "SubsetBits") -> "SubsetBits":
        if self.ground_size != other.ground_size:
            raise ValueError("ground sizes differ")
        return SubsetBits(self.ground_size, self.bits & other.bits)

    def restricted(self, new_ground: int) -> "SubsetBits":
        """Intersection with [new_ground], re-typed over the smaller ground."""
        if new_ground > self.ground_size:
            raise ValueError("can only restrict to a smaller ground")
        return SubsetBits(new_ground, self.bits & ((1 << new_ground) - 1))

    def with_extra_element(self) -> "SubsetBits":
        """The same set with a fresh ground element n+1 appended to it."""
        return SubsetBits(self.ground_size + 1, self.bits | (1 << self.ground_size))


@dataclass(frozen=True)
class SetFamily:
    """Ordered, index-addressed family of subsets of a common ground set."""

    ground_size: int
    sets: tuple[SubsetBits, ...]

    def __post_init__(self) -> None:
        for i, s in enumerate(self.sets):
            if s.ground_size != self.ground_size:
                raise ValueError(f"set {i + 1} has ground size {s.ground_size}, expected {self.ground_size}")

    @classmethod
    def from_lists(cls, ground_size: int, sets: Iterable[Iterable[int]]) -> "SetFamily":
        return cls(ground_size, tuple(SubsetBits.from_elements(ground_size, s) for s in sets))

    def __len__(self) -> int:
        return len(self.sets)

    def __getitem__(self, i: int) -> SubsetBits:
        return self.sets[i]

    def __iter__(self):
        return iter(self.sets)


@dataclass(frozen=True)
class TupleSystem:
    """k ordered families of m subsets each, a candidate (k,t)-tuple."""

    k: int
    t: int
    m: int
    ground_size: int
    families: tuple[tuple[SubsetBits, ...], ...]

    def __post_init__(self) -> None:
        if self.k < 2:
            raise ValueError("k must be at least 2")
        if not (2 <= self.t <= self.k):
            raise ValueError("t must satisfy 2 <= t <= k")
        if len(self.families) != self.k:
            raise ValueError(f"expected {self.k} families, got {len(self.families)}")
        for j, fam in enumerate(self.families):
            if len(fam) != self.m:
                raise ValueError(f"family {j + 1} has {len(fam)} sets, expected {self.m}")
            for s in fam:
                if s.ground_size != self.ground_size:
                    raise ValueError("all subsets must share the tuple's ground size")

    @classmethod
    def diagonal(cls, family: SetFamily, k: int, t: int) -> "TupleSystem":
        """The tuple with every one of the k families equal to ``family``."""
        fam = tuple(family.sets)
        return cls(k, t, len(fam), family.ground_size, tuple(fam for _ in range(k)))

    def family(self, j: int) -> tuple[SubsetBits, ...]:
        return self.families[j - 1]


@dataclass(frozen=True)
class Violation:
    indices: tuple[int, ...]
    observed: int
    expected: str

    def to_dict(self) -> dict:
        return {"indices": list(self.indices), "observed": self.observed, "expected": self.expected}


@dataclass(frozen=True)
class VerifyReport:
    valid: bool
    violations: tuple[Violation, ...] = field(default_factory=tuple)
    truncated: bool = False

    def __bool__(self) -> bool:
        return self.valid

    def to_dict(self) -> dict:
        return {
            "valid": self.valid,
            "violations": [v.to_dict() for v in self.violations],
            "truncated": self.truncated,
        }


class _Collector:
    """Gathers violations in scan order (lexicographic) up to a cap."""

    def __init__(self, cap: int):
        self.cap = cap
        self.items: list[Violation] = []
        self.truncated = False

    def add(self, indices: tuple[int, ...], observed: int, expected: str) -> bool:
        """Record one violation; returns False once the cap is hit."""
        self.items.append(Violation(indices, observed, expected))
        if len(self.items) >= self.cap:
            self.truncated = True
            return False
        return True

    def report(self) -> VerifyReport:
        return VerifyReport(not self.items, tuple(self.items), self.truncated)


def intersection_parity(sets: Sequence[SubsetBits]) -> int:
    """Parity of the size of the intersection of a nonempty list of subsets."""
    if not sets:
        raise ValueError("cannot intersect an empty list of sets")
    n = sets[0].ground_size
    acc = (1 << n) - 1
    for s in sets:
        if s.ground_size != n:
            raise ValueError("ground sizes differ")
        acc &= s.bits
    return acc.bit_count() & 1


def verify_oddtown(family: SetFamily, max_violations: int = DEFAULT_VIOLATION_CAP) -> VerifyReport:
    """Every set odd, every pairwise intersection of distinct indices even."""
    col = _Collector(max_violations)
    for i, s in enumerate(family.sets):
        if s.size % 2 == 0:
            if not col.add((i + 1,), s.size, "odd size"):
                return col.report()
    for i, j in combinations(range(len(family.sets)), 2):
        inter = family.sets[i].bits & family.sets[j].bits
        if inter.bit_count() % 2 == 1:
            if not col.add((i + 1, j + 1), inter.bit_count(), "even intersection"):
                return col.report()
    return col.report()


def verify_skew_oddtown(
    a: SetFamily,
    b: SetFamily,
    strict_symmetric: bool = False,
    max_violations: int = DEFAULT_VIOLATION_CAP,
) -> VerifyReport:
    """|A_i ∩ B_i| odd for all i; |A_i ∩ B_j| even for i < j.

    Only the upper-triangular condition is checked by default; pass
    ``strict_symmetric=True`` to also require even parities below the diagonal.
    """
    if len(a) != len(b):
        raise ValueError(f"family lengths differ: {len(a)} vs {len(b)}")
    if a.ground_size != b.ground_size:
        raise ValueError("families live on different ground sets")
    col = _Collector(max_violations)
    m = len(a)
    for i in range(m):
        for j in range(m):
            if i > j and not strict_symmetric:
                continue
            size = (a.sets[i].bits & b.sets[j].bits).bit_count()
            if i == j and size % 2 == 0:
                if not col.add((i + 1, j + 1), size, "odd intersection"):
                    return col.report()
            elif i != j and size % 2 == 1:
                if not col.add((i + 1, j + 1), size, "even intersection"):
                    return col.report()
    return col.report()


def verify_kt_oddtown(
    family: SetFamily, k: int, t: int, max_violations: int = DEFAULT_VIOLATION_CAP
) -> VerifyReport:
    """d-wise intersections odd for d < t and even for t <= d <= k."""
    if not (2 <= t <= k):
        raise ValueError("need 2 <= t <= k")
    if len(family) < 1:
        raise ValueError("family must be nonempty")
    col = _Collector(max_violations)
    m = len(family)
    for d in range(1, min(k, m) + 1):
        want_odd = d < t
        for idx in combinations(range(m), d):
            acc = family.sets[idx[0]].bits
            for i in idx[1:]:
                acc &= family.sets[i].bits
            size = acc.bit_count()
            if (size % 2 == 1) != want_odd:
                ok = col.add(tuple(i + 1 for i in idx), size, "odd intersection" if want_odd else "even intersection")
                if not ok:
                    return col.report()
    return col.report()


def verify_bollobas_tuple(
    system: TupleSystem,
    complemented: bool = False,
    max_violations: int = DEFAULT_VIOLATION_CAP,
) -> VerifyReport:
    """Cross-intersection parity check over all m^k index tuples.

    Valid iff the k-wise intersection at (i_1, ..., i_k) is even exactly when
    fewer than t of the indices are distinct.  ``complemented=True`` checks the
    opposite parity convention (odd exactly when fewer than t are distinct).
    """
    col = _Collector(max_violations)
    full = (1 << system.ground_size) - 1
    for idx in product(range(system.m), repeat=system.k):
        acc = full
        for j in range(system.k):
            acc &= system.families[j][idx[j]].bits
        parity = acc.bit_count() & 1
        want_even = len(set(idx)) < system.t
        if complemented:
            want_even = not want_even
        if (parity == 0) != want_even:
            ok = col.add(
                tuple(i + 1 for i in idx),
                parity,
                "even intersection" if want_even else "odd intersection",
            )
            if not ok:
                return col.report()
    return col.report()


@dataclass(frozen=True)
class OddtownCertificate:
    independent: bool
    dependency: Optional[tuple[int, ...]]  # 1-based set indices, if dependent


def oddtown_certificate(family: SetFamily) -> OddtownCertificate:
    """Independence witness for a family that passes the oddtown check.

    A valid oddtown family always has independent characteristic vectors; a
    returned dependency therefore signals an internal inconsistency and is
    asserted against in the test suite.
    """
    report = verify_oddtown(family)
    if not report.valid:
        raise ValueError("family does not satisfy the oddtown conditions")
    dep = gf2.row_dependency([s.bits for s in family.sets], family.ground_size)
    if dep is None:
        return OddtownCertificate(True, None)
    return OddtownCertificate(False, tuple(i + 1 for i in dep))


def reduce_33_oddtown(family: SetFamily, anchor: int = 1) -> SetFamily:
    """Intersect the anchor set into every other set: {A_anchor ∩ A_i : i != anchor}.

    Applied to a family obeying the (3,3) variant, the output obeys the
    classical oddtown conditions.  The input is not checked (garbage in,
    garbage out); callers verify the output when they need the guarantee.
    """
    if len(family) < 2:
        raise ValueError("need at least two sets")
    if not (1 <= anchor <= len(family)):
        raise ValueError(f"anchor index {anchor} out of range")
    base = family.sets[anchor - 1]
    reduced = tuple(base & s for i, s in enumerate(family.sets) if i != anchor - 1)
    return SetFamily(family.ground_size, reduced)


def add_shared_element(system: TupleSystem) -> TupleSystem:
    """Append one fresh ground element to every set of every family.

    Flips the parity of every cross-intersection by exactly one, bridging the
    two parity conventions of ``verify_bollobas_tuple``.
    """
    fams = tuple(tuple(s.with_extra_element() for s in fam) for fam in system.families)
    return TupleSystem(system.k, system.t, system.m, system.ground_size + 1, fams)
