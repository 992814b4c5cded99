"""Sum-free sets in finite abelian groups.

Sets are :class:`ElementSet` bitmasks over the group's mixed-radix element
indexing.  The exhaustive routines work on indices with the group's dense
addition table and are capped; they are intended as exact oracles at desk
scale, not as scalable algorithms.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator

from .errors import CapExceeded, PreconditionError
from .group_core import (
    GroupElement,
    GroupSpec,
    apply_hom,
    classify,
    homs_to_cyclic,
)

DEFAULT_ENUM_CAP = 32
DEFAULT_COUNT_CAP = 20


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class ElementSet:
    """A subset of ``group`` stored as a bitmask over element indices."""

    group: GroupSpec
    mask: int = 0

    def __post_init__(self) -> None:
        if self.mask < 0 or self.mask >> self.group.n:
            raise ValueError("member index out of range for group")

    # -- construction ---------------------------------------------------

    @classmethod
    def empty(cls, G: GroupSpec) -> "ElementSet":
        return cls(G, 0)

    @classmethod
    def full(cls, G: GroupSpec) -> "ElementSet":
        return cls(G, (1 << G.n) - 1)

    @classmethod
    def from_indices(cls, G: GroupSpec, indices: Iterable[int]) -> "ElementSet":
        m = 0
        for i in indices:
            m |= 1 << i
        return cls(G, m)

    @classmethod
    def from_elements(cls, G: GroupSpec, elems: Iterable[int | GroupElement]) -> "ElementSet":
        return cls.from_indices(G, (G.index(G.coerce(a)) for a in elems))

    @classmethod
    def where(cls, G: GroupSpec, pred) -> "ElementSet":
        return cls.from_indices(G, (i for i, a in enumerate(G.elements()) if pred(a)))

    # -- queries --------------------------------------------------------

    def indices(self) -> list[int]:
        return list(_bits(self.mask))

    def elements(self) -> list[GroupElement]:
        return [self.group.element(i) for i in _bits(self.mask)]

    def __iter__(self) -> Iterator[GroupElement]:
        return iter(self.elements())

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __contains__(self, a) -> bool:
        return bool(self.mask >> self.group.index(self.group.coerce(a)) & 1)

    def has_index(self, i: int) -> bool:
        return bool(self.mask >> i & 1)

    def __bool__(self) -> bool:
        return self.mask != 0

    def __str__(self) -> str:
        G = self.group
        elems = self.elements()
        if G.is_cyclic:
            elems = sorted(elems, key=G.to_int)
        return "{" + ",".join(G.format_element(a) for a in elems) + "}"

    # -- set algebra ----------------------------------------------------

    def _same(self, other: "ElementSet") -> None:
        if other.group != self.group:
            raise ValueError("sets belong to different groups")

    def __or__(self, other: "ElementSet") -> "ElementSet":
        self._same(other)
        return ElementSet(self.group, self.mask | other.mask)

    def __and__(self, other: "ElementSet") -> "ElementSet":
        self._same(other)
        return ElementSet(self.group, self.mask & other.mask)

    def __sub__(self, other: "ElementSet") -> "ElementSet":
        self._same(other)
        return ElementSet(self.group, self.mask & ~other.mask)

    def issubset(self, other: "ElementSet") -> bool:
        self._same(other)
        return self.mask & ~other.mask == 0

    def complement(self) -> "ElementSet":
        return ElementSet(self.group, ((1 << self.group.n) - 1) & ~self.mask)

    def negation(self) -> "ElementSet":
        neg = self.group.neg_table
        return ElementSet.from_indices(self.group, (neg[i] for i in _bits(self.mask)))

    def symmetric(self) -> "ElementSet":
        """S together with -S."""
        return self | self.negation()

    def sumset(self, other: "ElementSet | None" = None) -> "ElementSet":
        other = self if other is None else other
        self._same(other)
        add = self.group.add_table
        m = 0
        ys = other.indices()
        for x in _bits(self.mask):
            row = add[x]
            for y in ys:
                m |= 1 << row[y]
        return ElementSet(self.group, m)

    def difference_set(self, other: "ElementSet | None" = None) -> "ElementSet":
        other = self if other is None else other
        return self.sumset(other.negation())

    def translate(self, g: int) -> "ElementSet":
        row = self.group.add_table[g]
        return ElementSet.from_indices(self.group, (row[i] for i in _bits(self.mask)))


# ---------------------------------------------------------------------------
# predicates
# ---------------------------------------------------------------------------

def is_schur_triple(G: GroupSpec, x: GroupElement, y: GroupElement, z: GroupElement) -> bool:
    """Unordered test: some two of the three sum to the third."""
    from .group_core import add

    return add(G, x, y) == z or add(G, x, z) == y or add(G, y, z) == x


def _sum_free_mask(G: GroupSpec, mask: int) -> bool:
    add = G.add_table
    members = list(_bits(mask))
    for i, x in enumerate(members):
        row = add[x]
        for y in members[i:]:
            if mask >> row[y] & 1:
                return False
    return True


def is_sum_free(G: GroupSpec, S: ElementSet) -> bool:
    return _sum_free_mask(G, S.mask)


def _blocked_mask(G: GroupSpec, mask: int) -> int:
    """Elements y outside S such that S + {y} is not sum-free, together with S itself."""
    add, neg, dbl = G.add_table, G.neg_table, G.double_table
    members = list(_bits(mask))
    out = mask | 1  # 0 is always blocked
    for a in members:
        row = add[a]
        na = neg[a]
        for b in members:
            out |= 1 << row[b]            # a + b
            out |= 1 << add[b][na]        # b - a
    for y in range(G.n):
        if mask >> dbl[y] & 1:
            out |= 1 << y                 # 2y in S
    return out


def is_maximal_sum_free(G: GroupSpec, S: ElementSet) -> bool:
    if not _sum_free_mask(G, S.mask):
        return False
    full = (1 << G.n) - 1
    if G.n == 1:
        return True
    return _blocked_mask(G, S.mask) == full


# ---------------------------------------------------------------------------
# exhaustive search
# ---------------------------------------------------------------------------

class _Extender:
    """Incremental bookkeeping for growing a sum-free set one element at a time."""

    def __init__(self, G: GroupSpec):
        self.G = G
        self.add = G.add_table
        self.neg = G.neg_table
        halves: list[int] = [0] * G.n
        for y, d in enumerate(G.double_table):
            halves[d] |= 1 << y
        self.halves = halves

    def newly_blocked(self, S: int, a: int) -> int:
        """Elements that become non-addable once ``a`` joins the sum-free set ``S``."""
        add, neg = self.add, self.neg
        row = add[a]
        na = neg[a]
        out = (1 << a) | 1 | self.halves[a] | (1 << row[a])
        m = S
        while m:
            low = m & -m
            s = low.bit_length() - 1
            m ^= low
            out |= (1 << row[s]) | (1 << add[s][na]) | (1 << row[neg[s]])
        return out


def _check_cap(G: GroupSpec, cap: int) -> None:
    if G.n > cap:
        raise CapExceeded(f"group order {G.n} exceeds enumeration cap {cap}")


def max_sumfree_bruteforce(G: GroupSpec, cap: int = DEFAULT_ENUM_CAP) -> tuple[int, ElementSet]:
    """Exact largest sum-free set by branch and bound over the element order.

    Independent of the closed-form value in :func:`~msfgroups.group_core.mu`;
    the only pruning is ``|S| + |candidates| <= best``.
    """
    _check_cap(G, cap)
    ext = _Extender(G)
    best = [0, 0]
    cand0 = ((1 << G.n) - 1) & ~1
    stack = [(0, 0, cand0)]
    while stack:
        S, size, cand = stack.pop()
        if size > best[0]:
            best[:] = [size, S]
        if size + cand.bit_count() <= best[0] or not cand:
            continue
        low = cand & -cand
        a = low.bit_length() - 1
        rest = cand ^ low
        stack.append((S, size, rest))
        S2 = S | low
        stack.append((S2, size + 1, rest & ~ext.newly_blocked(S, a)))
    return best[0], ElementSet(G, best[1])


@dataclass
class MsfReport:
    """Result of a maximal sum-free enumeration."""

    group: GroupSpec
    count: int
    witnesses: list[ElementSet] | None = None
    elapsed: float = 0.0


def iter_maximal_sumfree(G: GroupSpec, cap: int = DEFAULT_ENUM_CAP) -> Iterator[int]:
    """Yield bitmasks of all maximal sum-free sets, in backtracking order.

    Each node holds the current set ``S``, the undecided addable candidates
    and the excluded elements that are not yet blocked.  Excluding an
    element obliges a later addition to block it; a leaf is maximal iff that
    obligation set is empty.
    """
    _check_cap(G, cap)
    if G.n == 1:
        yield 0
        return
    ext = _Extender(G)
    cand0 = ((1 << G.n) - 1) & ~1
    stack = [(0, cand0, 0)]
    while stack:
        S, cand, owed = stack.pop()
        if not cand:
            if not owed:
                yield S
            continue
        low = cand & -cand
        a = low.bit_length() - 1
        rest = cand ^ low
        # exclude first on the stack so inclusion is explored first
        stack.append((S, rest, owed | low))
        blocked = ext.newly_blocked(S, a)
        stack.append((S | low, rest & ~blocked, owed & ~blocked))


def enumerate_maximal_sumfree(
    G: GroupSpec, want_witnesses: bool = False, cap: int = DEFAULT_ENUM_CAP
) -> MsfReport:
    t0 = time.perf_counter()
    count = 0
    witnesses: list[ElementSet] | None = [] if want_witnesses else None
    for S in iter_maximal_sumfree(G, cap=cap):
        count += 1
        if witnesses is not None:
            witnesses.append(ElementSet(G, S))
    if witnesses is not None:
        witnesses.sort(key=lambda e: sorted(e.indices()))
    return MsfReport(G, count, witnesses, time.perf_counter() - t0)


def count_sumfree(G: GroupSpec, cap: int = DEFAULT_COUNT_CAP) -> int:
    """Number of sum-free subsets, the empty set included."""
    _check_cap(G, cap)
    ext = _Extender(G)
    total = 0
    stack = [(0, ((1 << G.n) - 1) & ~1)]
    while stack:
        S, cand = stack.pop()
        if not cand:
            total += 1
            continue
        low = cand & -cand
        a = low.bit_length() - 1
        rest = cand ^ low
        stack.append((S, rest))
        stack.append((S | low, rest & ~ext.newly_blocked(S, a)))
    return total


def greedy_extend(G: GroupSpec, S: ElementSet) -> ElementSet:
    """Extend a sum-free set to a maximal one, adding elements in index order."""
    if not is_sum_free(G, S):
        raise PreconditionError("set is not sum-free")
    ext = _Extender(G)
    mask = S.mask
    blocked = _blocked_mask(G, mask)
    for a in range(G.n):
        if not blocked >> a & 1:
            blocked |= ext.newly_blocked(mask, a)
            mask |= 1 << a
    return ElementSet(G, mask)


# ---------------------------------------------------------------------------
# stability
# ---------------------------------------------------------------------------

def stability_threshold(G: GroupSpec) -> Fraction:
    t = classify(G)
    if t.tag != "I":
        raise PreconditionError(f"{G} is type {t}, not type I")
    return (Fraction(1, 3) + Fraction(1, 3 * (t.p + 1))) * G.n


def middle_preimage(G: GroupSpec, phi: tuple[int, ...], p: int) -> ElementSet:
    """Elements mapped by ``phi`` into the middle interval {k+1, ..., 2k+1} of Z_p, p = 3k+2."""
    k = (p - 2) // 3
    return ElementSet.where(G, lambda a: k + 1 <= apply_hom(G, phi, a, p) <= 2 * k + 1)


def stability_cover(G: GroupSpec, A: ElementSet) -> tuple[int, ...] | None:
    """Find a homomorphism onto Z_p whose middle-interval preimage contains A.

    Requires G of type I(p), A sum-free and strictly larger than
    (1/3 + 1/(3(p+1))) n.  Returns ``None`` only if no homomorphism works,
    which would contradict the structure theorem for such sets.
    """
    t = classify(G)
    if t.tag != "I":
        raise PreconditionError(f"{G} is type {t}, not type I")
    if not is_sum_free(G, A):
        raise PreconditionError("A is not sum-free")
    if len(A) <= stability_threshold(G):
        raise PreconditionError(f"|A| = {len(A)} does not exceed the threshold {stability_threshold(G)}")
    p = t.p
    for phi in homs_to_cyclic(G, p):
        if A.issubset(middle_preimage(G, phi, p)):
            return phi
    return None
