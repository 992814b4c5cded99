"""Finite abelian groups as direct sums of cyclic prime-power groups.

A group is stored in primary canonical form: the cyclic orders are prime
powers sorted by prime, then exponent.  Isomorphic inputs therefore
canonicalize to the same component tuple, and isomorphism testing is plain
tuple equality.

Elements are residue tuples.  The group also fixes a mixed-radix indexing
(first component most significant) so that subsets can be stored densely as
integer bitmasks; see :class:`ElementSet`.
"""

from __future__ import annotations

import functools
import itertools
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import GroupSpecError

GroupElement = tuple[int, ...]

DEFAULT_MAX_ORDER = 10**6

_TERM = re.compile(r"Z(\d+)(?:\^(\d+))?")


# ---------------------------------------------------------------------------
# integer helpers
# ---------------------------------------------------------------------------

def factorize(n: int) -> dict[int, int]:
    """Prime factorization by trial division (n is desk-sized here)."""
    if n < 1:
        raise ValueError(f"cannot factor {n}")
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def is_prime(n: int) -> bool:
    return n >= 2 and factorize(n) == {n: 1}


def _prime_power(m: int) -> tuple[int, int] | None:
    f = factorize(m)
    if len(f) != 1:
        return None
    return next(iter(f.items()))


# ---------------------------------------------------------------------------
# GroupSpec
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GroupSpec:
    """A finite abelian group Z_{m_1} + ... + Z_{m_k} in primary canonical form.

    Build instances with :func:`parse_group_spec` or :meth:`from_orders`;
    the constructor itself validates that ``components`` is already
    canonical.
    """

    components: tuple[int, ...]

    def __post_init__(self) -> None:
        keys = []
        for m in self.components:
            pp = _prime_power(m) if m >= 2 else None
            if pp is None:
                raise GroupSpecError(f"component {m} is not a prime power >= 2")
            keys.append(pp)
        if keys != sorted(keys):
            raise GroupSpecError("components are not in canonical order; use GroupSpec.from_orders")

    @classmethod
    def from_orders(cls, orders: Iterable[int], max_order: int = DEFAULT_MAX_ORDER) -> "GroupSpec":
        """Canonicalize an arbitrary list of cyclic orders (CRT split)."""
        parts: list[tuple[int, int]] = []
        n = 1
        for m in orders:
            if m < 2:
                raise GroupSpecError(f"cyclic component order must be >= 2, got {m}")
            n *= m
            if n > max_order:
                raise GroupSpecError(f"group order exceeds configured maximum {max_order}")
            parts.extend(factorize(m).items())
        parts.sort()
        return cls(tuple(p**e for p, e in parts))

    # -- basic invariants ---------------------------------------------------

    @functools.cached_property
    def n(self) -> int:
        return math.prod(self.components)

    @property
    def rank(self) -> int:
        return len(self.components)

    @functools.cached_property
    def r(self) -> int:
        """Number of cyclic 2-power components."""
        return sum(1 for m in self.components if m % 2 == 0)

    @functools.cached_property
    def alpha(self) -> int:
        """Exponent of 2 in the group order."""
        return factorize(self.n).get(2, 0) if self.n > 1 else 0

    @functools.cached_property
    def exponent(self) -> int:
        return math.lcm(*self.components) if self.components else 1

    @property
    def is_cyclic(self) -> bool:
        primes = [_prime_power(m)[0] for m in self.components]
        return len(primes) == len(set(primes))

    def __str__(self) -> str:
        return format_group_spec(self)

    # -- indexing -----------------------------------------------------------

    @functools.cached_property
    def _strides(self) -> tuple[int, ...]:
        strides = []
        acc = 1
        for m in reversed(self.components):
            strides.append(acc)
            acc *= m
        return tuple(reversed(strides))

    def index(self, a: GroupElement) -> int:
        self._check(a)
        return sum(x * s for x, s in zip(a, self._strides))

    def element(self, i: int) -> GroupElement:
        if not 0 <= i < self.n:
            raise IndexError(i)
        out = []
        for m, s in zip(self.components, self._strides):
            out.append((i // s) % m)
        return tuple(out)

    def elements(self) -> Iterator[GroupElement]:
        return itertools.product(*(range(m) for m in self.components))

    def _check(self, a: Sequence[int]) -> None:
        if len(a) != len(self.components):
            raise ValueError(f"element {tuple(a)} has length {len(a)}, group rank is {self.rank}")

    def coerce(self, a: int | Sequence[int]) -> GroupElement:
        """Accept a residue tuple, or an integer when the group is cyclic (CRT)."""
        if isinstance(a, (int, np.integer)):
            if not self.is_cyclic:
                raise ValueError("integer elements are only meaningful in cyclic groups")
            return tuple(int(a) % m for m in self.components)
        self._check(a)
        return tuple(int(x) % m for x, m in zip(a, self.components))

    def to_int(self, a: GroupElement) -> int:
        """Inverse of :meth:`coerce` for cyclic groups."""
        x, mod = 0, 1
        for r_, m in zip(a, self.components):
            # solve x + mod*t = r_ (mod m)
            t = ((r_ - x) * pow(mod, -1, m)) % m
            x += mod * t
            mod *= m
        return x

    def format_element(self, a: GroupElement) -> str:
        if self.is_cyclic:
            return str(self.to_int(a))
        return "(" + ",".join(map(str, a)) + ")"

    # -- dense tables (index arithmetic) --------------------------------------

    @functools.cached_property
    def _residues(self) -> np.ndarray:
        idx = np.arange(self.n)
        strides = np.array(self._strides, dtype=np.int64)
        mods = np.array(self.components, dtype=np.int64)
        if not self.components:
            return np.zeros((1, 0), dtype=np.int64)
        return (idx[:, None] // strides[None, :]) % mods[None, :]

    def _encode(self, res: np.ndarray) -> np.ndarray:
        strides = np.array(self._strides, dtype=np.int64)
        return (res * strides).sum(axis=-1)

    @functools.cached_property
    def add_table(self) -> list[list[int]]:
        """``add_table[i][j]`` is the index of element i + element j."""
        if self.n > 4096:
            raise GroupSpecError("addition table is limited to groups of order <= 4096")
        res = self._residues
        mods = np.array(self.components, dtype=np.int64)
        s = (res[:, None, :] + res[None, :, :]) % mods
        return self._encode(s).tolist()

    @functools.cached_property
    def neg_table(self) -> list[int]:
        mods = np.array(self.components, dtype=np.int64)
        return self._encode((-self._residues) % mods).tolist()

    @functools.cached_property
    def double_table(self) -> list[int]:
        mods = np.array(self.components, dtype=np.int64)
        return self._encode((2 * self._residues) % mods).tolist()

    @functools.cached_property
    def order_table(self) -> list[int]:
        return [element_order(self, self.element(i)) for i in range(self.n)]


# ---------------------------------------------------------------------------
# parsing and printing
# ---------------------------------------------------------------------------

def parse_group_spec(text: str, max_order: int = DEFAULT_MAX_ORDER) -> GroupSpec:
    """Parse ``Z6``, ``Z2^3*Z4`` etc. into canonical form.

    The literal ``1`` denotes the trivial group.
    """
    s = text.replace(" ", "")
    if s == "1":
        return GroupSpec(())
    if not s:
        raise GroupSpecError("empty group spec")
    orders: list[int] = []
    for tok in s.split("*"):
        m = _TERM.fullmatch(tok)
        if m is None:
            raise GroupSpecError(f"malformed term {tok!r}; expected Z<int> or Z<int>^<int>")
        base = int(m.group(1))
        reps = int(m.group(2)) if m.group(2) is not None else 1
        if base < 2:
            raise GroupSpecError(f"cyclic component order must be >= 2, got {base}")
        if reps < 1:
            raise GroupSpecError(f"repeat count must be >= 1 in {tok!r}")
        if reps > max_order.bit_length() or base**reps > max_order:
            raise GroupSpecError(f"group order exceeds configured maximum {max_order}")
        orders.extend([base] * reps)
    return GroupSpec.from_orders(orders, max_order=max_order)


def format_group_spec(G: GroupSpec) -> str:
    if not G.components:
        return "1"
    terms = []
    for m, grp in itertools.groupby(G.components):
        k = len(list(grp))
        terms.append(f"Z{m}" if k == 1 else f"Z{m}^{k}")
    return "*".join(terms)


# ---------------------------------------------------------------------------
# element arithmetic
# ---------------------------------------------------------------------------

def add(G: GroupSpec, a: GroupElement, b: GroupElement) -> GroupElement:
    G._check(a)
    G._check(b)
    return tuple((x + y) % m for x, y, m in zip(a, b, G.components))


def neg(G: GroupSpec, a: GroupElement) -> GroupElement:
    G._check(a)
    return tuple((-x) % m for x, m in zip(a, G.components))


def sub(G: GroupSpec, a: GroupElement, b: GroupElement) -> GroupElement:
    return add(G, a, neg(G, b))


def zero(G: GroupSpec) -> GroupElement:
    return (0,) * G.rank


def scalar(G: GroupSpec, k: int, a: GroupElement) -> GroupElement:
    G._check(a)
    return tuple((k * x) % m for x, m in zip(a, G.components))


def element_order(G: GroupSpec, a: GroupElement) -> int:
    G._check(a)
    return math.lcm(*(m // math.gcd(m, x) for x, m in zip(a, G.components))) if a else 1


def exponent(G: GroupSpec) -> int:
    return G.exponent


# ---------------------------------------------------------------------------
# classification and mu
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GroupType:
    """Tag ``I`` (with the smallest prime p = 2 mod 3 dividing n), ``II`` or ``III`` (with exponent m)."""

    tag: str
    p: int | None = None
    m: int | None = None

    def __str__(self) -> str:
        if self.tag == "I":
            return f"I({self.p})"
        if self.tag == "III":
            return f"III({self.m})"
        return "II"


def classify(G: GroupSpec) -> GroupType:
    primes = sorted(factorize(G.n)) if G.n > 1 else []
    for p in primes:
        if p % 3 == 2:
            return GroupType("I", p=p)
    if 3 in primes:
        return GroupType("II")
    return GroupType("III", m=G.exponent)


def mu(G: GroupSpec) -> int:
    """Largest sum-free subset size, from the closed-form density times n."""
    t = classify(G)
    if t.tag == "I":
        density = Fraction(1, 3) + Fraction(1, 3 * t.p)
    elif t.tag == "II":
        density = Fraction(1, 3)
    else:
        density = Fraction(1, 3) - Fraction(1, 3 * t.m)
    value = density * G.n
    if value.denominator != 1:
        raise AssertionError(f"non-integral mu {value} for {G} of type {t}")
    return int(value)


# ---------------------------------------------------------------------------
# doubling equation and homomorphisms
# ---------------------------------------------------------------------------

def solve_double(G: GroupSpec, g: GroupElement):
    """All x with 2x = g, as an :class:`ElementSet`.

    Solved per coordinate: in Z_m with m odd there is exactly one root; with
    m even there are two roots when g_i is even and none otherwise.
    """
    from .sumfree import ElementSet

    G._check(g)
    per_coord: list[list[int]] = []
    for gi, m in zip(g, G.components):
        if m % 2:
            per_coord.append([(gi * (m + 1) // 2) % m])
        elif gi % 2:
            return ElementSet.empty(G)
        else:
            per_coord.append([gi // 2, gi // 2 + m // 2])
    return ElementSet.from_elements(G, itertools.product(*per_coord))


def homs_to_cyclic(G: GroupSpec, p: int) -> list[tuple[int, ...]]:
    """All homomorphisms G -> Z_p, each as the images of the component generators.

    A generator of Z_m may map to c in Z_p iff m*c = 0 (mod p); for prime p
    that is any c when p | m and only c = 0 otherwise.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    choices = [range(p) if m % p == 0 else (0,) for m in G.components]
    return [tuple(c) for c in itertools.product(*choices)]


def apply_hom(G: GroupSpec, phi: Sequence[int], a: GroupElement, p: int) -> int:
    return sum(c * x for c, x in zip(phi, a)) % p


# ---------------------------------------------------------------------------
# partitions and group counting
# ---------------------------------------------------------------------------

@functools.lru_cache(maxsize=None)
def _partition_table(n: int) -> tuple[int, ...]:
    table = [1] + [0] * n
    for part in range(1, n + 1):
        for total in range(part, n + 1):
            table[total] += table[total - part]
    return tuple(table)


def partition_count(n: int) -> int:
    """Exact p(n) by the coin-change recurrence over part sizes."""
    if n < 0:
        raise ValueError("n must be non-negative")
    return _partition_table(n)[n]


def hardy_ramanujan_estimate(n: int) -> float:
    if n < 1:
        raise ValueError("the asymptotic estimate is undefined for n < 1")
    return math.exp(math.pi * math.sqrt(2 * n / 3)) / (4 * n * math.sqrt(3))


def count_abelian_groups(n: int) -> int:
    if n < 1:
        raise ValueError("n must be positive")
    return math.prod(partition_count(a) for a in factorize(n).values()) if n > 1 else 1


def partitions(n: int, max_part: int | None = None) -> Iterator[tuple[int, ...]]:
    """Partitions of n as non-increasing tuples, in reverse lexicographic order."""
    if max_part is None:
        max_part = n
    if n == 0:
        yield ()
        return
    for first in range(min(n, max_part), 0, -1):
        for rest in partitions(n - first, first):
            yield (first,) + rest
