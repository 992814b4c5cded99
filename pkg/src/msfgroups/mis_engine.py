"""Exact maximal-independent-set counting and certified upper bounds.

Graphs may carry at most one loop per vertex.  A looped vertex can never be
in an independent set, and it is also exempt from the domination
requirement: a set is maximal iff no non-looped vertex outside it can be
added.  Consequently ``mis(G) == mis(G - looped vertices)``.

All bounds are returned as log2 values; :func:`check_bounds` compares them
against the exact count with an additive slack of ``LOG_SLACK``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .errors import CapExceeded, PreconditionError

DEFAULT_MIS_CAP = 200
LOG_SLACK = 1e-9
LOG2_3 = math.log2(3)


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class SimpleGraph:
    """Undirected graph on vertices ``0..n-1`` with neighbor bitmasks and loop flags."""

    n: int
    adj: tuple[int, ...]
    loops: int = 0

    def __post_init__(self) -> None:
        if len(self.adj) != self.n:
            raise ValueError("adjacency length does not match n")
        for v, nb in enumerate(self.adj):
            if nb >> v & 1:
                raise ValueError(f"vertex {v} lists itself; use loop flags")
            for u in _bits(nb):
                if not self.adj[u] >> v & 1:
                    raise ValueError(f"adjacency is not symmetric at ({v}, {u})")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], loops: Iterable[int] = ()) -> "SimpleGraph":
        adj = [0] * n
        lp = 0
        for u, v in edges:
            if u == v:
                lp |= 1 << u
                continue
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        for u in loops:
            lp |= 1 << u
        return cls(n, tuple(adj), lp)

    # -- basic measurements -------------------------------------------------

    def neighbors(self, v: int) -> list[int]:
        return list(_bits(self.adj[v]))

    def has_loop(self, v: int) -> bool:
        return bool(self.loops >> v & 1)

    def degree(self, v: int) -> int:
        """Number of neighbors; a loop is not counted."""
        return self.adj[v].bit_count()

    def degree_loops_twice(self, v: int) -> int:
        return self.degree(v) + 2 * self.has_loop(v)

    @property
    def num_edges(self) -> int:
        """Non-loop edges."""
        return sum(a.bit_count() for a in self.adj) // 2

    @property
    def num_loops(self) -> int:
        return self.loops.bit_count()

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in _bits(self.adj[u] >> (u + 1) << (u + 1))]

    @property
    def max_degree(self) -> int:
        return max((self.degree(v) for v in range(self.n)), default=0)

    @property
    def min_degree(self) -> int:
        return min((self.degree(v) for v in range(self.n)), default=0)

    # -- derived graphs -----------------------------------------------------

    def induced(self, vertices: Sequence[int]) -> "SimpleGraph":
        """Induced subgraph, relabelled to ``0..len(vertices)-1`` in the given order."""
        pos = {v: i for i, v in enumerate(vertices)}
        adj = []
        lp = 0
        for i, v in enumerate(vertices):
            m = 0
            for u in _bits(self.adj[v]):
                j = pos.get(u)
                if j is not None:
                    m |= 1 << j
            adj.append(m)
            if self.has_loop(v):
                lp |= 1 << i
        return SimpleGraph(len(vertices), tuple(adj), lp)

    def remove(self, vertices: Iterable[int]) -> "SimpleGraph":
        drop = set(vertices)
        return self.induced([v for v in range(self.n) if v not in drop])

    def closed_neighborhood(self, v: int) -> list[int]:
        return sorted(set(self.neighbors(v)) | {v})

    def without_looped(self) -> "SimpleGraph":
        return self.remove(_bits(self.loops))

    def triangles(self) -> list[tuple[int, int, int]]:
        out = []
        for u in range(self.n):
            hi = self.adj[u] >> (u + 1) << (u + 1)
            for v in _bits(hi):
                for w in _bits(hi & self.adj[v] >> (v + 1) << (v + 1)):
                    out.append((u, v, w))
        return out

    def is_triangle_free(self) -> bool:
        for u in range(self.n):
            for v in _bits(self.adj[u] >> (u + 1) << (u + 1)):
                if self.adj[u] & self.adj[v]:
                    return False
        return True


# ---------------------------------------------------------------------------
# exact counting
# ---------------------------------------------------------------------------

def _count(adj: Sequence[int], P: int, X: int, R: int, emit: Callable[[int], None] | None) -> int:
    # P: addable candidates; X: excluded vertices still needing a neighbor in the set.
    total = 0
    stack = [(P, X, R)]
    while stack:
        P, X, R = stack.pop()
        dead = False
        m = X
        while m:
            low = m & -m
            m ^= low
            if not adj[low.bit_length() - 1] & P:
                dead = True
                break
        if dead:
            continue
        best = -1
        piv = 0
        m = P
        while m:
            low = m & -m
            m ^= low
            d = (adj[low.bit_length() - 1] & P).bit_count()
            if d > best:
                best = d
                piv = low
        if best <= 0:
            # every remaining candidate is isolated in P, so all of them join
            total += 1
            if emit is not None:
                emit(R | P)
            continue
        nv = adj[piv.bit_length() - 1]
        stack.append((P & ~piv, X | piv, R))
        stack.append((P & ~nv & ~piv, X & ~nv, R | piv))
    return total


def enumerate_mis(
    g: SimpleGraph,
    callback: Callable[[frozenset[int]], None] | None = None,
    cap: int = DEFAULT_MIS_CAP,
) -> int:
    """Count maximal independent sets exactly.

    Branches on a vertex of maximum degree within the remaining candidates
    (lowest index on ties): either it joins the set, removing its closed
    neighborhood, or it is excluded and must later be dominated.  Branches
    where an excluded vertex has lost all candidate neighbors are cut.

    If ``callback`` is given it receives every maximal independent set, as
    a frozenset of vertices, in a deterministic order.
    """
    if g.n > cap:
        raise CapExceeded(f"graph has {g.n} vertices, MIS counting cap is {cap}")
    P = ((1 << g.n) - 1) & ~g.loops
    emit = None
    if callback is not None:
        emit = lambda mask: callback(frozenset(_bits(mask)))  # noqa: E731
    return _count(g.adj, P, 0, 0, emit)


def mis_sets(g: SimpleGraph, cap: int = DEFAULT_MIS_CAP) -> list[frozenset[int]]:
    out: list[frozenset[int]] = []
    enumerate_mis(g, out.append, cap=cap)
    return out


def brute_force_mis(g: SimpleGraph) -> int:
    """Naive oracle: test every vertex subset for independence and maximality."""
    if g.n > 20:
        raise CapExceeded("brute force MIS is limited to 20 vertices")
    count = 0
    for s in range(1 << g.n):
        if s & g.loops:
            continue
        if any(g.adj[v] & s for v in _bits(s)):
            continue
        if all(g.adj[v] & s for v in range(g.n) if not (s >> v & 1) and not (g.loops >> v & 1)):
            count += 1
    return count


# ---------------------------------------------------------------------------
# bounds (log2 domain)
# ---------------------------------------------------------------------------

def bound_moon_moser(n: int) -> float:
    if n < 0:
        raise ValueError("n must be non-negative")
    return n / 3 * LOG2_3


def bound_hujter_tuza(n: int) -> float:
    """Valid only for triangle-free graphs; the caller is responsible for checking."""
    if n < 0:
        raise ValueError("n must be non-negative")
    return n / 2


def bound_regular_dense(n: int, k_ratio: float, delta: int) -> float:
    """log2 of sum_{0<=i<=n/b} C(n,i) * 3^((k/(k+1)) n/3 + 2n/(3b)), b = sqrt(delta)."""
    if delta < 1:
        raise PreconditionError("minimum degree must be at least 1")
    if k_ratio < 1:
        raise PreconditionError("degree ratio k must be at least 1")
    b = math.sqrt(delta)
    top = math.floor(n / b + 1e-12)
    s = sum(math.comb(n, i) for i in range(min(top, n) + 1))
    return math.log2(s) + ((k_ratio / (k_ratio + 1)) * n / 3 + 2 * n / (3 * b)) * LOG2_3


def bound_almost_trifree(n: int, k: float, D: int, t: int) -> float:
    """n/2 - k/(100 D^2) + 2t, with n the order of the triangle-free remainder."""
    if k < 0:
        raise PreconditionError("edge surplus k must be non-negative")
    if D < 1:
        raise PreconditionError("degree bound D must be at least 1")
    if t < 0:
        raise PreconditionError("t must be non-negative")
    return n / 2 - k / (100 * D * D) + 2 * t


def bound_stability(n: int, k: int, max_deg: int, C: float | None = None) -> float:
    """log2(C) + (n/3 - k/(13 Delta)) log2 3; ``C`` defaults to 3^(Delta/13)."""
    if max_deg < 1:
        raise PreconditionError("maximum degree must be at least 1")
    log2_c = max_deg / 13 * LOG2_3 if C is None else math.log2(C)
    if log2_c < max_deg / 13 * LOG2_3 - LOG_SLACK:
        raise PreconditionError("C must be at least 3^(Delta/13)")
    return log2_c + (n / 3 - k / (13 * max_deg)) * LOG2_3


@dataclass
class BoundEntry:
    name: str
    applicable: bool
    value_log2: float | None = None
    params: dict = field(default_factory=dict)
    note: str = ""


@dataclass
class BoundReport:
    """Exact MIS count next to every bound that applies to the graph."""

    count: int
    entries: list[BoundEntry]
    looped_removed: int = 0

    @property
    def exact_log2(self) -> float:
        return math.log2(self.count) if self.count else float("-inf")

    def violations(self) -> list[BoundEntry]:
        return [
            e for e in self.entries
            if e.applicable and self.exact_log2 > e.value_log2 + LOG_SLACK
        ]

    @property
    def holds(self) -> bool:
        return not self.violations()

    def entry(self, name: str) -> BoundEntry:
        for e in self.entries:
            if e.name == name:
                return e
        raise KeyError(name)


def greedy_triangle_cover(g: SimpleGraph) -> list[int]:
    """Vertices whose removal leaves g triangle-free (greedy by triangle count)."""
    tris = g.triangles()
    chosen: list[int] = []
    while tris:
        counts: dict[int, int] = {}
        for t in tris:
            for v in t:
                counts[v] = counts.get(v, 0) + 1
        v = min(counts, key=lambda u: (-counts[u], u))
        chosen.append(v)
        tris = [t for t in tris if v not in t]
    return sorted(chosen)


def check_bounds(g: SimpleGraph, T: Iterable[int] | None = None, cap: int = DEFAULT_MIS_CAP) -> BoundReport:
    """Exact count plus every applicable bound.

    Looped vertices do not change the count, so the graph parameters are
    measured on the loop-free remainder.  ``T`` (vertices of ``g``) is the
    triangle-breaking set for the almost-triangle-free bound; by default a
    greedy cover is used.
    """
    count = enumerate_mis(g, cap=cap)
    looped = list(_bits(g.loops))
    keep = [v for v in range(g.n) if not g.has_loop(v)]
    h = g.induced(keep)
    n, e = h.n, h.num_edges
    dmax, dmin = h.max_degree, h.min_degree
    tri_free = h.is_triangle_free()
    entries = [BoundEntry("moon_moser", True, bound_moon_moser(n), {"n": n})]

    entries.append(
        BoundEntry("hujter_tuza", tri_free, bound_hujter_tuza(n) if tri_free else None, {"n": n},
                   "" if tri_free else "graph has triangles")
    )

    if dmin >= 1:
        k_ratio = dmax / dmin
        entries.append(BoundEntry("regular_dense", True, bound_regular_dense(n, k_ratio, dmin),
                                  {"n": n, "k": k_ratio, "delta": dmin, "b": math.sqrt(dmin)}))
    else:
        entries.append(BoundEntry("regular_dense", False, None, {"n": n, "delta": dmin}, "isolated vertex"))

    if T is None:
        t_set = greedy_triangle_cover(h)
    else:
        pos = {v: i for i, v in enumerate(keep)}
        t_set = sorted(pos[v] for v in T if v in pos)
    rest = h.remove(t_set)
    if not rest.is_triangle_free():
        raise PreconditionError("removing T does not leave a triangle-free graph")
    k_at = rest.num_edges - rest.n / 2
    D = max(dmax, 1)
    params = {"n": rest.n, "k": k_at, "D": D, "T": len(t_set)}
    if k_at >= 0:
        entries.append(BoundEntry("almost_trifree", True, bound_almost_trifree(rest.n, k_at, D, len(t_set)), params))
    else:
        entries.append(BoundEntry("almost_trifree", False, None, params, "e(G - T) < v(G - T)/2"))

    k = e - n
    if dmax >= 1:
        C = 3 ** (dmax / 13)
        entries.append(BoundEntry("stability", True, bound_stability(n, k, dmax),
                                  {"n": n, "k": k, "Delta": dmax, "C": C}))
    else:
        entries.append(BoundEntry("stability", False, None, {"n": n, "k": k, "Delta": 0}, "no edges"))

    return BoundReport(count, entries, len(looped))


# ---------------------------------------------------------------------------
# text formats
# ---------------------------------------------------------------------------

def parse_edge_list(text: str) -> SimpleGraph:
    """Parse ``n`` on the first line, then ``u v`` edge lines and ``loop u`` lines.

    Blank lines and ``#`` comments are ignored.
    """
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise ValueError("empty graph description")
    try:
        n = int(lines[0])
    except ValueError:
        raise ValueError(f"first line must be the vertex count, got {lines[0]!r}") from None
    edges, loops = [], []
    for lineno, ln in enumerate(lines[1:], start=2):
        parts = ln.split()
        if parts[0] == "loop" and len(parts) == 2:
            u = int(parts[1])
            loops.append(u)
            ends = (u,)
        elif len(parts) == 2:
            u, v = int(parts[0]), int(parts[1])
            if u == v:
                raise ValueError(f"line {lineno}: write self-loops as 'loop {u}'")
            edges.append((u, v))
            ends = (u, v)
        else:
            raise ValueError(f"line {lineno}: expected 'u v' or 'loop u', got {ln!r}")
        for w in ends:
            if not 0 <= w < n:
                raise ValueError(f"line {lineno}: vertex {w} out of range 0..{n - 1}")
    return SimpleGraph.from_edges(n, edges, loops)


def format_edge_list(g: SimpleGraph) -> str:
    out = [str(g.n)]
    out += [f"{u} {v}" for u, v in g.edges()]
    out += [f"loop {u}" for u in _bits(g.loops)]
    return "\n".join(out) + "\n"


def to_dot(g: SimpleGraph, labels: Sequence[str] | None = None, name: str = "G") -> str:
    lab = labels or [str(v) for v in range(g.n)]
    out = [f"graph {name} {{"]
    for v in range(g.n):
        out.append(f'  {v} [label="{lab[v]}"];')
    for u, v in g.edges():
        out.append(f"  {u} -- {v};")
    for u in _bits(g.loops):
        out.append(f"  {u} -- {u};")
    out.append("}")
    return "\n".join(out) + "\n"
