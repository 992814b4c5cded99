"""Link graphs of a generator set S on a vertex set B.

Two distinct vertices x, y of B are adjacent when {x, y, z} is a Schur
triple for some z in S.  The edge is type 1 when x - y lies in S or -S and
type 2 otherwise (then x + y lies in S).  Vertex x carries a loop when
{x, x, z} or {x, z, z'} is a Schur triple for some z, z' in S.

A loop with 2x in S is the degenerate pair {x, s - x}; it is tracked
separately as a "type-2 loop" because the typed degree formulas count it
once in d2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import ClaimViolation, PreconditionError
from .group_core import GroupElement, GroupSpec, element_order
from .mis_engine import SimpleGraph, enumerate_mis
from .sumfree import ElementSet, _bits


@dataclass(frozen=True)
class LinkGraph:
    group: GroupSpec
    S: ElementSet
    B: ElementSet
    vertices: tuple[int, ...]
    graph: SimpleGraph
    edge_type: dict[tuple[int, int], int] = field(repr=False)
    type2_loops: int = 0

    # positions <-> group elements

    @property
    def order(self) -> int:
        return len(self.vertices)

    def position(self, index: int) -> int:
        return self.vertices.index(index)

    def element(self, pos: int) -> GroupElement:
        return self.group.element(self.vertices[pos])

    def label(self, pos: int) -> str:
        return self.group.format_element(self.element(pos))

    # typed degrees

    def typed_degree(self, v: int, within: int | None = None) -> tuple[int, int]:
        """(d1, d2) at position v, counting neighbors inside the position mask ``within``.

        A type-2 loop at v counts once in d2 when v itself is inside ``within``.
        """
        nb = self.graph.adj[v] if within is None else self.graph.adj[v] & within
        d1 = d2 = 0
        for u in _bits(nb):
            if self.edge_type[(min(u, v), max(u, v))] == 1:
                d1 += 1
            else:
                d2 += 1
        if self.type2_loops >> v & 1 and (within is None or within >> v & 1):
            d2 += 1
        return d1, d2

    def d1(self, v: int) -> int:
        return self.typed_degree(v)[0]

    def d2(self, v: int) -> int:
        return self.typed_degree(v)[1]

    def degree(self, v: int) -> int:
        """Neighbors plus one for a loop."""
        return self.graph.degree(v) + self.graph.has_loop(v)

    def degree_loops_twice(self, v: int) -> int:
        return self.graph.degree_loops_twice(v)

    @property
    def max_degree(self) -> int:
        return max((self.degree(v) for v in range(self.order)), default=0)

    @property
    def min_degree(self) -> int:
        return min((self.degree(v) for v in range(self.order)), default=0)

    @property
    def e1(self) -> int:
        return sum(1 for t in self.edge_type.values() if t == 1)

    @property
    def e2(self) -> int:
        return sum(1 for t in self.edge_type.values() if t == 2)

    @property
    def num_edges(self) -> int:
        """e1 + e2; loops are flags, not edges."""
        return len(self.edge_type)

    def mis(self, cap: int | None = None) -> int:
        return enumerate_mis(self.graph) if cap is None else enumerate_mis(self.graph, cap=cap)

    def to_dot(self, name: str = "L") -> str:
        out = [f"graph {name} {{"]
        for v in range(self.order):
            out.append(f'  {v} [label="{self.label(v)}"];')
        for (u, v), t in sorted(self.edge_type.items()):
            out.append(f"  {u} -- {v};" if t == 1 else f"  {u} -- {v} [style=dashed];")
        for v in _bits(self.graph.loops):
            out.append(f"  {v} -- {v};")
        out.append("}")
        return "\n".join(out) + "\n"


def build_link_graph(G: GroupSpec, S: ElementSet, B: ElementSet) -> LinkGraph:
    add, neg, dbl = G.add_table, G.neg_table, G.double_table
    verts = tuple(B.indices())
    pos = {x: i for i, x in enumerate(verts)}
    s_idx = S.indices()
    sym = S.symmetric().mask
    loopers = S.sumset().mask | S.difference_set().mask if S else 0

    adj = [0] * len(verts)
    etype: dict[tuple[int, int], int] = {}
    loops = 0
    t2loops = 0
    for i, x in enumerate(verts):
        row = add[x]
        if loopers >> x & 1:
            loops |= 1 << i
        for s in s_idx:
            for y in (row[s], row[neg[s]]):   # x + s, x - s
                j = pos.get(y)
                if j is not None and j != i:
                    adj[i] |= 1 << j
                    etype[(min(i, j), max(i, j))] = 1
        if S.has_index(0):
            loops |= 1 << i
    for i, x in enumerate(verts):
        nx = neg[x]
        if S.mask >> dbl[x] & 1:
            loops |= 1 << i
            t2loops |= 1 << i
        for s in s_idx:
            y = add[s][nx]  # s - x
            j = pos.get(y)
            if j is None or j == i:
                continue
            key = (min(i, j), max(i, j))
            if key in etype:
                continue
            # type 1 takes precedence whenever x - y is in S or -S
            if sym >> add[x][neg[y]] & 1:
                etype[key] = 1
            else:
                etype[key] = 2
            adj[i] |= 1 << j
            adj[j] |= 1 << i
    return LinkGraph(G, S, B, verts, SimpleGraph(len(verts), tuple(adj), loops), etype, t2loops)


def triangles(L: LinkGraph) -> list[tuple[int, int, int]]:
    """All 3-cliques (loops ignored), as sorted triples of element indices."""
    v = L.vertices
    return [(v[a], v[b], v[c]) for a, b, c in L.graph.triangles()]


# ---------------------------------------------------------------------------
# index-2 coset setting
# ---------------------------------------------------------------------------

def first_even_coordinate(G: GroupSpec) -> int:
    for i, m in enumerate(G.components):
        if m % 2 == 0:
            return i
    raise PreconditionError(f"{G} has odd order")


def odd_coset(G: GroupSpec, coord: int | None = None) -> ElementSet:
    """Elements whose residue in a 2-power coordinate is odd."""
    c = first_even_coordinate(G) if coord is None else coord
    return ElementSet.where(G, lambda a: a[c] % 2 == 1)


def even_coset(G: GroupSpec, coord: int | None = None) -> ElementSet:
    return odd_coset(G, coord).complement()


def index2_setting(G: GroupSpec, S: ElementSet, B: ElementSet) -> str | None:
    """Return None when B is a non-trivial coset of an index-2 subgroup H and S lies in H.

    Otherwise return a message describing the first failure.
    """
    if G.n % 2:
        return "group has odd order"
    if 2 * len(B) != G.n:
        return "B does not have size n/2"
    H = B.difference_set()
    if len(H) != len(B):
        return "B is not a coset"
    if H & B:
        return "B is the subgroup itself, not its non-trivial coset"
    if not S.issubset(H):
        return "S is not contained in the index-2 subgroup"
    return None


# ---------------------------------------------------------------------------
# degree and edge claims
# ---------------------------------------------------------------------------

@dataclass
class VertexDegree:
    element: GroupElement
    d1: int
    d2: int
    d2_is_full: bool
    full_condition: bool  # 2x not in S + (S u -S)


@dataclass
class DegreeClaimReport:
    precondition: str | None
    vertices: list[VertexDegree] = field(default_factory=list)
    failures: list[str] = field(default_factory=list)

    @property
    def applicable(self) -> bool:
        return self.precondition is None

    @property
    def passed(self) -> bool:
        return self.applicable and not self.failures


def verify_degree_claim(L: LinkGraph) -> DegreeClaimReport:
    """Check the typed degree identities for a link graph in the index-2 coset setting.

    For every vertex x: d1(x) = |S u -S|, d2(x) <= |S|, with equality iff
    2x is not in S + (S u -S).  Globally |S u -S| <= min degree and
    max degree <= |S u -S| + |S| <= 2 min degree.  Loops count once.
    """
    G, S = L.group, L.S
    pre = index2_setting(G, S, L.B)
    rep = DegreeClaimReport(pre)
    if pre is not None:
        return rep
    sym = S.symmetric()
    ns, nsym = len(S), len(sym)
    bad_doubles = S.sumset(sym).mask if S else 0
    dbl = G.double_table
    for v in range(L.order):
        x = L.vertices[v]
        d1, d2 = L.typed_degree(v)
        cond = not (bad_doubles >> dbl[x] & 1)
        vd = VertexDegree(G.element(x), d1, d2, d2 == ns, cond)
        rep.vertices.append(vd)
        if d1 != nsym:
            rep.failures.append(f"d1({L.label(v)}) = {d1}, expected {nsym}")
        if d2 > ns:
            rep.failures.append(f"d2({L.label(v)}) = {d2} exceeds |S| = {ns}")
        if (d2 == ns) != cond:
            rep.failures.append(f"d2({L.label(v)}) equality condition mismatch")
    if L.order:
        if L.min_degree < nsym:
            rep.failures.append(f"min degree {L.min_degree} < |S u -S| = {nsym}")
        if L.max_degree > nsym + ns:
            rep.failures.append(f"max degree {L.max_degree} > {nsym + ns}")
        if nsym + ns > 2 * L.min_degree:
            rep.failures.append(f"|S u -S| + |S| = {nsym + ns} > 2 * min degree")
    return rep


def edge_lower_bound(L: LinkGraph) -> Fraction:
    """(|S u -S| + |S|) |B| / 2 - |S| |S u -S| 2^r, checked against e(L)."""
    pre = index2_setting(L.group, L.S, L.B)
    if pre is not None:
        raise PreconditionError(pre)
    ns, nsym = len(L.S), len(L.S.symmetric())
    bound = Fraction((nsym + ns) * len(L.B), 2) - ns * nsym * 2**L.group.r
    if L.num_edges < bound:
        raise ClaimViolation(f"e = {L.num_edges} < lower bound {bound}")
    return bound


def triangle_hitting_set(G: GroupSpec, s: GroupElement, B: ElementSet) -> ElementSet:
    """{z in B : 2z = 3s}; every triangle of the link graph of {s} on B meets it."""
    from .group_core import scalar, solve_double

    if element_order(G, s) == 3:
        raise PreconditionError("generator has order 3; use decompose_case1")
    S = ElementSet.from_elements(G, [s])
    pre = index2_setting(G, S, B)
    if pre is not None:
        raise PreconditionError(pre)
    Bt = solve_double(G, scalar(G, 3, s)) & B
    if len(Bt) > 2**G.r:
        raise ClaimViolation(f"|B_t| = {len(Bt)} > 2^r = {2**G.r}")
    L = build_link_graph(G, S, B)
    for tri in triangles(L):
        if not any(Bt.has_index(v) for v in tri):
            labels = ", ".join(G.format_element(G.element(v)) for v in tri)
            raise ClaimViolation(f"triangle {{{labels}}} misses the hitting set")
    return Bt


# ---------------------------------------------------------------------------
# order-3 generator: triangle decomposition
# ---------------------------------------------------------------------------

@dataclass
class TriangleDecomposition:
    triangles: list[tuple[int, int, int]]          # element indices x, x+s, x+2s
    irregular: list[int]                           # positions in ``triangles``
    pairing: list[tuple[int, int]]                 # pairs of positions in ``triangles``
    mis: int
    bound_log2: float

    @property
    def num_regular(self) -> int:
        return len(self.triangles) - len(self.irregular)


def decompose_case1(G: GroupSpec, s: GroupElement, B: ElementSet, cap: int = 200) -> TriangleDecomposition:
    """Split the type-1 graph of the link graph of {s} (s of order 3) into triangles.

    Checks that the type-1 edges form |B|/3 vertex-disjoint triangles
    {x, x+s, x+2s}; that irregular triangles (2x in {0, s, 2s}) number at
    most 2^r; that the type-2 edges match each regular triangle perfectly to
    the triangle of -x; and that the exact MIS count is at most
    6^(regular/2) * 2^(irregular).
    """
    if element_order(G, s) != 3:
        raise PreconditionError("generator must have order 3")
    S = ElementSet.from_elements(G, [s])
    pre = index2_setting(G, S, B)
    if pre is not None:
        raise PreconditionError(pre)
    L = build_link_graph(G, S, B)
    add, neg, dbl = G.add_table, G.neg_table, G.double_table
    si = G.index(s)
    s2 = add[si][si]

    tri_of: dict[int, int] = {}
    tris: list[tuple[int, int, int]] = []
    for x in B.indices():
        if x in tri_of:
            continue
        t = (x, add[x][si], add[x][s2])
        for y in t:
            tri_of[y] = len(tris)
        tris.append(t)
    if 3 * len(tris) != len(B):
        raise ClaimViolation("orbits of +s do not partition B into triangles")

    # type-1 subgraph must be exactly these triangles
    for (u, v), t in L.edge_type.items():
        if t == 1 and tri_of[L.vertices[u]] != tri_of[L.vertices[v]]:
            raise ClaimViolation("type-1 edge joins two different triangles")
    for t in tris:
        pos = [L.position(x) for x in t]
        for a in range(3):
            for b in range(a + 1, 3):
                key = (min(pos[a], pos[b]), max(pos[a], pos[b]))
                if L.edge_type.get(key) != 1:
                    raise ClaimViolation("triangle side is not a type-1 edge")

    special = {0, si, s2}
    irregular = []
    for k, t in enumerate(tris):
        flags = [dbl[x] in special for x in t]
        if any(flags) and not all(flags):
            raise ClaimViolation("triangle mixes regular and irregular vertices")
        if all(flags):
            irregular.append(k)
            if not any(L.graph.has_loop(L.position(x)) for x in t):
                raise ClaimViolation("irregular triangle without a loop")
    if len(irregular) > 2**G.r:
        raise ClaimViolation(f"{len(irregular)} irregular triangles > 2^r = {2**G.r}")

    pairing = []
    irr = set(irregular)
    seen = set()
    for k, t in enumerate(tris):
        if k in irr or k in seen:
            continue
        partner = tri_of[neg[t[0]]]
        if partner == k or partner in irr:
            raise ClaimViolation("regular triangle is paired with itself or an irregular one")
        pairing.append((k, partner))
        seen.update((k, partner))
        # type-2 edges x ~ s - x form a perfect matching between the pair
        for x in t:
            y = add[si][neg[x]]
            if tri_of[y] != partner:
                raise ClaimViolation("type-2 partner lies outside the paired triangle")
            key = tuple(sorted((L.position(x), L.position(y))))
            if L.edge_type.get(key) != 2:
                raise ClaimViolation("missing type-2 matching edge")
    if len(seen) != len(tris) - len(irregular):
        raise ClaimViolation("pairing does not cover the regular triangles")

    count = enumerate_mis(L.graph, cap=cap)
    bound = len(pairing) * math.log2(6) + len(irregular)
    if math.log2(count) > bound + 1e-9:
        raise ClaimViolation(f"mis = {count} exceeds 6^{len(pairing)} * 2^{len(irregular)}")
    return TriangleDecomposition(tris, irregular, pairing, count, bound)


# ---------------------------------------------------------------------------
# block structure
# ---------------------------------------------------------------------------

@dataclass
class BlockStats:
    block: int
    size: int
    degrees: dict[int, tuple[int, int]]   # element index -> (d1, d2) inside the block
    min_degree: int
    max_degree: int
    triangles: int

    @property
    def regular(self) -> bool:
        return self.min_degree == self.max_degree


@dataclass
class PairStats:
    blocks: tuple[int, int]
    degrees: dict[int, tuple[int, int]]   # element index -> (d1, d2) into the other block
    min_degree: int
    max_degree: int

    @property
    def regular(self) -> bool:
        return self.min_degree == self.max_degree


@dataclass
class StructureReport:
    blocks: list[BlockStats]
    pairs: list[PairStats]
    min_degree: int
    max_degree: int


def structure_report(L: LinkGraph, blocks: Sequence[ElementSet]) -> StructureReport:
    """Degree profile and triangle count per block, and degree profile per block pair.

    Degrees count a loop once, matching the typed d1/d2 convention.
    """
    total = 0
    for b in blocks:
        if b.mask & total:
            raise ValueError("blocks overlap")
        total |= b.mask
    if total != L.B.mask:
        raise ValueError("blocks do not partition the vertex set")
    pmasks = []
    for b in blocks:
        m = 0
        for x in b.indices():
            m |= 1 << L.position(x)
        pmasks.append(m)

    bstats = []
    for k, m in enumerate(pmasks):
        degs = {}
        for v in _bits(m):
            degs[L.vertices[v]] = L.typed_degree(v, m)
        tot = [a + b for a, b in degs.values()]
        sub = L.graph.induced(list(_bits(m)))
        bstats.append(BlockStats(k, len(degs), degs, min(tot, default=0), max(tot, default=0), len(sub.triangles())))

    pstats = []
    for i in range(len(pmasks)):
        for j in range(i + 1, len(pmasks)):
            degs = {}
            for v in _bits(pmasks[i]):
                degs[L.vertices[v]] = L.typed_degree(v, pmasks[j])
            for v in _bits(pmasks[j]):
                degs[L.vertices[v]] = L.typed_degree(v, pmasks[i])
            tot = [a + b for a, b in degs.values()]
            pstats.append(PairStats((i, j), degs, min(tot, default=0), max(tot, default=0)))
    return StructureReport(bstats, pstats, L.min_degree, L.max_degree)
