"""Self-contained verification suites.

Each suite builds its own instances, runs the exact machinery and records
one :class:`Check` per assertion.  Nothing here raises on a failed check;
the record carries the verdict.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .census import enumerate_groups_of_order
from .errors import ClaimViolation, PreconditionError
from .group_core import (
    GroupSpec,
    count_abelian_groups,
    element_order,
    factorize,
    hardy_ramanujan_estimate,
    partition_count,
    partitions,
)
from .linkgraph import (
    build_link_graph,
    decompose_case1,
    edge_lower_bound,
    even_coset,
    odd_coset,
    structure_report,
    triangle_hitting_set,
    verify_degree_claim,
)
from .mis_engine import (
    SimpleGraph,
    brute_force_mis,
    check_bounds,
    enumerate_mis,
)
from .sumfree import (
    ElementSet,
    greedy_extend,
    is_maximal_sum_free,
    is_sum_free,
)


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class VerificationRecord:
    suite: str
    params: dict = field(default_factory=dict)
    checks: list[Check] = field(default_factory=list)

    def add(self, name: str, passed: bool, detail: str = "") -> bool:
        self.checks.append(Check(name, bool(passed), detail))
        return bool(passed)

    def guard(self, name: str, fn: Callable[[], object], detail: str = "") -> object:
        """Run ``fn``; a raised claim or precondition failure becomes a failed check."""
        try:
            out = fn()
        except (ClaimViolation, PreconditionError) as exc:
            self.add(name, False, str(exc))
            return None
        self.add(name, True, detail)
        return out

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]


# ---------------------------------------------------------------------------
# random instance helpers
# ---------------------------------------------------------------------------

def random_sum_free_subset(G: GroupSpec, pool: ElementSet, size: int, rng: random.Random) -> ElementSet:
    """Greedy random sum-free subset of ``pool`` with at most ``size`` elements."""
    order = [i for i in pool.indices() if i != 0]
    rng.shuffle(order)
    S = ElementSet.empty(G)
    for i in order:
        if len(S) >= size:
            break
        T = S | ElementSet.from_indices(G, [i])
        if is_sum_free(G, T):
            S = T
    return S


def random_graph(n: int, p: float, rng: random.Random, loop_p: float = 0.0) -> SimpleGraph:
    edges = [(u, v) for u, v in itertools.combinations(range(n), 2) if rng.random() < p]
    loops = [v for v in range(n) if rng.random() < loop_p]
    return SimpleGraph.from_edges(n, edges, loops)


def disjoint_union(graphs: list[SimpleGraph]) -> SimpleGraph:
    edges, loops, off = [], [], 0
    for g in graphs:
        edges += [(u + off, v + off) for u, v in g.edges()]
        loops += [v + off for v in range(g.n) if g.has_loop(v)]
        off += g.n
    return SimpleGraph.from_edges(off, edges, loops)


def complete_graph(k: int) -> SimpleGraph:
    return SimpleGraph.from_edges(k, itertools.combinations(range(k), 2))


# ---------------------------------------------------------------------------
# order divisible by 9: triangle-union construction
# ---------------------------------------------------------------------------

def prop14_construction(G: GroupSpec) -> tuple[ElementSet, tuple[int, ...], str]:
    """Vertex set B and generator s whose link graph is a union of triangles.

    Uses a cyclic 3-power component of order >= 9 when there is one
    (B = residues 1 mod 3 there, s of order 3 inside the index-3 subgroup),
    otherwise two Z3 components (B = {1} + Z3 + rest, s = generator of the
    second one).
    """
    if G.n % 9:
        raise PreconditionError(f"9 does not divide |G| = {G.n}")
    threes = [i for i, m in enumerate(G.components) if m % 3 == 0]
    big = [i for i in threes if G.components[i] >= 9]
    if big:
        c = max(big, key=lambda i: G.components[i])
        m = G.components[c]
        B = ElementSet.where(G, lambda a: a[c] % 3 == 1)
        s = tuple(m // 3 if i == c else 0 for i in range(G.rank))
        return B, s, f"Z{m}-component"
    c1, c2 = threes[0], threes[1]
    B = ElementSet.where(G, lambda a: a[c1] == 1)
    s = tuple(1 if i == c2 else 0 for i in range(G.rank))
    return B, s, "Z3+Z3-components"


def verify_prop14(G: GroupSpec, cap: int = 45) -> VerificationRecord:
    rec = VerificationRecord("prop14", {"group": str(G), "cap": cap})
    try:
        B, s, how = prop14_construction(G)
    except PreconditionError as exc:
        rec.add("precondition", False, str(exc))
        return rec
    rec.params["construction"] = how
    S = ElementSet.from_elements(G, [s])
    nb = len(B)
    rec.add("B sum-free", is_sum_free(G, B))
    rec.add("|B| = n/3", 3 * nb == G.n, f"|B| = {nb}")
    rec.add("s has order 3", element_order(G, s) == 3)
    L = build_link_graph(G, S, B)
    rec.add("no type-2 edges", L.e2 == 0, f"e2 = {L.e2}")
    rec.add("no loops", L.graph.num_loops == 0)
    degs = {L.degree(v) for v in range(L.order)}
    rec.add("2-regular", degs == {2}, f"degrees {sorted(degs)}")
    tris = L.graph.triangles()
    covered = sorted(v for t in tris for v in t)
    rec.add(
        "disjoint union of |B|/3 triangles",
        len(tris) == nb // 3 and covered == list(range(nb)) and L.num_edges == nb,
        f"{len(tris)} triangles, {L.num_edges} edges",
    )
    expected = 3 ** (nb // 3)
    sets: list[frozenset[int]] = []
    count = enumerate_mis(L.graph, sets.append if G.n <= cap else None, cap=max(nb, 1))
    rec.add("mis = 3^(|B|/3)", count == expected, f"mis = {count}, expected {expected}")
    if G.n <= cap:
        ok = True
        seen = set()
        for I in sets:
            T = ElementSet.from_indices(G, [L.vertices[v] for v in I]) | S
            if not is_sum_free(G, T):
                ok = False
                break
            M = greedy_extend(G, T)
            if not is_maximal_sum_free(G, M) or (M & B) != (T & B):
                ok = False
                break
            seen.add(M.mask)
        rec.add("each MIS extends to a distinct maximal sum-free set", ok and len(seen) == len(sets),
                f"{len(seen)} distinct extensions")
    return rec


# ---------------------------------------------------------------------------
# proportion of groups with many involutions
# ---------------------------------------------------------------------------

def _parts_count_table(a: int) -> list[list[int]]:
    """t[m][j] = number of partitions of m into exactly j parts."""
    t = [[0] * (a + 1) for _ in range(a + 1)]
    t[0][0] = 1
    for m in range(1, a + 1):
        for j in range(1, m + 1):
            # either a part equals 1, or subtract 1 from every part
            t[m][j] = t[m - 1][j - 1] + (t[m - j][j] if m - j >= j else 0)
    return t


def prop31_report(n: int, eps) -> Fraction:
    """Exact fraction of abelian groups of order n with 2^r > eps * n.

    Only the 2-part matters: r is the number of parts of the partition of
    the 2-adic exponent of n that defines the 2-primary component.
    """
    if n < 1:
        raise ValueError("n must be positive")
    eps = Fraction(str(eps)) if not isinstance(eps, Fraction) else eps
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0, 1)")
    a = factorize(n).get(2, 0) if n > 1 else 0
    table = _parts_count_table(a)
    big = sum(table[a][j] for j in range(a + 1) if 2**j > eps * n)
    return Fraction(big, partition_count(a))


def verify_prop31(n: int, eps) -> VerificationRecord:
    eps = Fraction(str(eps)) if not isinstance(eps, Fraction) else eps
    rec = VerificationRecord("prop31", {"n": n, "eps": str(eps)})
    frac = prop31_report(n, eps)
    groups = enumerate_groups_of_order(n)
    direct = Fraction(sum(1 for G in groups if 2**G.r > eps * n), len(groups))
    rec.add("matches direct group enumeration", frac == direct, f"{frac} vs {direct}")
    rec.add("group count matches partition product", len(groups) == count_abelian_groups(n), f"{len(groups)} groups")
    rec.params["fraction"] = str(frac)
    return rec


# ---------------------------------------------------------------------------
# index-2 coset claims
# ---------------------------------------------------------------------------

def even_order_groups(nmax: int) -> list[GroupSpec]:
    return [G for n in range(2, nmax + 1, 2) for G in enumerate_groups_of_order(n)]


def verify_claims3(instances: int = 100, nmax: int = 64, seed: int = 0, case1_nmax: int = 36,
                   max_gen: int = 4) -> VerificationRecord:
    """Typed degrees, the edge lower bound and triangle hitting sets on random
    instances, then the order-3 triangle decomposition on every eligible group."""
    rng = random.Random(seed)
    rec = VerificationRecord("claims3", {"instances": instances, "nmax": nmax, "seed": seed, "case1_nmax": case1_nmax})
    pool = even_order_groups(nmax)
    for k in range(instances):
        G = rng.choice(pool)
        B = odd_coset(G)
        H = even_coset(G)
        S = random_sum_free_subset(G, H, rng.randint(1, max_gen), rng)
        tag = f"#{k} {G} S={S}"
        L = build_link_graph(G, S, B)
        rep = verify_degree_claim(L)
        rec.add(f"{tag} degrees", rep.passed, "; ".join(rep.failures[:3]) or (rep.precondition or ""))
        rec.guard(f"{tag} edge bound", lambda: edge_lower_bound(L))
        cands = [i for i in H.indices() if i != 0 and G.order_table[i] != 3]
        if cands:
            s = G.element(rng.choice(cands))
            rec.guard(f"{tag} hitting set s={G.format_element(s)}", lambda: triangle_hitting_set(G, s, B))
    if case1_nmax:
        rec.checks += verify_case1(case1_nmax).checks
    return rec


def order3_instances(nmax: int) -> list[tuple[GroupSpec, tuple[int, ...]]]:
    """(G, s) for every even-order G with 3 | n <= nmax and every s of order 3."""
    out = []
    for G in even_order_groups(nmax):
        if G.n % 3 == 0:
            out += [(G, G.element(i)) for i in range(G.n) if G.order_table[i] == 3]
    return out


def verify_case1(nmax: int = 36) -> VerificationRecord:
    rec = VerificationRecord("case1", {"nmax": nmax})
    for G, s in order3_instances(nmax):
        B = odd_coset(G)
        rec.guard(f"case1 {G} s={G.format_element(s)}", lambda: decompose_case1(G, s, B))
    return rec


# ---------------------------------------------------------------------------
# Z2^t + Z4 and Z5 + H structure
# ---------------------------------------------------------------------------

def _singletons_and_pairs(G: GroupSpec, pool: ElementSet, max_pairs: int | None, rng: random.Random):
    idx = [i for i in pool.indices() if i != 0]
    out = [ElementSet.from_indices(G, [i]) for i in idx]
    pairs = [ElementSet.from_indices(G, p) for p in itertools.combinations(idx, 2)]
    pairs = [P for P in pairs if is_sum_free(G, P)]
    if max_pairs is not None and len(pairs) > max_pairs:
        pairs = rng.sample(pairs, max_pairs)
    return out + pairs


def _shift(G: GroupSpec, S: ElementSet, e: int) -> ElementSet:
    return S | S.translate(e)


def verify_section4(tmax: int = 6, seed: int = 0, max_pairs: int | None = None,
                    z5_samples: int = 40) -> VerificationRecord:
    rng = random.Random(seed)
    rec = VerificationRecord("section4", {"tmax": tmax, "seed": seed, "max_pairs": max_pairs})
    for t in range(1, tmax + 1):
        G = GroupSpec.from_orders([2] * t + [4])
        last = G.rank - 1
        e = G.index(tuple(2 if i == last else 0 for i in range(G.rank)))

        # B = Z2^t + {1,3}, S inside Z2^t + {0,2}
        B = ElementSet.where(G, lambda a: a[last] % 2 == 1)
        pool = B.complement()
        bad = []
        tri_bad = []
        for S in _singletons_and_pairs(G, pool, max_pairs, rng):
            L = build_link_graph(G, S, B)
            star = len(_shift(G, S, e))
            if L.min_degree != star or L.max_degree != star:
                bad.append(str(S))
            if star == 2 and L.graph.num_loops == 0 and L.graph.triangles():
                tri_bad.append(str(S))
        rec.add(f"t={t} case1 |S*|-regular", not bad, ", ".join(bad[:3]))
        rec.add(f"t={t} case1 S*={{s,s+e}} triangle-free", not tri_bad, ", ".join(tri_bad[:3]))

        # B = {1} + Z2^(t-1) + Z4, S inside {0} + Z2^(t-1) + Z4
        B = ElementSet.where(G, lambda a: a[0] == 1)
        B0 = ElementSet.where(G, lambda a: a[0] == 1 and a[last] % 2 == 0)
        B1 = B - B0
        pool = B.complement()
        even_last = ElementSet.where(G, lambda a: a[last] % 2 == 0)
        fails: dict[str, list[str]] = {k: [] for k in ("B0 regular", "B0 triangle-free", "B1 regular", "B0-B1 regular")}
        for S in _singletons_and_pairs(G, pool, max_pairs, rng):
            S0 = S & even_last
            S1 = S - S0
            L = build_link_graph(G, S, B)
            rep = structure_report(L, [B0, B1])
            b0, b1 = rep.blocks
            pr = rep.pairs[0]
            if not (b0.regular and b0.max_degree == len(S0)):
                fails["B0 regular"].append(str(S))
            if b0.triangles:
                fails["B0 triangle-free"].append(str(S))
            if not (b1.regular and b1.max_degree == len(_shift(G, S0, e))):
                fails["B1 regular"].append(str(S))
            if not (pr.regular and pr.max_degree == len(_shift(G, S1, e))):
                fails["B0-B1 regular"].append(str(S))
        for k, v in fails.items():
            rec.add(f"t={t} case2 {k}", not v, ", ".join(v[:3]))

    for h in ([3], [7], [9], [3, 3]):
        G = GroupSpec.from_orders([5] + h)
        rec.add(f"{G} Z5-block degree formulas", *_check_z5(G, rng, z5_samples))
    return rec


def _check_z5(G: GroupSpec, rng: random.Random, samples: int) -> tuple[bool, str]:
    c = G.components.index(5)
    B = ElementSet.where(G, lambda a: a[c] in (2, 3))
    B2 = ElementSet.where(G, lambda a: a[c] == 2)
    B3 = ElementSet.where(G, lambda a: a[c] == 3)
    pool = ElementSet.where(G, lambda a: a[c] in (0, 1, 4))
    part = {i: ElementSet.where(G, lambda a, i=i: a[c] == i) for i in range(5)}
    sets = [ElementSet.from_indices(G, [i]) for i in pool.indices() if i != 0]
    for _ in range(samples):
        sets.append(random_sum_free_subset(G, pool, rng.randint(2, 4), rng))
    dbl = G.double_table
    for S in sets:
        Sp = {i: S & part[i] for i in range(5)}
        sym0 = Sp[0].symmetric()
        L = build_link_graph(G, S, B)
        rep = structure_report(L, [B2, B3])
        for i, blk in ((2, 0), (3, 1)):
            Si2 = Sp[(2 * i) % 5]
            cross = Si2 | Sp[(-2 * i) % 5].negation()
            in_block = rep.blocks[blk].degrees
            across = rep.pairs[0].degrees
            d1_cross = len(Sp[4] | Sp[1].negation())
            for x, (d1, d2) in in_block.items():
                exp_d2 = sum(1 for s in Si2.indices() if _contains_shift(G, sym0, dbl[x], s))
                exp_d2 = len(Si2) - exp_d2
                if d1 != len(sym0) or d2 != exp_d2:
                    return False, f"S={S} x={G.format_element(G.element(x))} in-block ({d1},{d2})"
                c1, c2 = across[x]
                exp_c2 = len(Sp[0]) - sum(1 for s in Sp[0].indices() if _contains_shift(G, cross, dbl[x], s))
                if c1 != d1_cross or c2 != exp_c2:
                    return False, f"S={S} x={G.format_element(G.element(x))} cross ({c1},{c2})"
    return True, f"{len(sets)} generator sets"


def _contains_shift(G: GroupSpec, T: ElementSet, target: int, s: int) -> bool:
    """Whether target lies in s + T."""
    add, neg = G.add_table, G.neg_table
    return T.has_index(add[target][neg[s]])


# ---------------------------------------------------------------------------
# MIS engine and bounds
# ---------------------------------------------------------------------------

def verify_bounds(graphs: int = 200, nmax: int = 12, seed: int = 0) -> VerificationRecord:
    rng = random.Random(seed)
    rec = VerificationRecord("bounds", {"graphs": graphs, "nmax": nmax, "seed": seed})
    mismatch, violated, recursion = [], [], []
    for k in range(graphs):
        g = random_graph(rng.randint(1, nmax), rng.random(), rng, loop_p=0.1 * rng.random())
        exact = enumerate_mis(g)
        if exact != brute_force_mis(g):
            mismatch.append(k)
        rep = check_bounds(g)
        if not rep.holds:
            violated.append((k, [e.name for e in rep.violations()]))
        v = rng.randrange(g.n)
        lhs = exact
        rhs = enumerate_mis(g.remove([v])) + enumerate_mis(g.remove(g.closed_neighborhood(v)))
        if lhs > rhs:
            recursion.append(k)
    rec.add("exact count matches brute force", not mismatch, str(mismatch[:5]))
    rec.add("all applicable bounds hold", not violated, str(violated[:5]))
    rec.add("branching recursion", not recursion, str(recursion[:5]))

    for m in range(1, 5):
        tri = disjoint_union([complete_graph(3)] * m)
        mat = disjoint_union([complete_graph(2)] * m)
        k4 = disjoint_union([complete_graph(4)] * m)
        rec.add(f"{m} disjoint triangles", enumerate_mis(tri) == 3**m)
        rec.add(f"{m}-edge perfect matching", enumerate_mis(mat) == 2**m)
        rec.add(f"{m} disjoint K4", enumerate_mis(k4) == 4**m)
        rk4 = check_bounds(k4)
        rec.add(f"{m} disjoint K4 under stability bound", rk4.holds)
        rt = check_bounds(tri)
        rec.add(f"{m} triangles meet Moon-Moser", math.isclose(rt.exact_log2, rt.entry("moon_moser").value_log2))
        rm = check_bounds(mat)
        rec.add(f"{m}-matching meets Hujter-Tuza", math.isclose(rm.exact_log2, rm.entry("hujter_tuza").value_log2))
    return rec


# ---------------------------------------------------------------------------
# partitions
# ---------------------------------------------------------------------------

def _pentagonal_partitions(nmax: int) -> list[int]:
    p = [1] + [0] * nmax
    for m in range(1, nmax + 1):
        total = 0
        k = 1
        while True:
            g1 = k * (3 * k - 1) // 2
            if g1 > m:
                break
            sign = 1 if k % 2 else -1
            total += sign * p[m - g1]
            g2 = k * (3 * k + 1) // 2
            if g2 <= m:
                total += sign * p[m - g2]
            k += 1
        p[m] = total
    return p


def verify_partitions(nmax: int = 200, ratio_from: int = 50) -> VerificationRecord:
    rec = VerificationRecord("partitions", {"nmax": nmax})
    oracle = _pentagonal_partitions(nmax)
    bad = [n for n in range(nmax + 1) if partition_count(n) != oracle[n]]
    rec.add("p(n) matches pentagonal recurrence", not bad, str(bad[:5]))
    ratios = [hardy_ramanujan_estimate(n) / partition_count(n) for n in range(ratio_from, nmax + 1)]
    if ratios:
        rec.add("estimate / p(n) in (1.0, 1.15)", all(1.0 < r < 1.15 for r in ratios),
                f"range [{min(ratios):.4f}, {max(ratios):.4f}]")
    small = [n for n in range(0, min(nmax, 25) + 1) if sum(1 for _ in partitions(n)) != partition_count(n)]
    rec.add("p(n) matches explicit listing for n <= 25", not small, str(small))
    return rec
