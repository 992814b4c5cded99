import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from msfgroups import (
    ClaimViolation,
    ElementSet,
    PreconditionError,
    build_link_graph,
    decompose_case1,
    edge_lower_bound,
    enumerate_maximal_sumfree,
    enumerate_mis,
    is_sum_free,
    mu,
    parse_group_spec,
    structure_report,
    triangle_hitting_set,
    triangles,
    verify_degree_claim,
)
from msfgroups.census import enumerate_groups_of_order
from msfgroups.linkgraph import even_coset, index2_setting, odd_coset
from msfgroups.mis_engine import mis_sets
from msfgroups.verify import _check_z5, random_sum_free_subset

P = parse_group_spec


def link(spec, S, B):
    G = P(spec)
    B = odd_coset(G) if B == "odd" else ElementSet.from_elements(G, B)
    return build_link_graph(G, ElementSet.from_elements(G, S), B)


def by_label(L):
    return {L.label(v): v for v in range(L.order)}


# -- construction ------------------------------------------------------------------

def test_z9_triangle():
    L = link("Z9", [3], [1, 4, 7])
    assert L.num_edges == 3 and L.e2 == 0 and L.graph.num_loops == 0
    assert len(triangles(L)) == 1


def test_z10_example():
    L = link("Z10", [2], "odd")
    pos = by_label(L)
    assert [L.d1(v) for v in range(L.order)] == [2] * 5
    key = lambda a, b: (min(pos[a], pos[b]), max(pos[a], pos[b]))  # noqa: E731
    assert L.edge_type[key("3", "9")] == 2
    assert L.edge_type[key("5", "7")] == 1
    assert L.graph.has_loop(pos["1"]) and L.graph.num_loops == 1
    assert L.e1 == 5 and L.e2 == 1 and L.num_edges == 6
    assert {lab: L.d2(v) for lab, v in pos.items()} == {"1": 1, "3": 1, "5": 0, "7": 0, "9": 1}


def test_empty_generator_set():
    L = link("Z12", [], "odd")
    assert L.num_edges == 0 and L.graph.num_loops == 0
    assert all(L.typed_degree(v) == (0, 0) for v in range(L.order))
    assert edge_lower_bound(L) == 0


def test_z8_degrees():
    L = link("Z8", [2], "odd")
    assert all(L.d1(v) == 2 for v in range(L.order))


def _random_instance(draw_specs, data):
    spec = data.draw(st.sampled_from(draw_specs))
    G = P(spec)
    rng = random.Random(data.draw(st.integers(0, 10**6)))
    S = random_sum_free_subset(G, ElementSet.full(G), rng.randint(1, 4), rng)
    Bidx = data.draw(st.sets(st.integers(0, G.n - 1), max_size=G.n))
    B = ElementSet.from_indices(G, Bidx) - S
    return G, S, B


@given(st.data())
@settings(max_examples=80, deadline=None)
def test_loop_means_element_cannot_join(data):
    G, S, B = _random_instance(["Z10", "Z2*Z4", "Z3^2", "Z14", "Z2^2*Z3", "Z17"], data)
    L = build_link_graph(G, S, B)
    for v in range(L.order):
        x = ElementSet.from_indices(G, [L.vertices[v]])
        assert L.graph.has_loop(v) == (not is_sum_free(G, S | x))


@given(st.data())
@settings(max_examples=80, deadline=None)
def test_edge_types_follow_definition(data):
    G, S, B = _random_instance(["Z10", "Z2*Z4", "Z3^2", "Z14", "Z2^2*Z3", "Z17"], data)
    L = build_link_graph(G, S, B)
    mods = G.components
    Sel = set(S.elements())
    sym = Sel | {oracles.gneg(mods, s) for s in Sel}
    for u, v in itertools.combinations(range(L.order), 2):
        x, y = L.element(u), L.element(v)
        t1 = oracles.gadd(mods, x, oracles.gneg(mods, y)) in sym
        t2 = oracles.gadd(mods, x, y) in Sel
        assert L.edge_type.get((u, v)) == (1 if t1 else 2 if t2 else None)


def test_mis_correspondence_exhaustive():
    """If S u I is maximal sum-free with I inside a sum-free B, I is a MIS of L_S[B]."""
    checked = 0
    for n in range(1, 17):
        for G in enumerate_groups_of_order(n):
            wit = enumerate_maximal_sumfree(G, want_witnesses=True).witnesses
            Bs = [M for M in wit if len(M) == mu(G)][:3]
            small = [ElementSet.from_indices(G, c) for k in (1, 2) for c in itertools.combinations(range(1, n), k)]
            small = [S for S in small if is_sum_free(G, S)]
            for B in Bs:
                for S in small:
                    if S & B:
                        continue
                    L = build_link_graph(G, S, B)
                    sets = set(mis_sets(L.graph))
                    for M in wit:
                        if S.issubset(M) and (M - S).issubset(B):
                            I = frozenset(L.position(x) for x in (M - S).indices())
                            assert I in sets, (G, str(S), str(M))
                            checked += 1
    assert checked > 200


# -- index-2 claims -----------------------------------------------------------------------

def test_degree_claim_examples():
    L = link("Z10", [2], "odd")
    rep = verify_degree_claim(L)
    assert rep.passed
    eq = {L.label(v): vd.d2_is_full for v, vd in enumerate(rep.vertices)}
    assert eq == {"1": True, "3": True, "5": False, "7": False, "9": True}
    assert not verify_degree_claim(link("Z10", [1], "odd")).applicable


def test_edge_bound_example():
    L = link("Z10", [2], "odd")
    assert edge_lower_bound(L) == Fraction(7, 2) <= L.num_edges == 6


def test_edge_bound_random_instances():
    rng = random.Random(9)
    pool = [G for n in range(2, 65, 2) for G in enumerate_groups_of_order(n)]
    for _ in range(50):
        G = rng.choice(pool)
        S = random_sum_free_subset(G, even_coset(G), rng.randint(1, 4), rng)
        L = build_link_graph(G, S, odd_coset(G))
        assert edge_lower_bound(L) <= L.num_edges
        assert verify_degree_claim(L).passed


def test_index2_setting_messages():
    G = P("Z9")
    assert index2_setting(G, ElementSet.empty(G), ElementSet.empty(G)) == "group has odd order"
    G = P("Z10")
    assert index2_setting(G, ElementSet.empty(G), even_coset(G)).startswith("B is the subgroup")


def test_hitting_set_examples():
    G = P("Z16")
    assert str(triangle_hitting_set(G, G.coerce(2), odd_coset(G))) == "{3,11}"
    G = P("Z10")
    assert str(triangle_hitting_set(G, G.coerce(2), odd_coset(G))) == "{3}"
    G = P("Z6")
    with pytest.raises(PreconditionError):
        triangle_hitting_set(G, G.coerce(2), odd_coset(G))


def test_triangle_listing():
    L = link("Z2*Z4", [(0, 2)], [(1, 0), (1, 2)])
    assert triangles(L) == []


# -- order-3 case --------------------------------------------------------------------------

def test_decompose_z2_z3():
    G = P("Z2*Z3")
    dec = decompose_case1(G, (0, 1), odd_coset(G))
    assert len(dec.triangles) == 1 and dec.irregular == [0] and dec.mis == 2
    L = build_link_graph(G, ElementSet.from_elements(G, [(0, 1)]), odd_coset(G))
    looped = [L.label(v) for v in range(L.order) if L.graph.has_loop(v)]
    assert looped == ["5"]  # (1,2) in Z2+Z3, the vertex with 2x = s


def test_decompose_z2_z9():
    G = P("Z2*Z9")
    dec = decompose_case1(G, (0, 3), odd_coset(G))
    assert len(dec.triangles) == 3 and len(dec.irregular) == 1 and len(dec.pairing) == 1
    assert dec.mis == 12 <= 6 * 2


def test_decompose_rejects_wrong_order():
    G = P("Z2*Z9")
    with pytest.raises(PreconditionError):
        decompose_case1(G, (0, 1), odd_coset(G))


def test_claim_violation_is_assertion():
    assert issubclass(ClaimViolation, AssertionError)


# -- block structure ---------------------------------------------------------------------

def test_structure_case1_example():
    G = P("Z2^2*Z4")
    B = ElementSet.where(G, lambda a: a[2] % 2 == 1)
    L = build_link_graph(G, ElementSet.from_elements(G, [(0, 0, 2)]), B)
    rep = structure_report(L, [B])
    assert rep.blocks[0].regular and rep.blocks[0].max_degree == 2


def test_structure_case2_example():
    G = P("Z2^2*Z4")
    B0 = ElementSet.where(G, lambda a: a[0] == 1 and a[2] % 2 == 0)
    B1 = ElementSet.where(G, lambda a: a[0] == 1 and a[2] % 2 == 1)
    S = ElementSet.from_elements(G, [(0, 1, 0), (0, 0, 1)])
    L = build_link_graph(G, S, B0 | B1)
    b0, b1 = structure_report(L, [B0, B1]).blocks
    pair = structure_report(L, [B0, B1]).pairs[0]
    assert b0.regular and b0.max_degree == 1 and b0.triangles == 0
    assert b1.regular and b1.max_degree == 2
    assert pair.regular and pair.max_degree == 2


def test_structure_one_block_equals_global():
    L = link("Z2*Z3*Z4", [(0, 1, 0), (0, 0, 2)], "odd")
    rep = structure_report(L, [L.B])
    assert (rep.blocks[0].min_degree, rep.blocks[0].max_degree) == (L.min_degree, L.max_degree)
    with pytest.raises(ValueError):
        structure_report(L, [L.B, L.B])


def test_z5_degree_formulas():
    assert _check_z5(P("Z5"), random.Random(0), 0)[0]
    G = P("Z3*Z5")  # Z5 + Z3 with generator (1, 0) in the Z5 coordinate order
    assert _check_z5(G, random.Random(1), 30)[0]


def test_dot_marks_edge_types():
    dot = link("Z10", [2], "odd").to_dot()
    assert "style=dashed" in dot and 'label="9"' in dot


def test_mis_of_link_graph():
    L = link("Z2*Z9", [(0, 3)], "odd")
    assert L.mis() == enumerate_mis(L.graph) == 12
