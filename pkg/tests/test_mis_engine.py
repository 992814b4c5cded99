import itertools
import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from msfgroups import (
    CapExceeded,
    PreconditionError,
    SimpleGraph,
    bound_almost_trifree,
    bound_hujter_tuza,
    bound_moon_moser,
    bound_regular_dense,
    bound_stability,
    check_bounds,
    enumerate_mis,
)
from msfgroups.mis_engine import (
    LOG2_3,
    brute_force_mis,
    format_edge_list,
    greedy_triangle_cover,
    mis_sets,
    parse_edge_list,
    to_dot,
)
from msfgroups.verify import complete_graph, disjoint_union, random_graph


def cycle(n):
    return SimpleGraph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def petersen():
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return SimpleGraph.from_edges(10, outer + spokes + inner)


def random_regular(n, d, rng):
    while True:
        stubs = [v for v in range(n) for _ in range(d)]
        rng.shuffle(stubs)
        edges = {tuple(sorted(stubs[i:i + 2])) for i in range(0, len(stubs), 2)}
        if len(edges) == n * d // 2 and all(u != v for u, v in edges):
            return SimpleGraph.from_edges(n, edges)


@st.composite
def graphs(draw, nmax=11, loops=True):
    n = draw(st.integers(0, nmax))
    pairs = list(itertools.combinations(range(n), 2))
    edges = [p for p in pairs if draw(st.booleans())]
    lp = [v for v in range(n) if loops and draw(st.integers(0, 7)) == 0]
    return SimpleGraph.from_edges(n, edges, lp)


# -- structure ---------------------------------------------------------------------

def test_graph_validation():
    with pytest.raises(ValueError):
        SimpleGraph(2, (0b10, 0))
    with pytest.raises(ValueError):
        SimpleGraph(1, (0b1,))
    g = SimpleGraph.from_edges(3, [(0, 1), (1, 1)])
    assert g.has_loop(1) and g.num_edges == 1 and g.degree(1) == 1 and g.degree_loops_twice(1) == 3


def test_induced_and_remove():
    g = petersen()
    h = g.remove([0])
    assert h.n == 9 and h.num_edges == 12
    assert g.closed_neighborhood(0) == [0, 1, 4, 5]
    assert len(complete_graph(4).triangles()) == 4


# -- exact counting -------------------------------------------------------------------

def test_counting_examples():
    assert enumerate_mis(complete_graph(3)) == 3
    two_tri = SimpleGraph.from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (0, 3), (1, 4), (2, 5)])
    assert enumerate_mis(two_tri) == 6
    for m in range(1, 5):
        assert enumerate_mis(disjoint_union([complete_graph(4)] * m)) == 4**m
    assert enumerate_mis(SimpleGraph.from_edges(1, [], [0])) == 1
    assert enumerate_mis(SimpleGraph.from_edges(5, [])) == 1
    assert enumerate_mis(SimpleGraph.from_edges(0, [])) == 1
    assert enumerate_mis(petersen()) == 15
    assert enumerate_mis(cycle(5)) == 5


def test_looped_vertex_is_exempt_from_domination():
    # path 0-1-2 with a loop at 1: the sets are {0, 2} only
    g = SimpleGraph.from_edges(3, [(0, 1), (1, 2)], [1])
    assert mis_sets(g) == [frozenset({0, 2})]
    # loop at an isolated vertex changes nothing else
    g = SimpleGraph.from_edges(3, [(0, 1)], [2])
    assert sorted(map(sorted, mis_sets(g))) == [[0], [1]]


@given(graphs())
@settings(max_examples=150, deadline=None)
def test_count_matches_naive_filter(g):
    loops = [v for v in range(g.n) if g.has_loop(v)]
    assert enumerate_mis(g) == oracles.naive_mis(g.n, g.edges(), loops) == brute_force_mis(g)


@given(graphs())
@settings(max_examples=100, deadline=None)
def test_emitted_sets_are_maximal_independent_and_distinct(g):
    sets = mis_sets(g)
    assert len(sets) == len(set(sets)) == enumerate_mis(g)
    for I in sets:
        assert not any(g.has_loop(v) for v in I)
        assert not any(g.adj[u] >> v & 1 for u in I for v in I)
        for v in range(g.n):
            if v not in I and not g.has_loop(v):
                assert any(g.adj[v] >> u & 1 for u in I)


def test_emission_order_is_deterministic():
    g = petersen()
    assert mis_sets(g) == mis_sets(g)


@given(graphs(nmax=10))
@settings(max_examples=100, deadline=None)
def test_branching_recursion(g):
    if g.n == 0:
        return
    for v in range(g.n):
        if g.has_loop(v):
            continue
        assert enumerate_mis(g) <= enumerate_mis(g.remove([v])) + enumerate_mis(g.remove(g.closed_neighborhood(v)))


def test_isolated_vertex_monotonicity():
    g = petersen()
    h = SimpleGraph.from_edges(11, g.edges())
    assert enumerate_mis(h) == enumerate_mis(g)
    assert math.isclose(check_bounds(h).entry("moon_moser").value_log2 - check_bounds(g).entry("moon_moser").value_log2,
                        LOG2_3 / 3)


def test_cap():
    with pytest.raises(CapExceeded):
        enumerate_mis(SimpleGraph.from_edges(50, []), cap=40)
    with pytest.raises(CapExceeded):
        brute_force_mis(SimpleGraph.from_edges(21, []))


# -- bounds ---------------------------------------------------------------------------

def test_moon_moser_examples():
    assert bound_moon_moser(3) == pytest.approx(LOG2_3)
    assert bound_moon_moser(0) == 0
    assert 2 ** bound_moon_moser(6) == pytest.approx(9)
    assert enumerate_mis(disjoint_union([complete_graph(3)] * 2)) == 9


def test_hujter_tuza_examples():
    matching = disjoint_union([complete_graph(2)] * 4)
    assert enumerate_mis(matching) == 16 == 2 ** bound_hujter_tuza(8)
    rep = check_bounds(cycle(5))
    assert rep.count == 5 and rep.entry("hujter_tuza").applicable
    assert 5 <= 2 ** rep.entry("hujter_tuza").value_log2 == pytest.approx(2**2.5)
    assert not check_bounds(complete_graph(3)).entry("hujter_tuza").applicable


def test_regular_dense_examples():
    rng = random.Random(11)
    for _ in range(20):
        g = random_regular(12, 3, rng)
        rep = check_bounds(g)
        assert rep.entry("regular_dense").applicable and rep.holds
    g4 = random_regular(12, 4, rng)
    assert bound_regular_dense(12, 1, 4) >= math.log2(enumerate_mis(g4))
    # delta = 1 gives b = 1 and a weak bound above 2^n
    assert bound_regular_dense(10, 1, 1) > 10
    with pytest.raises(PreconditionError):
        bound_regular_dense(10, 1, 0)
    with pytest.raises(PreconditionError):
        bound_regular_dense(10, 0.5, 2)


def test_almost_trifree_examples():
    assert bound_almost_trifree(8, 0, 1, 0) == 4
    # C6 plus a pendant triangle hanging off vertex 0
    edges = [(i, (i + 1) % 6) for i in range(6)] + [(0, 6), (6, 7), (0, 7)]
    g = SimpleGraph.from_edges(8, edges)
    rep = check_bounds(g, T=[6])
    e = rep.entry("almost_trifree")
    assert e.applicable and e.params["T"] == 1
    assert rep.exact_log2 <= e.value_log2 + 1e-9
    with pytest.raises(PreconditionError):
        bound_almost_trifree(8, -1, 2, 0)
    with pytest.raises(PreconditionError):
        check_bounds(complete_graph(4), T=[0])


def test_greedy_triangle_cover_breaks_all_triangles():
    rng = random.Random(5)
    for _ in range(100):
        g = random_graph(rng.randint(3, 12), rng.random(), rng)
        T = greedy_triangle_cover(g)
        assert g.remove(T).is_triangle_free()


def test_stability_examples():
    for m in range(1, 6):
        g = disjoint_union([complete_graph(4)] * m)
        n = 4 * m
        val = bound_stability(n, n // 2, 3, C=3 ** (3 / 13))
        assert val >= math.log2(enumerate_mis(g)) - 1e-9
    assert bound_stability(9, 0, 2) >= bound_moon_moser(9)
    assert bound_stability(9, -3, 2) >= bound_moon_moser(9)
    with pytest.raises(PreconditionError):
        bound_stability(9, 0, 2, C=1.0)
    with pytest.raises(PreconditionError):
        bound_stability(9, 0, 0)


def test_all_bounds_hold_on_random_graphs():
    rng = random.Random(2024)
    for _ in range(500):
        g = random_graph(rng.randint(1, 16), rng.random(), rng, loop_p=rng.choice([0, 0.1]))
        rep = check_bounds(g)
        assert rep.holds, [e.name for e in rep.violations()]


def test_check_bounds_examples():
    rep = check_bounds(complete_graph(3))
    assert rep.count == 3 and rep.exact_log2 == pytest.approx(rep.entry("moon_moser").value_log2)
    rep = check_bounds(petersen())
    assert rep.count == 15 and rep.holds
    rep = check_bounds(SimpleGraph.from_edges(4, []))
    assert rep.count == 1 and not rep.entry("regular_dense").applicable and not rep.entry("stability").applicable
    rep = check_bounds(SimpleGraph.from_edges(3, [(0, 1), (1, 2)], [1]))
    assert rep.looped_removed == 1 and rep.entry("moon_moser").params["n"] == 2


# -- I/O ----------------------------------------------------------------------------------

def test_edge_list_roundtrip():
    g = SimpleGraph.from_edges(5, [(0, 1), (1, 2), (3, 4)], [2])
    text = format_edge_list(g)
    assert text == "5\n0 1\n1 2\n3 4\nloop 2\n"
    assert parse_edge_list(text) == g
    assert parse_edge_list("# comment\n3\n0 2  # edge\n\n") == SimpleGraph.from_edges(3, [(0, 2)])


@pytest.mark.parametrize("text", ["", "x", "3\n0 5", "3\n1 1", "3\n0 1 2", "2\nloop 9"])
def test_edge_list_errors(text):
    with pytest.raises(ValueError):
        parse_edge_list(text)


def test_dot_export():
    g = SimpleGraph.from_edges(3, [(0, 1)], [2])
    dot = to_dot(g, labels=["a", "b", "c"])
    assert dot.startswith("graph G {") and '0 [label="a"];' in dot and "0 -- 1;" in dot and "2 -- 2;" in dot
