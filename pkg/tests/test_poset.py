from itertools import combinations, product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from matgrass.homology import betti_gf2, reduced_betti_gf2
from matgrass.poset import (NotAPartialOrder, NotOrderPreserving, Poset, PosetMap,
                            SimplicialComplex, antichain, barycentric, chain_poset,
                            collapse_certificate, connected_components, fiber_sub,
                            lower_interval, order_complex, upper_interval)


@st.composite
def posets(draw, max_size=7):
    """Random posets from random relations i < j on positions, closed transitively."""
    n = draw(st.integers(1, max_size))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    chosen = draw(st.sets(st.sampled_from(pairs))) if pairs else set()
    perm = draw(st.permutations(list(range(n))))
    covers = [(f"x{perm[i]}", f"x{perm[j]}") for i, j in chosen]
    return Poset.from_covers([f"x{i}" for i in range(n)], covers)


def grid2():
    return chain_poset(["0", "1"]).product(chain_poset(["0", "1"]))


def brute_chains(P):
    items = list(P.items)
    out = set()
    for r in range(1, len(items) + 1):
        for c in combinations(items, r):
            if all(P.comparable(a, b) for a, b in combinations(c, 2)):
                out.add(frozenset(c))
    return out


# posets -------------------------------------------------------------------

def test_from_leq_rejects_non_orders():
    with pytest.raises(NotAPartialOrder):
        Poset.from_leq(["a", "b"], lambda x, y: True)
    with pytest.raises(NotAPartialOrder):
        Poset.from_leq(["a", "b", "c"], lambda x, y: x == y or (x, y) in {("a", "b"), ("b", "c")})


def test_from_covers_rejects_cycles():
    with pytest.raises(ValueError):
        Poset.from_covers(["a", "b"], [("a", "b"), ("b", "a")])


def test_chain_and_antichain():
    C = chain_poset("abc")
    assert C.maximum() == "c" and C.minimum() == "a"
    assert C.cover_pairs() == [("a", "b"), ("b", "c")]
    A = antichain("abc")
    assert A.maximum() is None
    assert len(connected_components(A)) == 3


@given(posets())
def test_linear_extension_respects_the_order(P):
    ext = P.linear_extension()
    pos = {i: k for k, i in enumerate(ext)}
    for a, b in P.strict_pairs():
        assert pos[P.idx(a)] < pos[P.idx(b)]


@given(posets())
def test_op_reverses_and_product_is_componentwise(P):
    Q = P.op()
    for a, b in product(P.items, repeat=2):
        assert P.leq(a, b) == Q.leq(b, a)
    R = P.product(chain_poset(["0", "1"]))
    for (a, s), (b, t) in product(R.items, repeat=2):
        assert R.leq((a, s), (b, t)) == (P.leq(a, b) and s <= t)


def test_poset_map_checks_order():
    C = chain_poset("ab")
    with pytest.raises(NotOrderPreserving):
        PosetMap(C, C, {"a": "b", "b": "a"})
    f = PosetMap(C, chain_poset("x"), {"a": "x", "b": "x"})
    assert f.compose(PosetMap.identity(C)).assignment == f.assignment


def test_fiber_sub_sides():
    P = grid2()
    f = PosetMap(P, chain_poset(["lo", "hi"]),
                 {x: "hi" if x == ("1", "1") else "lo" for x in P.items})
    assert set(fiber_sub(f, "lo").items) == {("0", "0"), ("0", "1"), ("1", "0")}
    assert set(fiber_sub(f, "lo", "<=", ("0", "1")).items) == {("0", "0"), ("0", "1")}
    assert set(fiber_sub(f, "lo", ">=", ("0", "1")).items) == {("0", "1")}
    with pytest.raises(ValueError):
        fiber_sub(f, "lo", "<", ("0", "1"))


def test_intervals():
    P = grid2()
    assert len(lower_interval(P, ("1", "1"))) == 4
    assert len(upper_interval(P, ("0", "1"))) == 2


# order complexes ----------------------------------------------------------

def test_order_complex_of_grid():
    K = order_complex(grid2())
    assert K.f_vector() == (4, 5, 2)
    assert reduced_betti_gf2(K) == [0, 0, 0]
    assert K.euler_characteristic() == 1


def test_order_complex_vertices_follow_a_linear_extension():
    P = Poset.from_covers(["c", "a", "b"], [("a", "b"), ("b", "c")])
    K = order_complex(P)
    assert K.vertices == ("a", "b", "c")
    assert K.simplices[2] == [(0, 1, 2)]


@settings(max_examples=60, deadline=None)
@given(posets())
def test_order_complex_simplices_are_the_chains(P):
    K = order_complex(P)
    got = {frozenset(K.labels(s)) for s in K.all_simplices()}
    assert got == brute_chains(P)
    # every simplex lists its chain bottom to top
    for s in K.all_simplices():
        lab = K.labels(s)
        assert all(P.lt(a, b) for a, b in zip(lab, lab[1:]))


@settings(max_examples=40, deadline=None)
@given(posets())
def test_opposite_poset_has_the_same_complex(P):
    K, L = order_complex(P), order_complex(P.op())
    assert {frozenset(K.labels(s)) for s in K.all_simplices()} == \
           {frozenset(L.labels(s)) for s in L.all_simplices()}
    assert betti_gf2(K) == betti_gf2(L)


@settings(max_examples=40, deadline=None)
@given(posets(max_size=6))
def test_max_element_gives_a_collapsible_cone(P):
    top = ("top",)
    items = list(P.items) + [top]
    Q = Poset.from_leq(items, lambda a, b: b == top or (a != top and P.leq(a, b)))
    K = order_complex(Q)
    assert collapse_certificate(K).certified
    assert reduced_betti_gf2(K) == [0] * (K.dim + 1)


def test_collapse_gets_stuck_on_a_circle():
    K = SimplicialComplex.from_facets("abc", [("a", "b"), ("b", "c"), ("a", "c")])
    res = collapse_certificate(K)
    assert not res.certified
    assert res.remainder.f_vector() == (3, 3)


def test_collapse_of_a_triangle_records_steps():
    K = SimplicialComplex.from_facets("abc", [("a", "b", "c")])
    res = collapse_certificate(K)
    assert res.certified
    assert len(res.steps) == 3


def test_simplicial_complex_validation():
    with pytest.raises(ValueError):
        SimplicialComplex("ab", [(0, 1)])
    with pytest.raises(ValueError):
        SimplicialComplex("ab", [(1, 0), (0,), (1,)])


@pytest.mark.parametrize("facets", [oracles.RP2_FACETS, oracles.torus7(), [(0, 1), (1, 2), (2, 0)]])
def test_barycentric_subdivision_preserves_homology(facets):
    verts = sorted({v for f in facets for v in f})
    K = SimplicialComplex.from_facets(verts, facets)
    B = barycentric(K)
    assert betti_gf2(B) == betti_gf2(K)
    assert B.euler_characteristic() == K.euler_characteristic()
    assert B.f_vector()[0] == len(K)


def test_with_vertex_order_and_subcomplex_positions():
    K = SimplicialComplex.from_facets("abc", [("a", "b", "c")])
    L = K.with_vertex_order("cab")
    assert L.vertices == ("c", "a", "b")
    assert L.f_vector() == K.f_vector()
    edge = SimplicialComplex.from_facets("ab", [("a", "b")])
    pos = L.subcomplex_positions(edge)
    assert pos[1] == {(1, 2)}
    with pytest.raises(ValueError):
        edge.subcomplex_positions(K)


def test_small_order_complexes():
    A = order_complex(antichain("ab"))
    assert A.f_vector() == (2,)
    C = order_complex(chain_poset("abc"))
    assert C.f_vector() == (3, 3, 1)


def test_barycentric_small_cases():
    edge = SimplicialComplex.from_facets("ab", [("a", "b")])
    assert barycentric(edge).f_vector() == (3, 2)
    tri = SimplicialComplex.from_facets("abc", [("a", "b"), ("b", "c"), ("a", "c")])
    B = barycentric(tri)
    assert B.f_vector() == (6, 6)
    degrees = {v: 0 for v in range(6)}
    for s in B.simplices[1]:
        for v in s:
            degrees[v] += 1
    assert set(degrees.values()) == {2}
    assert len(connected_components(Poset.from_covers(
        [B.vertices[i] for i in range(6)], [B.labels(s) for s in B.simplices[1]]))) == 1


def test_interval_and_fiber_trivia():
    P = grid2()
    assert lower_interval(P, ("0", "0")).items == (("0", "0"),)
    ident = PosetMap.identity(P)
    assert fiber_sub(ident, ("0", "1")).items == (("0", "1"),)
    with pytest.raises(KeyError):
        fiber_sub(ident, "nope")


@given(posets())
def test_poset_with_minimum_is_connected(P):
    bot = ("bot",)
    Q = Poset.from_leq([bot] + list(P.items), lambda a, b: a == bot or (b != bot and P.leq(a, b)))
    assert len(connected_components(Q)) == 1


def test_full_simplex_collapses():
    K = SimplicialComplex.from_facets("abcd", ["abcd"])
    assert collapse_certificate(K).certified


def test_collapse_of_empty_complex_raises():
    with pytest.raises(ValueError):
        collapse_certificate(SimplicialComplex("", []))
