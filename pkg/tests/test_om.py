from itertools import combinations, product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from matgrass.fixtures import degen_matroids
from matgrass.grassmann import enumerate_rank_k
from matgrass.om import (Chirotope, DomainError, InvalidOrientedMatroid, OrientedMatroid,
                         SignVector, compose, composition_closure, coordinate_om,
                         rank_zero_om, verify_covector_axioms)

sv = SignVector.parse


def strs(covs):
    return {str(x) for x in covs}


@st.composite
def sign_vectors(draw, n=None):
    n = draw(st.integers(1, 6)) if n is None else n
    return sv("".join(draw(st.lists(st.sampled_from("+-0"), min_size=n, max_size=n))))


SMALL_OMS = [M for n in range(1, 5) for k in range(0, min(n, 3) + 1)
             for M in enumerate_rank_k([f"e{i}" for i in range(n)], k)]


# sign vectors ------------------------------------------------------------------

def test_parse_and_print_round_trip():
    for text in ("", "0", "+-0", "--++00"):
        assert str(sv(text)) == text


def test_compose_examples():
    y = sv("+-0-")
    assert compose(SignVector.zero(4), y) == y
    assert compose(y, -y) == y
    assert compose(sv("+0-"), sv("0-+")) == sv("+--")


def test_compose_domain_mismatch():
    with pytest.raises(DomainError):
        compose(sv("+0"), sv("+00"))


@given(st.integers(1, 6).flatmap(lambda n: st.tuples(sign_vectors(n), sign_vectors(n), sign_vectors(n))))
def test_compose_is_associative_and_idempotent(xyz):
    x, y, z = xyz
    assert compose(compose(x, y), z) == compose(x, compose(y, z))
    assert compose(x, x) == x
    assert str(compose(x, y)) == oracles.s_compose(str(x), str(y))
    assert compose(x, y).geq(x)


@given(st.integers(1, 6).flatmap(lambda n: st.tuples(sign_vectors(n), sign_vectors(n))))
def test_conformal_order_matches_string_oracle(xy):
    x, y = xy
    assert x.geq(y) == oracles.s_geq(str(x), str(y))
    assert str(-x) == oracles.s_neg(str(x))


# axioms --------------------------------------------------------------------------

def test_zero_only_set():
    rep = verify_covector_axioms(["e"], [sv("0")])
    assert rep.ok
    assert OrientedMatroid(["e"], [sv("0")]).rank == 0


def test_missing_negation_is_reported():
    rep = verify_covector_axioms(["e"], [sv("0"), sv("+")])
    assert not rep.ok
    assert rep.axiom == 2
    assert rep.witness == (sv("+"),)


def test_missing_zero_and_composition_failures():
    assert verify_covector_axioms(["e"], [sv("+"), sv("-")]).axiom == 1
    rep = verify_covector_axioms(["a", "b"], [sv("00"), sv("+0"), sv("-0"), sv("0+"), sv("0-")])
    assert rep.axiom == 3


def test_elimination_failure_has_element_witness():
    # closed under negation and composition, but ++ and +- cannot be eliminated at b
    S = [sv(s) for s in ("00", "++", "--", "+-", "-+")]
    rep = verify_covector_axioms(["a", "b"], S)
    assert not rep.ok and rep.axiom == 4
    x, y, e = rep.witness
    assert e == "b"
    assert not oracles.is_covector_set({str(z) for z in S})


def test_domain_mismatch_raises():
    with pytest.raises(DomainError):
        verify_covector_axioms(["a", "b"], [sv("000")])


def test_degeneration_arrangement_passes():
    covs = oracles.arrangement_covectors([[1, 0], [0, 1], [-1, 1]])
    assert len(covs) == 13
    assert verify_covector_axioms(["a", "b", "c"], [sv(s) for s in covs]).ok


def test_invalid_construction_raises():
    with pytest.raises(InvalidOrientedMatroid):
        OrientedMatroid(["e"], [sv("0"), sv("+")])


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 3).flatmap(
    lambda n: st.sets(st.sampled_from(["".join(p) for p in product("+-0", repeat=n)]),
                      max_size=10)))
def test_axiom_checker_agrees_with_string_oracle(S):
    if not S:
        return
    n = len(next(iter(S)))
    S = set(S) | {"0" * n}
    rep = verify_covector_axioms([f"e{i}" for i in range(n)], [sv(s) for s in S])
    assert rep.ok == oracles.is_covector_set(S)


# rank, independence, loops ----------------------------------------------------

def test_coordinate_om():
    M = coordinate_om(["1", "2", "3"])
    assert len(M.covectors) == 27
    assert M.rank == 3
    assert M.loops() == ()


def test_degeneration_m0_loops_and_rank():
    _, m0 = degen_matroids()
    assert strs(m0.covectors) == oracles.arrangement_covectors([[1, 0], [0, 0], [-1, 1]])
    assert m0.loops() == ("b",)
    assert m0.rank == 2


def test_empty_set_is_independent():
    for M in SMALL_OMS[:20]:
        assert M.is_independent([])


def test_is_independent_rejects_foreign_elements():
    with pytest.raises(DomainError):
        coordinate_om(["a"]).is_independent(["z"])


@pytest.mark.parametrize("M", SMALL_OMS[::7])
def test_rank_matches_brute_force(M):
    assert M.rank == oracles.s_rank(strs(M.covectors))
    best = max(len(I) for r in range(M.n + 1) for I in combinations(M.elements, r) if M.is_independent(I))
    assert best == M.rank


# minors and sums ------------------------------------------------------------------

def test_delete_nothing():
    m1, _ = degen_matroids()
    assert m1.delete([]) == m1


def test_contract_coordinate():
    assert coordinate_om(["1", "2", "3"]).contract(["3"]) == coordinate_om(["1", "2"])


def test_contract_degeneration_m1_at_b():
    m1, _ = degen_matroids()
    # restrict the arrangement to the line y = 0: forms a -> x, c -> -x
    expected = oracles.arrangement_covectors([[1], [-1]])
    assert strs(m1.contract(["b"]).covectors) == expected == {"00", "-+", "+-"}


def test_minor_of_foreign_element_raises():
    with pytest.raises(DomainError):
        coordinate_om(["a"]).delete(["b"])


@settings(max_examples=80, deadline=None)
@given(st.sampled_from(SMALL_OMS), st.data())
def test_minors_commute_and_satisfy_axioms(M, data):
    labels = list(M.elements)
    A = data.draw(st.sets(st.sampled_from(labels)))
    rest = [e for e in labels if e not in A]
    B = data.draw(st.sets(st.sampled_from(rest))) if rest else set()
    left = M.contract(A).delete(B)
    right = M.delete(B).contract(A)
    assert left == right
    assert verify_covector_axioms(left.elements, left.covectors).ok
    assert M.delete(B).rank <= M.rank
    # rank of the contraction plus rank of the restriction to A
    assert M.contract(A).rank + M.restrict_to(A).rank == M.rank


def test_direct_sum_examples():
    m1, m0 = degen_matroids()
    z = rank_zero_om(["z"])
    s = m1.direct_sum(z)
    assert s.loops() == ("z",)
    assert s.delete(["z"]) == m1
    line_a = OrientedMatroid(["a"], [sv("0"), sv("+"), sv("-")])
    line_b = OrientedMatroid(["b"], [sv("0"), sv("+"), sv("-")])
    assert line_a.direct_sum(line_b) == coordinate_om(["a", "b"])
    renamed = m0.relabel({"a": "a2", "b": "b2", "c": "c2"})
    prod = m1.direct_sum(renamed)
    assert len(prod.covectors) == len(m1.covectors) * len(m0.covectors)
    assert prod.rank == m1.rank + m0.rank


def test_direct_sum_overlap_raises():
    m1, m0 = degen_matroids()
    with pytest.raises(DomainError):
        m1.direct_sum(m0)


# cocircuits and chirotopes ----------------------------------------------------

def test_cocircuits_examples():
    line = OrientedMatroid(["a"], [sv("0"), sv("+"), sv("-")])
    assert line.cocircuits() == {sv("+"), sv("-")}
    m1, _ = degen_matroids()
    rays = {x for x in oracles.arrangement_covectors([[1, 0], [0, 1], [-1, 1]]) if x.count("0") == 1}
    assert strs(m1.cocircuits()) == rays and len(rays) == 6
    assert strs(coordinate_om(["1", "2"]).cocircuits()) == {"+0", "-0", "0+", "0-"}


@pytest.mark.parametrize("M", [M for M in SMALL_OMS if M.rank <= 3])
def test_cocircuits_generate_all_covectors(M):
    assert composition_closure(M.cocircuits(), M.n) == M.covectors


def test_chirotope_of_coordinate_om():
    chi, neg = coordinate_om(["1", "2"]).chirotope_pair()
    assert abs(chi("1", "2")) == 1
    assert neg("1", "2") == -chi("1", "2")


def _det_signs(vectors, k):
    return [oracles.sign(oracles.det([vectors[i] for i in s])) for s in combinations(range(len(vectors)), k)]


def test_degeneration_chirotopes_match_determinants():
    m1, m0 = degen_matroids()
    for M, vecs in ((m1, [(1, 0), (0, 1), (-1, 1)]), (m0, [(1, 0), (0, 0), (-1, 1)])):
        chi, _ = M.chirotope_pair()
        signs = _det_signs(vecs, 2)
        assert list(chi.values) in (signs, [-s for s in signs])
    chi0, _ = m0.chirotope_pair()
    assert chi0("a", "b") == chi0("b", "c") == 0 and chi0("a", "c") != 0
    chi1, _ = m1.chirotope_pair()
    assert chi1("a", "b") == chi1("a", "c") == chi1("b", "c")


def test_rank_zero_has_no_chirotope():
    with pytest.raises(ValueError):
        rank_zero_om(["a"]).chirotope_pair()


def test_chirotope_is_never_identically_zero():
    with pytest.raises(ValueError):
        Chirotope(("a", "b"), 1, (0, 0))


@pytest.mark.parametrize("M", [M for M in SMALL_OMS if M.rank >= 1][::3])
def test_chirotope_reproduces_cocircuits(M):
    chi, neg = M.chirotope_pair()
    assert chi.cocircuits() == M.cocircuits() == neg.cocircuits()
    # alternating: swapping two arguments flips the sign
    if M.rank >= 2:
        b = M.bases()[0]
        swapped = (b[1], b[0]) + b[2:]
        assert chi.sign(swapped) == -chi.sign(b)


def covector_poset(M):
    from matgrass.poset import Poset
    return Poset.from_leq(M.nonzero_covectors(), lambda x, y: y.geq(x))


@pytest.mark.parametrize("M", [M for M in SMALL_OMS if M.is_loopfree and M.rank >= 1])
def test_nonzero_covectors_form_a_sphere(M):
    from matgrass.homology import reduced_betti_gf2
    from matgrass.poset import order_complex
    r = M.rank
    b = reduced_betti_gf2(order_complex(covector_poset(M)))
    assert b == [int(d == r - 1) for d in range(len(b))]
    assert len(b) == r
