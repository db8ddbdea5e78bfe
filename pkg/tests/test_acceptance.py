"""The ten acceptance criteria, each printing one PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v``; the verdict lines go straight
to the terminal regardless of capture.
"""

import random
import time
from contextlib import contextmanager
from itertools import combinations_with_replacement

import pytest

import oracles
from matgrass.bundles import (babson_check, constant_bundle, disk_bundle, fiber_audit,
                              sphere_bundle, pullback, whitney_sum)
from matgrass.charclass import (euler_class, orientation_lift, pull_back_classes,
                                stiefel_whitney, sw_classes, thom_class, whitney_sum_check)
from matgrass.fixtures import (BUNDLES, LIFTS, bundle, circle_base, degen_bundle,
                               identity_bundle, lift, octahedron, pullback_maps)
from matgrass.grassmann import RationalConfiguration, macpherson, mu_point, weak_maps_to
from matgrass.homology import (ChainComplexGF2, betti_gf2, boundary_rows, cup_product,
                               integer_homology, reduced_betti_gf2, steenrod_square)
from matgrass.om import SignVector, coordinate_om, verify_covector_axioms
from matgrass.poset import Poset, SimplicialComplex, connected_components, order_complex
from matgrass.vecfields import obstruction_report


@pytest.fixture
def criterion(capsys):
    @contextmanager
    def run(name, budget=None):
        start = time.perf_counter()
        status, detail = "PASS", ""
        try:
            yield
            elapsed = time.perf_counter() - start
            if budget is not None and elapsed > budget:
                status, detail = "FAIL", f"took {elapsed:.1f} s, budget {budget} s"
        except BaseException as exc:
            status, detail = "FAIL", f"{type(exc).__name__}: {exc}"[:200]
            raise
        finally:
            elapsed = time.perf_counter() - start
            with capsys.disabled():
                print(f"\n[acceptance] {status} {name} ({elapsed:.1f} s){' ' + detail if detail else ''}")
        assert status == "PASS", detail
    return run


def covector_poset(M):
    return Poset.from_leq(M.nonzero_covectors(), lambda x, y: y.geq(x))


def strs(M):
    return frozenset(str(x) for x in M.covectors)


def eps(base, names):
    return constant_bundle(base, coordinate_om(names))


# 1 --------------------------------------------------------------------------------

def test_mu_agrees_with_the_cell_enumeration_oracle(criterion):
    with criterion("mu equals the arrangement oracle on 200 random configurations", budget=60):
        bad = []
        for seed in range(200):
            rng = random.Random(seed)
            dim = rng.choice([2, 3])
            n = rng.randint(1, 5)
            k = rng.randint(1, dim)
            vecs = oracles.random_configuration(rng, dim, n)
            plane = oracles.random_plane(rng, dim, k)
            M = mu_point(RationalConfiguration([f"v{i}" for i in range(n)], vecs), plane)
            ok = verify_covector_axioms(M.elements, M.covectors).ok
            expected = frozenset(oracles.arrangement_covectors(oracles.restricted_forms(vecs, plane)))
            if not ok or strs(M) != expected:
                bad.append(seed)
        assert not bad, f"seeds {bad}"


# 2 --------------------------------------------------------------------------------

def test_covector_posets_are_spheres(criterion):
    with criterion("loop-free OMs of MacP(1,3), MacP(2,4), MacP(1,4) have sphere covector posets"):
        bad, checked = [], 0
        for k, n in [(1, 3), (2, 4), (1, 4)]:
            for M in macpherson(k, n).items:
                if M.loops():
                    continue
                checked += 1
                K = order_complex(covector_poset(M))
                want = [int(d == M.rank - 1) for d in range(K.dim + 1)]
                if reduced_betti_gf2(K) != want:
                    bad.append((k, n, M))
        assert checked > 0
        assert not bad, bad[:3]


# 3 --------------------------------------------------------------------------------

def test_small_macphersonian_topology(criterion):
    with criterion("MacP(1,2) ~ S^1, MacP(1,3) ~ RP^2 profile, MacP(2,4) has one H^1 class", budget=600):
        # the enumerations themselves against brute force on three elements
        brute = oracles.brute_force_oms(3)
        oms13 = {strs(M) for M in macpherson(1, 3).items}
        assert oms13 == {S for S in brute if oracles.s_rank(S) == 1}
        K12 = order_complex(macpherson(1, 2))
        K13 = order_complex(macpherson(1, 3))
        for K in (K12, K13):
            simp = oracles.closure(list(K.all_simplices()))
            assert integer_homology(K) == oracles.reference_integer_homology(simp)
        assert integer_homology(K12) == [(1, []), (1, [])]
        assert betti_gf2(K13) == [1, 1, 1]
        assert integer_homology(K13)[1] == (0, [2])
        P24 = macpherson(2, 4)
        assert len(connected_components(P24)) == 1
        assert ChainComplexGF2(order_complex(P24)).cohomology(1).dim == 1


# 4 --------------------------------------------------------------------------------

def test_weak_map_lemmas_on_macp_2_4(criterion):
    with criterion("both weak-map lemmas on every comparable pair of MacP(2,4)"):
        P = macpherson(2, 4)
        bad, pairs = [], 0
        for lo, hi in P.strict_pairs():
            M, Mp = hi, lo          # M weak-maps to Mp
            assert weak_maps_to(M, Mp)
            pairs += 1
            loops = set(Mp.loops())
            for e in M.elements:
                if e in loops:
                    continue
                if not weak_maps_to(M.contract([e]), Mp.contract([e])):
                    bad.append(("contract", M, Mp, e))
            low = Mp.nonzero_covectors()
            for X in M.nonzero_covectors():
                if not any(X.geq(Y) for Y in low):
                    bad.append(("covector", M, Mp, X))
        assert pairs > 0
        assert not bad, bad[:3]


# 5 --------------------------------------------------------------------------------

def test_quasifibration_evidence(criterion):
    with criterion("Babson's criterion and fiber audits on the degenerating-arrangement and MacP(1,3) bundles"):
        for xi in (degen_bundle(), identity_bundle(1, 3)):
            for total in (sphere_bundle(xi), disk_bundle(xi)):
                assert babson_check(total.projection).summary == "criterion-certified"
                assert all(r.ok for r in fiber_audit(total))
        sv = SignVector.parse
        simplex = {("1", sv("-++")), ("1", sv("-0+")), ("0", sv("-0+")), ("0", sv("00+"))}
        K = order_complex(sphere_bundle(degen_bundle()).poset)
        assert any(set(K.labels(s)) == simplex for s in K.simplices[3])


# 6 --------------------------------------------------------------------------------

def test_stiefel_whitney_axioms(criterion):
    with criterion("Stiefel-Whitney axioms: unit, naturality, Whitney sums, canonical line"):
        for name in BUNDLES:
            w = sw_classes(thom_class(bundle(name), integral=False))
            assert w.coords[0] == [1] and w.checks["w_i = 0 above rank"], name
        maps = pullback_maps()
        assert len(maps) == 3
        for _, name, f in maps:
            xi = bundle(name)
            pulled = pull_back_classes(f, stiefel_whitney(xi))
            w_pb = stiefel_whitney(pullback(f, xi))
            for i, c in enumerate(pulled):
                assert w_pb[i].degree == i and (not c or w_pb.coords[i] == c)
        pairs = [("mobius", "mobius"), ("mobius", "trivial1_circle"), ("canonical13", "canonical13")]
        for a, b in pairs:
            assert whitney_sum_check(bundle(a), bundle(b)).ok, (a, b)
        assert not stiefel_whitney(bundle("mobius")).is_zero(1)
        w = stiefel_whitney(bundle("canonical13"))
        assert not w.is_zero(1)
        assert any(w.base.cohomology(2).coordinates(cup_product(w[1], w[1]).bits))


# 7 --------------------------------------------------------------------------------

def test_orientability_triple_equivalence(criterion):
    with criterion("w1 = 0 iff orientation lift iff integral Thom class, on all fixtures"):
        seen = set()
        for name in BUNDLES:
            xi = bundle(name)
            T = thom_class(xi)
            a = sw_classes(T).is_zero(1)
            b = orientation_lift(xi) is not None
            c = T.UZ is not None
            assert a == b == c, (name, a, b, c)
            seen.add(a)
        assert len(BUNDLES) >= 6 and seen == {True, False}


# 8 --------------------------------------------------------------------------------

def test_euler_class_is_unstable(criterion):
    with criterion("e(xi + eps_1) = 0 on orientable fixtures and e(eps_k) = 0"):
        orientable = [n for n in BUNDLES if thom_class(bundle(n)).UZ is not None]
        assert orientable
        for name in orientable:
            xi = bundle(name)
            line = eps(xi.base, ["t"])
            assert euler_class(thom_class(whitney_sum(xi, line))).is_zero, name
        for base in (circle_base(), octahedron()):
            for k in (1, 2, 3):
                assert euler_class(thom_class(eps(base, [f"e{i}" for i in range(k)]))).is_zero


# 9 --------------------------------------------------------------------------------

def test_vector_field_obstruction(criterion):
    with criterion("vector fields force w_{k-l+1} = 0, w(xi) = w(Q) and e = 0"):
        with_section = 0
        for name in LIFTS:
            nu = lift(name)
            rep = obstruction_report(nu.bundle, nu)
            top = rep.k - rep.l + 1
            assert rep.checks[f"w{top}(xi) = 0"] and rep.checks["w(xi) = w(Q)"], name
            if rep.checks["e(xi) = 0"] is not None:
                assert rep.checks["e(xi) = 0"], name
                with_section += 1
        assert with_section >= 1


# 10 -------------------------------------------------------------------------------

def _golden_complexes():
    def from_facets(facets):
        return SimplicialComplex.from_facets(sorted({v for f in facets for v in f}), facets)
    out = {"RP2": from_facets(oracles.RP2_FACETS), "torus": from_facets(oracles.torus7())}
    for k, n in [(1, 2), (1, 3), (1, 4), (2, 4)]:
        out[f"MacP({k},{n})"] = order_complex(macpherson(k, n))
    # the product poset realizes S^1 x RP^2, whose degree-1 classes give a nonzero Sq^1(ab)
    out["MacP(1,2) x MacP(1,3)"] = order_complex(macpherson(1, 2).product(macpherson(1, 3)))
    for name in ("degen", "mobius", "canonical13"):
        out[f"{name} sphere bundle"] = order_complex(sphere_bundle(bundle(name)).poset)
    return out


def _sparse_product_is_zero(A, B):
    """Whether the product of two matrices given as sparse row dicts vanishes."""
    for row in A:
        acc = {}
        for m, v in row.items():
            for c, w in B[m].items():
                acc[c] = acc.get(c, 0) + v * w
        if any(acc.values()):
            return False
    return True


def _square_axioms(K, H):
    """Sq^0 = id, Sq^p = cup square in degree p, vanishing above, Cartan on degree-1 pairs.

    Returns how many Cartan instances had a nonzero left side.
    """
    cx = ChainComplexGF2(K)
    for p in range(K.dim + 1):
        for a in cx.cohomology(p).basis():
            assert H(cx, p).canonical(steenrod_square(0, a).bits) == H(cx, p).canonical(a.bits)
            if 2 * p <= K.dim:
                top = H(cx, 2 * p)
                assert top.canonical(steenrod_square(p, a).bits) == top.canonical(cup_product(a, a).bits)
            for k in range(p + 1, K.dim - p + 1):
                assert steenrod_square(k, a).is_zero()
    nonzero = 0
    if K.dim < 3:
        return nonzero
    for a, b in combinations_with_replacement(cx.cohomology(1).basis(), 2):
        ab = cup_product(a, b)
        # Sq^1(ab) = a^2 b + a b^2 and Sq^2(ab) = a^2 b^2
        lhs = H(cx, 3).canonical(steenrod_square(1, ab).bits)
        rhs = cup_product(cup_product(a, a), b).bits ^ cup_product(a, cup_product(b, b)).bits
        assert lhs == H(cx, 3).canonical(rhs)
        nonzero += bool(lhs)
        if K.dim >= 4:
            sq2 = cup_product(cup_product(a, a), cup_product(b, b)).bits
            assert H(cx, 4).canonical(steenrod_square(2, ab).bits) == H(cx, 4).canonical(sq2)
    return nonzero


def test_homology_engine_self_checks(criterion):
    with criterion("boundary squares to zero, Steenrod axioms, universal coefficients", budget=120):
        cache = {}

        def H(cx, d):
            key = (id(cx), d)
            if key not in cache:
                cache[key] = cx.cohomology(d)
            return cache[key]

        golden = _golden_complexes()
        randoms = [SimplicialComplex.from_facets(
            sorted({v for f in fs for v in f}), fs)
            for fs in (oracles.random_facets(random.Random(s), 12, 4) for s in range(50))]
        assert not _sparse_product_is_zero([{0: 1}], [{0: 1}])
        for K in randoms + list(golden.values()):
            for d in range(2, K.dim + 1):
                assert _sparse_product_is_zero(boundary_rows(K, d - 1), boundary_rows(K, d))
        cartan = 0
        for K in randoms + [golden["RP2"], golden["MacP(1,4)"], golden["MacP(1,2) x MacP(1,3)"]]:
            cartan += _square_axioms(K, H)
        assert cartan >= 1
        for name, K in golden.items():
            b, h = betti_gf2(K), integer_homology(K)
            even = [sum(1 for t in tors if t % 2 == 0) for _, tors in h]
            for d, (free, _) in enumerate(h):
                assert b[d] == free + even[d] + (even[d - 1] if d else 0), name
