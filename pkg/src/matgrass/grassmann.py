"""Weak and strong maps, MacPhersonians, combinatorial Grassmannians, and the map mu."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Sequence

from .linalg import rational_det, rational_rank, sign
from .om import (DomainError, OrientedMatroid, SignVector, composition_closure, perm_sign,
                 verify_covector_axioms)
from .poset import Poset

__all__ = [
    "MAX_ENUM_ELEMENTS",
    "MAX_ENUM_RANK",
    "EnumerationLimit",
    "weak_maps_to",
    "weak_map_le",
    "is_strong_image",
    "topes",
    "enumerate_rank_k",
    "weak_order_poset",
    "macpherson",
    "gamma",
    "RationalConfiguration",
    "mu_point",
    "projected_forms",
    "SemicontinuityReport",
    "upper_semicontinuity_sample",
]

MAX_ENUM_ELEMENTS = 6
MAX_ENUM_RANK = 3


class EnumerationLimit(ValueError):
    pass


def topes(M: OrientedMatroid) -> list[SignVector]:
    """Maximal covectors under the conformal order."""
    covs = list(M.covectors)
    return [x for x in covs if not any(y != x and y.geq(x) for y in covs)]


def _check_same_ground(m1: OrientedMatroid, m2: OrientedMatroid):
    if m1.elements != m2.elements:
        raise DomainError(f"ground sets differ: {m1.elements} vs {m2.elements}")


def weak_maps_to(m1: OrientedMatroid, m2: OrientedMatroid) -> bool:
    """True when ``m1 >= m2``: every covector of ``m2`` lies below a covector of ``m1``.

    It suffices to test the topes of ``m2`` against the topes of ``m1``.
    """
    _check_same_ground(m1, m2)
    if m1 is m2:
        return True
    big = topes(m1)
    return all(any(y.geq(x) for y in big) for x in topes(m2))


# the dual-named alias matches the poset reading: weak_map_le(M1, M2) <=> M2 <= M1
weak_map_le = weak_maps_to


def is_strong_image(m: OrientedMatroid, n: OrientedMatroid) -> bool:
    """Covectors of ``n`` form a subset of the covectors of ``m``."""
    _check_same_ground(m, n)
    return n.covectors <= m.covectors


# enumeration ---------------------------------------------------------------

def _gp_relations(ground: Sequence[int], k: int):
    """Three-term Grassmann-Pluecker relations as index triples of products.

    For a (k-2)-set A and distinct a, b, c, d outside A the signs
    chi(Aab)chi(Acd), -chi(Aac)chi(Abd), chi(Aad)chi(Abc) must be all zero or
    contain both signs.  Each term is ((s1, sign1), (s2, sign2), coefficient)
    with s sorted subsets.
    """
    rels = []
    for A in combinations(ground, k - 2):
        rest = [e for e in ground if e not in A]
        for a, b, c, d in combinations(rest, 4):
            terms = []
            for (p, q), (r, s), coef in (((a, b), (c, d), 1), ((a, c), (b, d), -1),
                                         ((a, d), (b, c), 1)):
                t1 = A + (p, q)
                t2 = A + (r, s)
                terms.append((tuple(sorted(t1)), perm_sign(t1), tuple(sorted(t2)),
                              perm_sign(t2), coef))
            rels.append(terms)
    return rels


def _loopfree_chirotopes(ground: Sequence[int], k: int):
    """Sign maps on k-subsets of ``ground`` passing the three-term GP filter.

    Normalised so the first nonzero value is +; every element of ``ground``
    lies in some nonzero subset.  Backtracking checks each relation once all
    six of its entries are assigned.
    """
    subsets = list(combinations(ground, k))
    pos = {s: i for i, s in enumerate(subsets)}
    due: list[list] = [[] for _ in subsets]
    if k >= 2:
        for terms in _gp_relations(ground, k):
            last = max(max(pos[t[0]], pos[t[2]]) for t in terms)
            due[last].append([(pos[t[0]], pos[t[2]], t[1] * t[3] * t[4]) for t in terms])
    values = [0] * len(subsets)
    all_mask = sum(1 << e for e in ground)
    cover = [sum(1 << e for e in s) for s in subsets]

    def ok(i):
        for rel in due[i]:
            seen = 0
            for p, q, c in rel:
                v = values[p] * values[q] * c
                if v > 0:
                    seen |= 1
                elif v < 0:
                    seen |= 2
            if seen == 1 or seen == 2:
                return False
        return True

    def rec(i, started, covered):
        if i == len(subsets):
            if started and covered == all_mask:
                yield tuple(values)
            return
        choices = (0, 1, -1) if started else (0, 1)
        for v in choices:
            values[i] = v
            if ok(i):
                yield from rec(i + 1, started or v != 0, covered | (cover[i] if v else 0))
        values[i] = 0

    yield from rec(0, False, 0)


def _cocircuits_from_signs(n: int, k: int, ground: Sequence[int], chi: dict) -> set[SignVector]:
    out = set()
    for h in combinations(ground, k - 1):
        signs = [0] * n
        for e in ground:
            if e in h:
                continue
            t = h + (e,)
            signs[e] = perm_sign(t) * chi[tuple(sorted(t))]
        v = SignVector.from_signs(signs)
        v = SignVector(v.pos, v.neg, n)
        if not v.is_zero():
            out.add(v)
            out.add(-v)
    return out


def enumerate_rank_k(elements: Sequence, k: int) -> list[OrientedMatroid]:
    """All rank-k oriented matroids on ``elements``, in canonical key order.

    Loop sets are enumerated separately.  On the loop-free part, candidate
    chirotopes pass a three-term Grassmann-Pluecker filter, are expanded to
    covector sets through their cocircuits, and are kept only if the covector
    axioms hold with the right rank and loops.
    """
    elements = tuple(elements)
    n = len(elements)
    if n > MAX_ENUM_ELEMENTS or k > MAX_ENUM_RANK:
        raise EnumerationLimit(f"enumeration limited to {MAX_ENUM_ELEMENTS} elements and rank "
                               f"{MAX_ENUM_RANK}; got {n} elements, rank {k}")
    if k < 0:
        raise ValueError("rank must be nonnegative")
    found: dict[frozenset, OrientedMatroid] = {}
    if k == 0:
        om = OrientedMatroid(elements, [SignVector.zero(n)])
        return [om]
    for nloops in range(n - k + 1):
        for loopset in combinations(range(n), nloops):
            ground = tuple(i for i in range(n) if i not in loopset)
            loop_mask = sum(1 << i for i in loopset)
            subsets = list(combinations(ground, k))
            for values in _loopfree_chirotopes(ground, k):
                if k == 1:
                    v = SignVector.from_signs(
                        [values[ground.index(i)] if i in ground else 0 for i in range(n)])
                    gens = {SignVector(v.pos, v.neg, n), -SignVector(v.pos, v.neg, n)}
                else:
                    gens = _cocircuits_from_signs(n, k, ground, dict(zip(subsets, values)))
                covs = composition_closure(gens, n)
                if covs in found:
                    continue
                if not verify_covector_axioms(elements, covs):
                    continue
                om = OrientedMatroid(elements, covs, check=False)
                if om.rank != k:
                    continue
                used = 0
                for x in covs:
                    used |= x.support
                if used != ((1 << n) - 1) & ~loop_mask:
                    continue
                found[covs] = om
    return sorted(found.values(), key=OrientedMatroid.key)


def weak_order_poset(oms: Sequence[OrientedMatroid]) -> Poset:
    """Oriented matroids ordered by weak maps (``a <= b`` iff ``b`` weak-maps to ``a``)."""
    oms = list(oms)
    tope_lists = [topes(m) for m in oms]
    up = []
    for i in range(len(oms)):
        mask = 0
        for j in range(len(oms)):
            if i == j or all(any(y.geq(x) for y in tope_lists[j]) for x in tope_lists[i]):
                mask |= 1 << j
        up.append(mask)
    return Poset(oms, up)


def macpherson(k: int, n: int) -> Poset:
    """MacP(k, n) on the elements "1", ..., "n"."""
    return weak_order_poset(enumerate_rank_k([str(i) for i in range(1, n + 1)], k))


def gamma(k: int, M: OrientedMatroid) -> Poset:
    """Rank-k strong map images of ``M`` ordered by weak maps."""
    if k > M.rank:
        raise ValueError(f"k = {k} exceeds rank {M.rank}")
    images = [N for N in enumerate_rank_k(M.elements, k) if is_strong_image(M, N)]
    return weak_order_poset(images)


# the map mu ------------------------------------------------------------------

def _fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floating point coordinates are not allowed; use Fraction or str")
    return Fraction(x)


@dataclass(frozen=True)
class RationalConfiguration:
    labels: tuple
    vectors: tuple[tuple[Fraction, ...], ...]
    ambient_dim: int = field(init=False)

    def __init__(self, labels: Sequence, vectors: Sequence[Sequence]):
        labels = tuple(labels)
        vecs = tuple(tuple(_fraction(c) for c in v) for v in vectors)
        if len(labels) != len(vecs):
            raise ValueError("one label per vector")
        if len(set(labels)) != len(labels):
            raise ValueError("labels must be distinct")
        dims = {len(v) for v in vecs}
        if len(dims) > 1:
            raise ValueError("vectors of different lengths")
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "vectors", vecs)
        object.__setattr__(self, "ambient_dim", dims.pop() if dims else 0)

    @classmethod
    def from_dict(cls, data: dict) -> "RationalConfiguration":
        return cls(list(data), list(data.values()))


def projected_forms(config: RationalConfiguration, plane_basis: Sequence[Sequence]):
    """Matrix of inner products <v_i, b_j>: the forms restricted to the plane."""
    basis = [tuple(_fraction(c) for c in b) for b in plane_basis]
    d = config.ambient_dim
    if any(len(b) != d for b in basis):
        raise DomainError(f"plane basis vectors must have length {d}")
    if rational_rank(basis) != len(basis):
        raise ValueError("plane basis is linearly dependent")
    return [[sum(a * c for a, c in zip(v, b)) for b in basis] for v in config.vectors]


def _independent_columns(rows: list[list[Fraction]]) -> list[int]:
    cols: list[int] = []
    for j in range(len(rows[0]) if rows else 0):
        trial = cols + [j]
        if rational_rank([[r[c] for c in trial] for r in rows]) == len(trial):
            cols = trial
    return cols


def mu_point(config: RationalConfiguration, plane_basis: Sequence[Sequence]) -> OrientedMatroid:
    """Oriented matroid of the configuration seen inside the plane spanned by ``plane_basis``.

    Covectors are the sign vectors of the restricted forms; they are produced
    as compositions of cocircuits whose entries are exact determinant signs.
    """
    A = projected_forms(config, plane_basis)
    n = len(config.labels)
    cols = _independent_columns(A)
    r = len(cols)
    if r == 0:
        return OrientedMatroid(config.labels, [SignVector.zero(n)])
    rows = [[a[c] for c in cols] for a in A]
    gens = set()
    for h in combinations(range(n), r - 1):
        hrows = [rows[i] for i in h]
        if r > 1 and rational_rank(hrows) != r - 1:
            continue
        signs = [sign(rational_det(hrows + [rows[e]])) if e not in h else 0 for e in range(n)]
        v = SignVector.from_signs(signs)
        v = SignVector(v.pos, v.neg, n)
        if not v.is_zero():
            gens.add(v)
            gens.add(-v)
    return OrientedMatroid(config.labels, composition_closure(gens, n))


@dataclass
class SemicontinuityReport:
    ok: bool
    segments: list = field(default_factory=list)
    violations: list = field(default_factory=list)


def upper_semicontinuity_sample(config: RationalConfiguration, path: Sequence[Sequence[Sequence]],
                                samples: int = 3) -> SemicontinuityReport:
    """Sample mu along straight-line interpolations between consecutive plane bases.

    On each segment the interior points t = j/(samples+1) are evaluated
    exactly.  The generic value of the segment is the interior value with the
    most covectors; every other interior value and both endpoint values are
    declared degenerations and must be weak-map images of the generic value.
    """
    if not path:
        raise ValueError("empty path")
    bases = [[tuple(_fraction(c) for c in b) for b in plane] for plane in path]
    k = len(bases[0])
    if any(len(p) != k for p in bases):
        raise ValueError("all planes on a path need the same number of basis vectors")
    report = SemicontinuityReport(True)
    if len(bases) == 1:
        m = mu_point(config, bases[0])
        report.segments.append({"t": [0], "oms": [m]})
        return report
    for s, (p0, p1) in enumerate(zip(bases, bases[1:])):
        ts = [Fraction(j, samples + 1) for j in range(0, samples + 2)]
        oms = []
        for t in ts:
            plane = [tuple((1 - t) * a + t * b for a, b in zip(u, v)) for u, v in zip(p0, p1)]
            oms.append(mu_point(config, plane))
        interior = oms[1:-1]
        generic = max(interior, key=lambda m: (len(m.covectors), m.key())) if interior else oms[0]
        for t, m in zip(ts, oms):
            if m != generic and not weak_maps_to(generic, m):
                report.ok = False
                report.violations.append((s, t, generic, m))
        report.segments.append({"t": ts, "oms": oms, "generic": generic})
    return report
