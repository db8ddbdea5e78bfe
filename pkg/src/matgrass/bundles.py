"""Matroid bundles over finite posets, their sphere and disk total spaces, and
the interval checks behind Babson's quasifibration criterion.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .grassmann import weak_maps_to
from .homology import reduced_betti_gf2
from .om import DomainError, OrientedMatroid, SignVector, coordinate_om, rank_zero_om
from .poset import (Poset, PosetMap, collapse_certificate, connected_components,
                    fiber_sub, order_complex)

__all__ = [
    "BundleError",
    "MatroidBundle",
    "make_bundle",
    "constant_bundle",
    "TotalSpacePoset",
    "sphere_bundle",
    "disk_bundle",
    "pullback",
    "whitney_sum",
    "sum_relabeling",
    "contractibility",
    "IntervalVerdict",
    "BabsonReport",
    "babson_check",
    "FiberReport",
    "fiber_audit",
    "trivial_summand",
    "base_connected",
    "CERTIFIED",
    "HOMOLOGY_TRIVIAL",
    "FAILS",
]

CERTIFIED = "certified"
HOMOLOGY_TRIVIAL = "homology-trivial"
FAILS = "fails"


class BundleError(ValueError):
    """Invalid bundle data; ``pair`` holds the offending cover pair when there is one."""

    def __init__(self, message: str, pair=None):
        super().__init__(message)
        self.pair = pair


class MatroidBundle:
    """Order-preserving assignment of rank-k oriented matroids to a base poset.

    ``s >= t`` in the base requires ``assign[s]`` to weak-map to ``assign[t]``;
    it is enough to check cover pairs since weak maps compose.
    """

    __slots__ = ("base", "assign", "elements", "rank")

    def __init__(self, base: Poset, assign: Mapping, check: bool = True):
        self.base = base
        missing = [x for x in base.items if x not in assign]
        if missing:
            raise BundleError(f"no oriented matroid assigned to {missing[0]!r}")
        self.assign = {x: assign[x] for x in base.items}
        if not base.items:
            raise BundleError("the base poset is empty")
        first = self.assign[base.items[0]]
        self.elements = first.elements
        self.rank = first.rank
        for x, m in self.assign.items():
            if m.elements != self.elements:
                raise BundleError(f"ground set of {x!r} is {m.elements}, expected {self.elements}")
            if m.rank != self.rank:
                raise BundleError(f"rank of {x!r} is {m.rank}, expected {self.rank}")
        if check:
            for lo, hi in base.cover_pairs():
                if not weak_maps_to(self.assign[hi], self.assign[lo]):
                    raise BundleError(f"{hi!r} > {lo!r} but there is no weak map", (hi, lo))

    def __getitem__(self, x) -> OrientedMatroid:
        return self.assign[x]

    def __eq__(self, other) -> bool:
        if not isinstance(other, MatroidBundle):
            return NotImplemented
        return self.base == other.base and self.assign == other.assign

    def __repr__(self) -> str:
        return f"MatroidBundle(rank={self.rank}, elements={list(self.elements)}, base={len(self.base)} items)"

    def is_constant(self) -> bool:
        return len(set(self.assign.values())) == 1


def make_bundle(base: Poset, assign: Mapping) -> MatroidBundle:
    return MatroidBundle(base, assign)


def constant_bundle(base: Poset, M: OrientedMatroid) -> MatroidBundle:
    return MatroidBundle(base, {x: M for x in base.items}, check=False)


@dataclass
class TotalSpacePoset:
    """Pairs ``(s, X)`` with ``X`` a covector of ``assign[s]``, ordered componentwise."""

    bundle: MatroidBundle
    poset: Poset
    projection: PosetMap
    sphere: bool

    @property
    def items(self) -> list:
        return self.poset.items

    def fiber(self, s) -> Poset:
        return fiber_sub(self.projection, s)


def _total_space(xi: MatroidBundle, sphere: bool) -> TotalSpacePoset:
    base = xi.base
    items, owner = [], []
    cells = {}
    for b in base.linear_extension():
        s = base.items[b]
        covs = xi.assign[s].sorted_covectors()
        if sphere:
            covs = [x for x in covs if not x.is_zero()]
        cells[b] = [(len(items) + j, x) for j, x in enumerate(covs)]
        items.extend((s, x) for x in covs)
        owner.extend([b] * len(covs))
    up = [0] * len(items)
    for b, members in cells.items():
        above_cells = [c for c in range(len(base)) if base.up[b] >> c & 1]
        for i, x in members:
            m = 0
            for c in above_cells:
                for j, y in cells[c]:
                    if y.geq(x):
                        m |= 1 << j
            up[i] = m
    P = Poset(items, up, check=False)
    proj = PosetMap(P, base, {it: it[0] for it in items}, check=False)
    return TotalSpacePoset(xi, P, proj, sphere)


def sphere_bundle(xi: MatroidBundle) -> TotalSpacePoset:
    return _total_space(xi, sphere=True)


def disk_bundle(xi: MatroidBundle) -> TotalSpacePoset:
    return _total_space(xi, sphere=False)


def pullback(f: PosetMap, xi: MatroidBundle) -> MatroidBundle:
    """``xi`` composed with an order-preserving map into its base."""
    if f.target != xi.base:
        raise BundleError("the map does not land in the base of the bundle")
    return MatroidBundle(f.source, {x: xi.assign[f(x)] for x in f.source.items}, check=False)


def sum_relabeling(e1, e2) -> tuple[dict, dict]:
    """Renamings making two ground sets disjoint: colliding labels get ``#1`` and ``#2``."""
    clash = set(e1) & set(e2)
    r1 = {e: (f"{e}#1" if e in clash else e) for e in e1}
    r2 = {e: (f"{e}#2" if e in clash else e) for e in e2}
    if len(set(r1.values()) | set(r2.values())) != len(e1) + len(e2):
        raise DomainError("relabeling with #1/#2 suffixes still collides")
    return r1, r2


def whitney_sum(xi1: MatroidBundle, xi2: MatroidBundle, relabel: bool = False) -> MatroidBundle:
    """Fiberwise direct sum over a shared base.

    Overlapping ground sets raise ``DomainError`` unless ``relabel`` is set, in
    which case colliding labels are suffixed as in :func:`sum_relabeling`.
    """
    if xi1.base != xi2.base:
        raise BundleError("Whitney sum needs a common base")
    if set(xi1.elements) & set(xi2.elements):
        if not relabel:
            raise DomainError(f"ground sets overlap: {sorted(map(str, set(xi1.elements) & set(xi2.elements)))}")
        r1, r2 = sum_relabeling(xi1.elements, xi2.elements)
        cache1 = {m: m.relabel(r1) for m in set(xi1.assign.values())}
        cache2 = {m: m.relabel(r2) for m in set(xi2.assign.values())}
        a1 = {x: cache1[m] for x, m in xi1.assign.items()}
        a2 = {x: cache2[m] for x, m in xi2.assign.items()}
    else:
        a1, a2 = xi1.assign, xi2.assign
    sums = {}
    assign = {}
    for x in xi1.base.items:
        pair = (a1[x], a2[x])
        if pair not in sums:
            sums[pair] = pair[0].direct_sum(pair[1])
        assign[x] = sums[pair]
    return MatroidBundle(xi1.base, assign, check=False)


def trivial_summand(base: Poset, elements, rank: int) -> MatroidBundle:
    """Constant bundle of the coordinate OM (rank = len(elements)) or rank 0."""
    if rank == 0:
        return constant_bundle(base, rank_zero_om(elements))
    if rank != len(elements):
        raise ValueError("trivial summands are coordinate or rank-zero matroids")
    return constant_bundle(base, coordinate_om(elements))


# contractibility ---------------------------------------------------------------

def contractibility(P: Poset) -> str:
    """Three-valued verdict for ``|P|``; the empty poset fails."""
    if len(P) == 0:
        return FAILS
    if P.maximum() is not None or P.minimum() is not None:
        return CERTIFIED
    K = order_complex(P)
    if collapse_certificate(K).certified:
        return CERTIFIED
    if all(b == 0 for b in reduced_betti_gf2(K)):
        return HOMOLOGY_TRIVIAL
    return FAILS


@dataclass(frozen=True)
class IntervalVerdict:
    p: object
    q: object
    side: str
    size: int
    verdict: str


@dataclass
class BabsonReport:
    intervals: list = field(default_factory=list)

    @property
    def summary(self) -> str:
        verdicts = {v.verdict for v in self.intervals}
        if FAILS in verdicts:
            return "fails"
        if HOMOLOGY_TRIVIAL in verdicts:
            return "criterion-homology-trivial"
        return "criterion-certified"

    @property
    def ok(self) -> bool:
        return self.summary != "fails"

    def counts(self) -> dict:
        out = {CERTIFIED: 0, HOMOLOGY_TRIVIAL: 0, FAILS: 0}
        for v in self.intervals:
            out[v.verdict] += 1
        return out


def babson_check(f: PosetMap) -> BabsonReport:
    """Check both interval conditions of Babson's criterion for ``f``.

    For every ``p`` and every ``q <= f(p)`` the poset ``f^{-1}(q) & P_{<=p}`` must
    be contractible, and dually for ``q >= f(p)``.  Identical subsets are
    judged once.
    """
    P, Q = f.source, f.target
    cache: dict[tuple, str] = {}
    report = BabsonReport()
    qpos = {q: i for i, q in enumerate(Q.items)}
    for p in P.items:
        fp = qpos[f(p)]
        for side, mask in (("<=", Q.down[fp]), (">=", Q.up[fp])):
            for qi in range(len(Q)):
                if not mask >> qi & 1:
                    continue
                q = Q.items[qi]
                sub = fiber_sub(f, q, side, p)
                key = tuple(sub.items)
                if key not in cache:
                    cache[key] = contractibility(sub)
                report.intervals.append(IntervalVerdict(p, q, side, len(sub), cache[key]))
    return report


@dataclass(frozen=True)
class FiberReport:
    item: object
    betti: tuple
    expected: tuple
    ok: bool


def _sphere_betti(d: int, length: int) -> tuple:
    return tuple(int(i == d) for i in range(length))


def fiber_audit(total: TotalSpacePoset) -> list[FiberReport]:
    """Reduced mod-2 Betti numbers of every fiber against S^{k-1} (sphere) or a point (disk)."""
    k = total.bundle.rank
    out = []
    for s in total.bundle.base.items:
        F = total.fiber(s)
        if len(F) == 0:
            # empty fiber: correct only for the rank-0 sphere bundle (S^-1 is empty)
            out.append(FiberReport(s, (), (), total.sphere and k == 0))
            continue
        b = tuple(reduced_betti_gf2(order_complex(F)))
        if total.sphere:
            expected = _sphere_betti(k - 1, max(len(b), k))
            b = b + (0,) * (len(expected) - len(b))
        else:
            expected = (0,) * len(b)
        out.append(FiberReport(s, b, expected, b == expected))
    return out


def base_connected(xi: MatroidBundle) -> bool:
    return len(connected_components(xi.base)) == 1
