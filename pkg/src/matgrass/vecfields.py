"""Independent vector fields on matroid bundles: combinatorial Stiefel members,
quotient bundles, and the characteristic-class obstructions they imply.

Only the characteristic-class shadow of the splitting ``xi = Q + eps_l`` is
checked; no homotopy-theoretic isomorphism is constructed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .bundles import BundleError, MatroidBundle
from .charclass import euler_class, stiefel_whitney, sw_classes, thom_class
from .grassmann import EnumerationLimit, enumerate_rank_k, weak_maps_to
from .om import DomainError, OrientedMatroid

__all__ = [
    "stiefel_member",
    "VectorFieldLift",
    "quotient_bundle",
    "ObstructionReport",
    "obstruction_report",
    "search_lift",
    "MAX_SEARCH_BASE",
]

MAX_SEARCH_BASE = 6
SHADOW_NOTE = ("only characteristic classes of xi and Q + eps_l are compared; "
               "the bundle isomorphism itself is not certified")


def stiefel_member(M: OrientedMatroid, k: int, n: int, l: int) -> bool:
    """Whether M, on ``n`` original plus ``l`` extra elements (in that order), is in V_l(k, n)."""
    if n < 0 or l < 0 or M.n != n + l:
        raise DomainError(f"ground set of size {M.n} does not split as {n} + {l}")
    extra = M.elements[n:]
    return M.delete(extra).rank == k and M.is_independent(extra)


class VectorFieldLift:
    """A monotone lift of ``bundle`` to oriented matroids with ``l`` extra elements."""

    __slots__ = ("bundle", "lift", "l", "extra")

    def __init__(self, bundle: MatroidBundle, lift: Mapping, l: int, check: bool = True):
        self.bundle = bundle
        self.l = l
        base = bundle.base
        missing = [x for x in base.items if x not in lift]
        if missing:
            raise BundleError(f"no lifted matroid for {missing[0]!r}")
        self.lift = {x: lift[x] for x in base.items}
        n = len(bundle.elements)
        first = self.lift[base.items[0]]
        self.extra = first.elements[n:]
        if len(self.extra) != l:
            raise DomainError(f"lift has {len(first.elements) - n} extra elements, expected {l}")
        if check:
            for x, M in self.lift.items():
                if M.elements[:n] != bundle.elements or M.elements[n:] != self.extra:
                    raise DomainError(f"lift over {x!r} has ground set {M.elements}")
                if M.delete(self.extra) != bundle.assign[x]:
                    raise BundleError(f"deleting the fields over {x!r} does not give the bundle")
                if not stiefel_member(M, bundle.rank, n, l):
                    raise BundleError(f"fields over {x!r} are not independent")
            for lo, hi in base.cover_pairs():
                if not weak_maps_to(self.lift[hi], self.lift[lo]):
                    raise BundleError(f"lift is not monotone on {hi!r} > {lo!r}", (hi, lo))


def quotient_bundle(nu: VectorFieldLift) -> MatroidBundle:
    """Contract the fields fiberwise; monotonicity is re-verified."""
    cache: dict = {}
    assign = {}
    for x, M in nu.lift.items():
        if M not in cache:
            cache[M] = M.contract(nu.extra)
        assign[x] = cache[M]
    Q = MatroidBundle(nu.bundle.base, assign, check=True)
    if Q.rank != nu.bundle.rank - nu.l:
        raise BundleError(f"quotient has rank {Q.rank}, expected {nu.bundle.rank - nu.l}")
    return Q


@dataclass
class ObstructionReport:
    k: int
    l: int
    w_xi: list            # coordinates per degree
    w_q: list
    checks: dict = field(default_factory=dict)
    note: str = SHADOW_NOTE

    @property
    def ok(self) -> bool:
        return all(v for v in self.checks.values() if v is not None)


def obstruction_report(xi: MatroidBundle, nu: VectorFieldLift) -> ObstructionReport:
    """``w_{k-l+1}(xi) = 0``, ``w(xi) = w(Q)`` and, when orientable, ``e(xi) = 0``."""
    if nu.bundle is not xi and nu.bundle != xi:
        raise BundleError("vector fields belong to a different bundle")
    k, l = xi.rank, nu.l
    Q = quotient_bundle(nu)
    th = thom_class(xi, integral=True)
    w = sw_classes(th)
    wq = stiefel_whitney(Q)
    dims = max(len(w.coords), len(wq.coords))
    wx = [w.coords[i] if i < len(w.coords) else [] for i in range(dims)]
    wy = [wq.coords[i] if i < len(wq.coords) else [] for i in range(dims)]
    zero = lambda c: not any(c)
    checks = {}
    top = k - l + 1
    checks[f"w{top}(xi) = 0"] = w.is_zero(top) if top <= k else True
    checks["w(xi) = w(Q)"] = all(
        (zero(a) and zero(b)) or a == b for a, b in zip(wx, wy))
    if th.UZ is not None and l >= 1:
        checks["e(xi) = 0"] = euler_class(th).is_zero
    else:
        checks["e(xi) = 0"] = None  # not orientable or no field: nothing to check
    return ObstructionReport(k, l, wx, wy, checks)


def search_lift(xi: MatroidBundle, extra: Sequence, limit: int = MAX_SEARCH_BASE):
    """Exhaustive search for a lift with fields named ``extra``; None if there is none.

    Candidates come from the full enumeration of rank-k matroids on the
    extended ground set, so this is exponential and capped at ``limit``
    base items.
    """
    base = xi.base
    if len(base) > limit:
        raise EnumerationLimit(f"lift search is limited to {limit} base items")
    n, l = len(xi.elements), len(extra)
    ground = tuple(xi.elements) + tuple(extra)
    pool = enumerate_rank_k(ground, xi.rank)
    deleted = {M: M.delete(extra) for M in pool}
    cands = {}
    for x in base.items:
        target = xi.assign[x]
        cands[x] = [M for M in pool if deleted[M] == target and stiefel_member(M, xi.rank, n, l)]
    order = [base.items[i] for i in base.linear_extension()]
    chosen: dict = {}

    def consistent(x, M):
        for y, N in chosen.items():
            if base.lt(y, x) and not weak_maps_to(M, N):
                return False
            if base.lt(x, y) and not weak_maps_to(N, M):
                return False
        return True

    def rec(i):
        if i == len(order):
            return True
        x = order[i]
        for M in cands[x]:
            if consistent(x, M):
                chosen[x] = M
                if rec(i + 1):
                    return True
                del chosen[x]
        return False

    if not rec(0):
        return None
    return VectorFieldLift(xi, chosen, l)
