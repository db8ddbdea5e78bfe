"""Thom classes, Stiefel-Whitney classes, orientations and Euler classes of matroid bundles.

Everything is computed on the order complexes of the disk bundle ``E`` and
its sphere bundle ``E0``; the projection to the base is the simplicial map
``(s, X) -> s``, which never reverses the vertex order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

from .bundles import (BundleError, MatroidBundle, base_connected, disk_bundle,
                      whitney_sum)
from .homology import (ChainComplexGF2, Cochain, boundary_rows, coboundary_rows,
                       cup_product, integer_cup, integer_is_coboundary, pullback_cochain,
                       relative_ids, steenrod_square)
from .linalg import GF2Echelon, gf2_kernel, sparse_integer_solve
from .om import Chirotope
from .poset import Poset, PosetMap, SimplicialComplex, order_complex

__all__ = [
    "ThomData",
    "thom_class",
    "SWClassList",
    "sw_classes",
    "stiefel_whitney",
    "WhitneyReport",
    "whitney_sum_check",
    "pull_back_classes",
    "orientation_lift",
    "EulerClass",
    "euler_class",
    "euler_product_check",
    "base_complex",
]


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _parity(x: int) -> int:
    return bin(x).count("1") & 1


_BASE_CACHE: dict[tuple, ChainComplexGF2] = {}


def base_complex(base: Poset) -> ChainComplexGF2:
    """GF(2) chain complex of the order complex of ``base``, shared per presentation.

    Sharing matters because cochains may only be multiplied on the same complex;
    posets with the same items in the same order and the same relation share one.
    """
    key = (tuple(base.items), tuple(base.up))
    hit = _BASE_CACHE.get(key)
    if hit is None:
        hit = _BASE_CACHE[key] = ChainComplexGF2(order_complex(base))
    return hit


def _solve_gf2(columns: Sequence[int], target: int):
    """Coefficients ``c`` (a bitmask) with ``sum c_j columns[j] == target`` or None."""
    ech = GF2Echelon()
    for j, col in enumerate(columns):
        ech.add(col, tag=1 << j)
    res, tag = ech.reduce(target)
    return None if res else tag


@dataclass
class ThomData:
    bundle: MatroidBundle
    E: SimplicialComplex
    pair: ChainComplexGF2                 # (Delta E, Delta E0)
    absolute: ChainComplexGF2             # Delta E alone
    base: ChainComplexGF2
    projection: dict                      # vertex map E -> B
    U2: Cochain
    fiber_cycles: dict                    # base item -> GF(2) relative k-cycle (bits)
    fiber_cycles_z: dict                  # base item -> {simplex index: coefficient}
    thom_iso: dict                        # degree i -> bool (phi bijective H^i(B) -> H^{i+k})
    phi: dict = field(default_factory=dict)   # degree i -> list of coordinate bitmasks
    UZ: dict | None = None
    uz_note: str = ""

    @property
    def rank(self) -> int:
        return self.bundle.rank

    @property
    def iso_verified(self) -> bool:
        return all(self.thom_iso.values())

    def phi_of(self, beta_bits: int, i: int) -> Cochain:
        """``p^* beta cup U2`` for a base i-cochain."""
        pb = pullback_cochain(self.base, beta_bits, i, self.absolute, self.projection)
        return cup_product(pb, self.U2)


def _fiber_cycles(xi: MatroidBundle, E: SimplicialComplex, pair: ChainComplexGF2, pos: dict):
    """A generator of ``H_k(D_s, S_s)`` per base item, as the cone on a sphere cycle."""
    k = xi.rank
    gf2, ints = {}, {}
    index_k = E.index(k)
    for s in xi.base.items:
        M = xi.assign[s]
        zero = next(x for x in M.covectors if x.is_zero())
        apex = pos[(s, zero)]
        if k == 0:
            gf2[s] = 1 << index_k[(apex,)]
            ints[s] = {index_k[(apex,)]: 1}
            continue
        sphere = Poset.from_leq([(s, x) for x in M.sorted_covectors() if not x.is_zero()],
                                lambda a, b: b[1].geq(a[1]))
        S = order_complex(sphere)
        top = k - 1
        if S.dim != top:
            raise BundleError(f"sphere fiber over {s!r} has dimension {S.dim}, expected {top}")
        if top == 0:
            brows = [dict((c, 1) for c in range(len(S.simplices[0])))]
            fmasks = [1] * len(S.simplices[0])
        else:
            brows = boundary_rows(S, top)
            lower = S.index(top - 1)
            fmasks = [sum(1 << lower[f] for f in combinations(t, top)) for t in S.simplices[top]]
        kernel = gf2_kernel(fmasks)
        if len(kernel) != 1:
            raise BundleError(f"sphere fiber over {s!r} is not a mod 2 homology sphere")
        support = list(_bits(kernel[0]))
        first = support[0]
        xz = sparse_integer_solve(brows + [{first: 1}], [0] * len(brows) + [1],
                                  len(S.simplices[top]))
        if xz is None or any(abs(xz[c]) != 1 for c in support) or \
                any(xz[c] for c in range(len(xz)) if c not in set(support)):
            raise BundleError(f"sphere fiber over {s!r} has no integral fundamental cycle")
        bits, coeff = 0, {}
        for c in support:
            simplex = (apex,) + tuple(pos[S.vertices[v]] for v in S.simplices[top][c])
            if list(simplex) != sorted(simplex):
                raise AssertionError("cone point is not first in the vertex order")
            j = index_k[simplex]
            bits |= 1 << j
            coeff[j] = xz[c]
        gf2[s] = bits
        ints[s] = coeff
    return gf2, ints


def thom_class(xi: MatroidBundle, integral: bool = True) -> ThomData:
    """Mod 2 Thom class (and, when one exists, an integral one) of ``xi``.

    ``U2`` is the unique class of ``H^k(E, E0)`` taking the value 1 on the
    fundamental relative cycle of every fiber.  The Thom map
    ``beta -> p^* beta cup U2`` is checked to be bijective in every degree of
    the base.
    """
    if not base_connected(xi):
        raise BundleError("the base poset is not connected")
    k = xi.rank
    D = disk_bundle(xi)
    E = order_complex(D.poset)
    pos = {v: i for i, v in enumerate(E.vertices)}
    sphere_items = [it for it in D.items if not it[1].is_zero()]
    pair = ChainComplexGF2.relative_to_vertices(E, sphere_items)
    absolute = ChainComplexGF2(E)
    base = base_complex(xi.base)
    projection = {it: it[0] for it in D.items}
    cycles, cycles_z = _fiber_cycles(xi, E, pair, pos)
    order = list(xi.base.items)

    H = pair.cohomology(k)
    columns = []
    for rep in H.reps:
        col = 0
        for b, s in enumerate(order):
            if _parity(rep & cycles[s]):
                col |= 1 << b
        columns.append(col)
    combo = _solve_gf2(columns, (1 << len(order)) - 1)
    if combo is None:
        raise BundleError("no mod 2 Thom class: fiber conditions are inconsistent")
    u = 0
    for j in _bits(combo):
        u ^= H.reps[j]
    U2 = Cochain(pair, k, H.canonical(u))

    data = ThomData(xi, E, pair, absolute, base, projection, U2, cycles, cycles_z, {})
    for i in range(base.dim + 1):
        Hb = base.cohomology(i)
        Ht = pair.cohomology(i + k)
        coords = []
        for rep in Hb.reps:
            img = data.phi_of(rep, i)
            c = Ht.coordinates(img.bits)
            coords.append(sum(v << j for j, v in enumerate(c)))
        ech = GF2Echelon()
        independent = all(ech.add(c) for c in coords)
        data.thom_iso[i] = independent and len(Hb) == len(Ht)
        data.phi[i] = coords
    if integral:
        data.UZ, data.uz_note = _integral_thom(data)
    return data


def _integral_thom(data: ThomData):
    """Integer relative cocycle evaluating to +-1 on every fiber cycle, or None.

    Solves ``delta u = 0`` with value +1 on the first fiber; any solution is
    then a Thom class exactly when it evaluates to +-1 on every other fiber.
    """
    E, k = data.E, data.rank
    rel = relative_ids(E, data.pair)
    cols = {j: c for c, j in enumerate(rel[k])}
    rows = coboundary_rows(E, k, rel)
    order = list(data.bundle.base.items)
    first = data.fiber_cycles_z[order[0]]
    ev_row = {cols[j]: v for j, v in first.items()}
    x = sparse_integer_solve(rows + [ev_row], [0] * len(rows) + [1], len(rel[k]))
    if x is None:
        return None, "no integral relative cocycle is +1 on the first fiber"
    u = {rel[k][c]: v for c, v in enumerate(x) if v}
    for s in order:
        val = sum(coef * u.get(j, 0) for j, coef in data.fiber_cycles_z[s].items())
        if abs(val) != 1:
            return None, f"fiber over {s!r} evaluates to {val}, not a generator"
    return u, "integral Thom class found"


@dataclass
class SWClassList:
    base: ChainComplexGF2
    classes: list                      # w_i as base cochains (canonical representatives)
    coords: list                       # coordinates in the base cohomology basis
    checks: dict = field(default_factory=dict)

    def __getitem__(self, i: int) -> Cochain:
        if i < len(self.classes):
            return self.classes[i]
        return Cochain(self.base, i, 0)

    def is_zero(self, i: int) -> bool:
        return i >= len(self.classes) or not any(self.coords[i])

    @property
    def rank(self) -> int:
        return len(self.classes) - 1

    def summary(self) -> str:
        terms = ["1" if i == 0 else f"w{i}" for i in range(len(self.classes)) if not self.is_zero(i)]
        return " + ".join(terms) if terms else "0"


def _class_coords(cx: ChainComplexGF2, d: int, bits: int) -> list[int]:
    if d > cx.dim:
        return []
    return cx.cohomology(d).coordinates(bits)


def _from_coords(cx: ChainComplexGF2, d: int, coords: Sequence[int]) -> int:
    out = 0
    for c, r in zip(coords, cx.cohomology(d).reps if d <= cx.dim else ()):
        if c:
            out ^= r
    return out


def sw_classes(thom: ThomData) -> SWClassList:
    """``w_i = phi^{-1}(Sq^i U2)`` for ``i = 0..k``, solved in the fixed bases."""
    k, base = thom.rank, thom.base
    classes, coords = [], []
    for i in range(k + 1):
        sq = steenrod_square(i, thom.U2)
        if i > base.dim or i + k > thom.E.dim:
            if sq.bits and i + k <= thom.E.dim and not thom.pair.cohomology(i + k).is_coboundary(sq.bits):
                raise BundleError(f"Sq^{i} U is nonzero but the base has no degree {i}")
            classes.append(Cochain(base, i, 0))
            coords.append([])
            continue
        target = thom.pair.cohomology(i + k).coordinates(sq.bits)
        tmask = sum(v << j for j, v in enumerate(target))
        combo = _solve_gf2(thom.phi[i], tmask)
        if combo is None:
            raise BundleError(f"Sq^{i} U is not in the image of the Thom map")
        c = [combo >> j & 1 for j in range(len(thom.phi[i]))]
        classes.append(Cochain(base, i, _from_coords(base, i, c)))
        coords.append(c)
    checks = {
        "w0 = 1": coords[0] == [1] if base.cohomology(0).dim == 1 else False,
        "w_i = 0 above rank": all(steenrod_square(i, thom.U2).bits == 0
                                  for i in range(k + 1, k + base.dim + 2)),
        "thom isomorphism": thom.iso_verified,
    }
    return SWClassList(base, classes, coords, checks)


def stiefel_whitney(xi: MatroidBundle) -> SWClassList:
    return sw_classes(thom_class(xi, integral=False))


@dataclass
class WhitneyReport:
    degrees: dict        # n -> (lhs coords, rhs coords, equal)
    relabeled: bool = False

    @property
    def ok(self) -> bool:
        return all(eq for _, _, eq in self.degrees.values())


def whitney_sum_check(xi1: MatroidBundle, xi2: MatroidBundle) -> WhitneyReport:
    """Compare ``w(xi1 + xi2)`` with ``w(xi1) w(xi2)`` degree by degree."""
    if xi1.base != xi2.base:
        raise BundleError("Whitney sum needs a common base")
    # equal bases may list their items in another order; compute everything on xi1's
    xi2 = MatroidBundle(xi1.base, xi2.assign, check=False)
    relabel = bool(set(xi1.elements) & set(xi2.elements))
    total = whitney_sum(xi1, xi2, relabel=relabel)
    w1, w2, w = stiefel_whitney(xi1), stiefel_whitney(xi2), stiefel_whitney(total)
    base = w.base
    degrees = {}
    for n in range(total.rank + 1):
        if n > base.dim:
            degrees[n] = ([], [], True)
            continue
        rhs = 0
        for i in range(n + 1):
            rhs ^= cup_product(w1[i], w2[n - i]).bits if i <= w1.rank and n - i <= w2.rank else 0
        lhs_c = _class_coords(base, n, w[n].bits)
        rhs_c = _class_coords(base, n, rhs)
        degrees[n] = (lhs_c, rhs_c, lhs_c == rhs_c)
    return WhitneyReport(degrees, relabel)


def pull_back_classes(f: PosetMap, w: SWClassList) -> list[list[int]]:
    """Coordinates of ``f^* w_i`` in the cohomology of the source base."""
    src = base_complex(f.source)
    out = []
    for i, c in enumerate(w.classes):
        if i > src.dim:
            out.append([])
            continue
        pb = pullback_cochain(w.base, c.bits, i, src, f.assignment)
        out.append(src.cohomology(i).coordinates(pb.bits))
    return out


# orientations -------------------------------------------------------------

def _relative_sign(hi: Chirotope, lo: Chirotope) -> int | None:
    """``e`` with ``hi >= e * lo`` in the chirotope weak order, or None."""
    if hi.weak_geq(lo):
        return 1
    if hi.weak_geq(-lo):
        return -1
    return None


def orientation_lift(xi: MatroidBundle) -> dict | None:
    """A monotone choice of chirotope per base item, or None when none exists.

    Signs are propagated along comparable pairs of the base; a contradiction
    means no lift.  Rank 0 bundles lift trivially.
    """
    base = xi.base
    if xi.rank == 0:
        chi0 = Chirotope(xi.elements, 0, (1,))
        return {s: chi0 for s in base.items}
    ref = {}
    cache = {}
    for s in base.items:
        M = xi.assign[s]
        if M not in cache:
            cache[M] = M.chirotope_pair()[0]
        ref[s] = cache[M]
    nbrs: dict = {s: [] for s in base.items}
    for lo, hi in base.strict_pairs():
        e = _relative_sign(ref[hi], ref[lo])
        if e is None:
            return None
        nbrs[lo].append((hi, e))
        nbrs[hi].append((lo, e))
    sign: dict = {}
    for root in base.items:
        if root in sign:
            continue
        sign[root] = 1
        stack = [root]
        while stack:
            a = stack.pop()
            for b, e in nbrs[a]:
                want = sign[a] * e
                if b not in sign:
                    sign[b] = want
                    stack.append(b)
                elif sign[b] != want:
                    return None
    return {s: ref[s] if sign[s] == 1 else -ref[s] for s in base.items}


# Euler class ----------------------------------------------------------------

@dataclass
class EulerClass:
    degree: int
    cochain: dict          # base k-simplex index -> integer value
    is_zero: bool
    iso_verified: bool
    base: SimplicialComplex


def _pstar_iso(thom: ThomData, d: int) -> bool:
    """Mod 2 check that ``p^*: H^d(B) -> H^d(E)`` is an isomorphism."""
    if d > thom.base.dim:
        return d > thom.E.dim or thom.absolute.cohomology(d).dim == 0
    Hb, He = thom.base.cohomology(d), thom.absolute.cohomology(d)
    if len(Hb) != len(He):
        return False
    ech = GF2Echelon()
    for rep in Hb.reps:
        pb = pullback_cochain(thom.base, rep, d, thom.absolute, thom.projection)
        c = He.coordinates(pb.bits)
        if not ech.add(sum(v << j for j, v in enumerate(c))):
            return False
    return True


def euler_class(thom: ThomData) -> EulerClass:
    """Solve ``UZ|_E = p^* beta + delta gamma`` with ``delta beta = 0``; returns the class of beta."""
    if thom.UZ is None:
        raise BundleError("the bundle is not orientable: no integral Thom class")
    k = thom.rank
    E, B = thom.E, thom.base.K
    nB = len(B.simplices[k]) if k <= B.dim else 0
    nG = len(E.simplices[k - 1]) if k >= 1 else 0
    bpos = {v: i for i, v in enumerate(B.vertices)}
    bidx = B.index(k) if k <= B.dim else {}
    rows, rhs = [], []
    lower = E.index(k - 1) if k >= 1 else {}
    for j, x in enumerate(E.simplices[k] if k <= E.dim else ()):
        row = {}
        img = tuple(bpos[thom.projection[E.vertices[v]]] for v in x)
        if all(a < b for a, b in zip(img, img[1:])):
            row[bidx[img]] = 1
        for t in range(k + 1):
            f = x[:t] + x[t + 1:]
            c = nB + lower[f]
            row[c] = row.get(c, 0) + (-1 if t % 2 else 1)
        rows.append({c: v for c, v in row.items() if v})
        rhs.append(thom.UZ.get(j, 0))
    for row in coboundary_rows(B, k):
        rows.append(dict(row))
        rhs.append(0)
    sol = sparse_integer_solve(rows, rhs, nB + nG)
    if sol is None:
        raise BundleError("the restricted Thom class is not pulled back from the base")
    beta = {i: v for i, v in enumerate(sol[:nB]) if v}
    zero = integer_is_coboundary(B, k, beta)
    return EulerClass(k, beta, zero, _pstar_iso(thom, k), B)


def euler_product_check(e1: EulerClass, e2: EulerClass, e12: EulerClass) -> bool:
    """``e(xi1 + xi2) = +-e(xi1) e(xi2)`` on a shared base (sign fixed by the orientation choice)."""
    B = e12.base
    prod = integer_cup(B, e1.degree, e1.cochain, e2.degree, e2.cochain)
    for sgn in (1, -1):
        diff = dict(e12.cochain)
        for i, v in prod.items():
            diff[i] = diff.get(i, 0) - sgn * v
        if integer_is_coboundary(B, e12.degree, {i: v for i, v in diff.items() if v}):
            return True
    return False
