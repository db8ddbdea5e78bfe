"""Mod 2 and integral (co)homology of simplicial pairs, cup-i products and Steenrod squares.

Cochains over GF(2) are Python ints used as bitsets over the simplices of one
dimension of the ambient complex ``K``.  A relative cochain of ``(K, L)`` is a
cochain whose support avoids ``L``; coboundaries of such cochains avoid ``L``
automatically, so absolute and relative cochains share one indexing.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from .linalg import (GF2Echelon, gf2_kernel, gf2_rank, sparse_elementary_divisors,
                     sparse_integer_solve)
from .poset import SimplicialComplex

__all__ = [
    "ChainComplexGF2",
    "Cochain",
    "CohomologyGF2",
    "betti_gf2",
    "reduced_betti_gf2",
    "cohomology_basis",
    "cup_product",
    "cup_i",
    "steenrod_square",
    "pullback_cochain",
    "IntegerChainData",
    "integer_chain_data",
    "integer_homology",
    "boundary_rows",
    "boundary_matrix",
    "coboundary_rows",
    "relative_ids",
    "integer_cup",
    "integer_coboundary",
    "integer_is_coboundary",
]


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class ChainComplexGF2:
    """Simplicial chains of a pair ``(K, L)`` with GF(2) coefficients."""

    def __init__(self, K: SimplicialComplex, L: SimplicialComplex | Iterable | None = None,
                 _rel: list[int] | None = None):
        self.K = K
        top = K.dim
        self._faces: dict[int, list[int]] = {}
        self._cofaces: dict[int, list[int]] = {}
        self._cohom: dict[int, CohomologyGF2] = {}
        if _rel is not None:
            self.rel = _rel
            self.relative = True
            return
        self.rel = []
        in_l = [set() for _ in range(top + 1)]
        if L is not None:
            if isinstance(L, SimplicialComplex):
                in_l = K.subcomplex_positions(L)
            else:
                for s in L:
                    s = tuple(s)
                    if s not in K:
                        raise ValueError(f"not a subcomplex: {s} is not a simplex of K")
                    in_l[len(s) - 1].add(s)
                for d in range(1, top + 1):
                    for s in in_l[d]:
                        if any(f not in in_l[d - 1] for f in combinations(s, d)):
                            raise ValueError(f"not a subcomplex: a face of {s} is missing")
        for d in range(top + 1):
            idx = K.index(d)
            self.rel.append(sum(1 << idx[s] for s in K.simplices[d] if s not in in_l[d]))
        self.relative = L is not None

    @classmethod
    def relative_to_vertices(cls, K: SimplicialComplex, vertices: Iterable) -> "ChainComplexGF2":
        """The pair ``(K, L)`` with ``L`` the full subcomplex on the given vertex labels."""
        keep = set(vertices)
        vmask = sum(1 << i for i, v in enumerate(K.vertices) if v in keep)
        rel = []
        for d in range(K.dim + 1):
            rel.append(sum(1 << j for j, s in enumerate(K.simplices[d])
                           if any(not vmask >> v & 1 for v in s)))
        return cls(K, _rel=rel)

    def in_subcomplex(self, d: int, i: int) -> bool:
        return not self.rel[d] >> i & 1

    @property
    def dim(self) -> int:
        return self.K.dim

    def count(self, d: int) -> int:
        """Number of ``d``-simplices of K not in L."""
        if not 0 <= d <= self.dim:
            return 0
        return bin(self.rel[d]).count("1")

    def faces(self, d: int) -> list[int]:
        """Boundary of each ``d``-simplex as a bitset over ``(d-1)``-simplices (absolute)."""
        if d not in self._faces:
            if d == 0:
                self._faces[d] = [0] * len(self.K.simplices[0])
            else:
                lower = self.K.index(d - 1)
                self._faces[d] = [sum(1 << lower[f] for f in combinations(s, d))
                                  for s in self.K.simplices[d]]
        return self._faces[d]

    def cofaces(self, d: int) -> list[int]:
        """Coboundary of each elementary ``d``-cochain as a bitset over ``(d+1)``-simplices."""
        if d not in self._cofaces:
            out = [0] * len(self.K.simplices[d]) if d <= self.dim else []
            if d + 1 <= self.dim:
                for j, m in enumerate(self.faces(d + 1)):
                    for i in _bits(m):
                        out[i] |= 1 << j
            self._cofaces[d] = out
        return self._cofaces[d]

    def boundary_rank(self, d: int) -> int:
        """Rank of the relative boundary map ``C_d -> C_{d-1}``."""
        if d <= 0 or d > self.dim:
            return 0
        mask = self.rel[d - 1]
        faces = self.faces(d)
        return gf2_rank(faces[i] & mask for i in _bits(self.rel[d]))

    def betti(self, max_dim: int | None = None) -> list[int]:
        top = self.dim if max_dim is None else min(max_dim, self.dim)
        ranks = [self.boundary_rank(d) for d in range(top + 2)]
        return [self.count(d) - ranks[d] - ranks[d + 1] for d in range(top + 1)]

    def coboundary(self, d: int, bits: int) -> int:
        if d + 1 > self.dim:
            return 0
        cof = self.cofaces(d)
        out = 0
        for i in _bits(bits):
            out ^= cof[i]
        return out & self.rel[d + 1]

    def is_cocycle(self, d: int, bits: int) -> bool:
        return self.coboundary(d, bits) == 0

    def cohomology(self, d: int) -> "CohomologyGF2":
        if d not in self._cohom:
            self._cohom[d] = CohomologyGF2(self, d)
        return self._cohom[d]

    def simplex(self, d: int, i: int) -> tuple:
        return self.K.labels(self.K.simplices[d][i])

    def cochain(self, d: int, bits: int) -> "Cochain":
        return Cochain(self, d, bits)

    def indicator(self, d: int, simplices: Iterable[tuple]) -> int:
        """Bitset of the given simplices (as vertex-position tuples)."""
        idx = self.K.index(d)
        return sum(1 << idx[tuple(s)] for s in simplices)


@dataclass(frozen=True)
class Cochain:
    complex: ChainComplexGF2
    degree: int
    bits: int

    def support(self) -> list[tuple]:
        return [self.complex.simplex(self.degree, i) for i in _bits(self.bits)]

    def support_indices(self) -> list[int]:
        return list(_bits(self.bits))

    def __add__(self, other: "Cochain") -> "Cochain":
        if other.degree != self.degree or other.complex is not self.complex:
            raise ValueError("cochains live in different groups")
        return Cochain(self.complex, self.degree, self.bits ^ other.bits)

    def is_cocycle(self) -> bool:
        return self.complex.is_cocycle(self.degree, self.bits)

    def is_zero(self) -> bool:
        return self.bits == 0


class CohomologyGF2:
    """A basis of ``H^d(K, L; GF(2))`` with a coordinate solver.

    Representatives are reduced modulo coboundaries to the smallest integer in
    their coset, i.e. supports free of the highest-index simplices possible.
    """

    def __init__(self, cx: ChainComplexGF2, d: int):
        self.cx = cx
        self.degree = d
        self._image = GF2Echelon()
        if d >= 1:
            cof = cx.cofaces(d - 1)
            mask = cx.rel[d] if d <= cx.dim else 0
            for i in _bits(cx.rel[d - 1]):
                self._image.add(cof[i] & mask, tag=0)
        reps = []
        self._all = GF2Echelon()
        for p, row in self._image.rows.items():
            self._all.add(row, tag=0)
        if d <= cx.dim:
            rel_ids = list(_bits(cx.rel[d]))
            cof = cx.cofaces(d)
            mask = cx.rel[d + 1] if d + 1 <= cx.dim else 0
            kernel = gf2_kernel([cof[i] & mask for i in rel_ids])
            for combo in kernel:
                z = 0
                for j in _bits(combo):
                    z |= 1 << rel_ids[j]
                rep, _ = self._image.reduce(z)
                if self._all.add(rep, tag=1 << len(reps)):
                    reps.append(rep)
        self.reps = reps

    def __len__(self) -> int:
        return len(self.reps)

    @property
    def dim(self) -> int:
        return len(self.reps)

    def basis(self) -> list[Cochain]:
        return [Cochain(self.cx, self.degree, r) for r in self.reps]

    def coordinates(self, bits: int) -> list[int]:
        """Coordinates of the class of the cocycle ``bits`` in the basis ``reps``."""
        res, tag = self._all.reduce(bits)
        if res:
            raise ValueError("not a cocycle of this complex")
        return [tag >> j & 1 for j in range(len(self.reps))]

    def is_coboundary(self, bits: int) -> bool:
        return not any(self.coordinates(bits))

    def canonical(self, bits: int) -> int:
        """Canonical representative of the class of ``bits``."""
        coords = self.coordinates(bits)
        out = 0
        for c, r in zip(coords, self.reps):
            if c:
                out ^= r
        return out


def betti_gf2(K: SimplicialComplex, L=None, max_dim: int | None = None) -> list[int]:
    """``dim H_d(K, L; GF(2))`` for ``d = 0..dim K`` (or up to ``max_dim``)."""
    return ChainComplexGF2(K, L).betti(max_dim)


def reduced_betti_gf2(K: SimplicialComplex, max_dim: int | None = None) -> list[int]:
    b = betti_gf2(K, max_dim=max_dim)
    if b:
        b[0] -= 1
    return b


def cohomology_basis(K: SimplicialComplex, d: int, L=None) -> list[Cochain]:
    return ChainComplexGF2(K, L).cohomology(d).basis()


# products ------------------------------------------------------------------

def _cup_bits(cx: ChainComplexGF2, p: int, a: int, q: int, b: int) -> int:
    n = p + q
    if n > cx.dim or not a or not b:
        return 0
    K = cx.K
    ip, iq = K.index(p), K.index(q)
    out = 0
    for i, x in enumerate(K.simplices[n]):
        if a >> ip[x[:p + 1]] & 1 and b >> iq[x[p:]] & 1:
            out |= 1 << i
    return out


def _product_complex(alpha: Cochain, beta: Cochain) -> ChainComplexGF2:
    """Complex holding a product: both factors must live on one K; the result
    is relative as soon as one factor is."""
    if alpha.complex.K is not beta.complex.K:
        raise ValueError("cochains on different complexes")
    if beta.complex.relative:
        return beta.complex
    return alpha.complex


def cup_product(alpha: Cochain, beta: Cochain) -> Cochain:
    """Alexander-Whitney product: front p-face times back q-face."""
    cx = _product_complex(alpha, beta)
    n = alpha.degree + beta.degree
    bits = _cup_bits(cx, alpha.degree, alpha.bits, beta.degree, beta.bits)
    if bits:
        bits &= cx.rel[n]
    return Cochain(cx, n, bits)


@lru_cache(maxsize=None)
def _cup_i_terms(n: int, p: int, q: int, i: int) -> tuple:
    """Face pairs for the cup-i formula on an n-simplex.

    Sum over U in {0..n} with |U| = n - i; writing U = {u_1 < ... < u_r},
    U0 = {u_j : u_j + j even} and U1 = {u_j : u_j + j odd}; the term is
    alpha(x with U0 deleted) * beta(x with U1 deleted).
    """
    terms = []
    for U in combinations(range(n + 1), n - i):
        u0 = {u for j, u in enumerate(U, start=1) if (u + j) % 2 == 0}
        u1 = set(U) - u0
        if len(u0) != n - p or len(u1) != n - q:
            continue
        keep0 = tuple(v for v in range(n + 1) if v not in u0)
        keep1 = tuple(v for v in range(n + 1) if v not in u1)
        terms.append((keep0, keep1))
    return tuple(terms)


def cup_i(alpha: Cochain, beta: Cochain, i: int) -> Cochain:
    """Steenrod's cup-i product; ``cup_i(a, b, 0)`` is the cup product."""
    cx = _product_complex(alpha, beta)
    p, q = alpha.degree, beta.degree
    n = p + q - i
    if i < 0 or n > cx.dim or n < max(p, q) or not alpha.bits or not beta.bits:
        return Cochain(cx, max(n, 0), 0)
    K = cx.K
    ip, iq = K.index(p), K.index(q)
    terms = _cup_i_terms(n, p, q, i)
    a, b = alpha.bits, beta.bits
    out = 0
    for idx, x in enumerate(K.simplices[n]):
        val = 0
        for keep0, keep1 in terms:
            if (a >> ip[tuple(x[v] for v in keep0)] & 1
                    and b >> iq[tuple(x[v] for v in keep1)] & 1):
                val ^= 1
        if val:
            out |= 1 << idx
    return Cochain(cx, n, out & cx.rel[n])


def steenrod_square(k: int, alpha: Cochain) -> Cochain:
    """``Sq^k alpha = alpha cup_{p-k} alpha`` for a degree-p cochain (zero for k > p)."""
    if k < 0:
        raise ValueError("Sq^k needs k >= 0")
    p = alpha.degree
    if k > p:
        return Cochain(alpha.complex, p + k, 0)
    return cup_i(alpha, alpha, p - k)


def pullback_cochain(target: ChainComplexGF2, alpha_bits: int, degree: int,
                     source: ChainComplexGF2, vertex_map: Mapping) -> Cochain:
    """Pull a cochain back along an order-compatible simplicial map.

    ``vertex_map`` sends source vertex labels to target vertex labels and must
    be weakly increasing along every source simplex; a simplex whose image is
    degenerate gets value 0.
    """
    tpos = {v: i for i, v in enumerate(target.K.vertices)}
    idx = target.K.index(degree) if degree <= target.dim else {}
    out = 0
    for j, s in enumerate(source.K.simplices[degree] if degree <= source.dim else ()):
        img = tuple(tpos[vertex_map[source.K.vertices[v]]] for v in s)
        if any(a > b for a, b in zip(img, img[1:])):
            raise ValueError(f"vertex map reverses the order on {source.K.labels(s)}")
        if any(a == b for a, b in zip(img, img[1:])):
            continue
        t = idx.get(img)
        if t is None:
            raise ValueError(f"image of {source.K.labels(s)} is not a simplex")
        if alpha_bits >> t & 1:
            out |= 1 << j
    return Cochain(source, degree, out)


# integer coefficients --------------------------------------------------------

def boundary_rows(K: SimplicialComplex, d: int, rel: Sequence[Sequence[int]] | None = None) -> list[dict]:
    """Signed boundary ``C_d -> C_{d-1}`` as sparse rows (one per (d-1)-simplex).

    ``rel`` gives, per dimension, the sorted admissible simplex indices; row
    and column numbers are positions in those lists.
    """
    rows_ids = rel[d - 1] if rel is not None else range(len(K.simplices[d - 1]))
    cols_ids = rel[d] if rel is not None else range(len(K.simplices[d]))
    row_pos = {i: r for r, i in enumerate(rows_ids)}
    lower = K.index(d - 1)
    rows: list[dict] = [dict() for _ in rows_ids]
    for c, j in enumerate(cols_ids):
        s = K.simplices[d][j]
        for k in range(d + 1):
            r = row_pos.get(lower[s[:k] + s[k + 1:]])
            if r is not None:
                rows[r][c] = rows[r].get(c, 0) + (-1 if k % 2 else 1)
    return rows


def boundary_matrix(K: SimplicialComplex, d: int, rel=None) -> list[list[int]]:
    """Dense version of :func:`boundary_rows`."""
    rows = boundary_rows(K, d, rel)
    ncols = len(rel[d]) if rel is not None else len(K.simplices[d])
    return [[r.get(c, 0) for c in range(ncols)] for r in rows]


def coboundary_rows(K: SimplicialComplex, d: int, rel=None) -> list[dict]:
    """Signed coboundary ``C^d -> C^{d+1}`` as sparse rows (one per (d+1)-simplex)."""
    if d + 1 > K.dim:
        return []
    b = boundary_rows(K, d + 1, rel)
    ncols = len(rel[d + 1]) if rel is not None else len(K.simplices[d + 1])
    out = [dict() for _ in range(ncols)]
    for r, row in enumerate(b):
        for c, v in row.items():
            out[c][r] = v
    return out


def relative_ids(K: SimplicialComplex, L=None) -> list[list[int]]:
    """Per dimension, the indices of simplices of K not in L."""
    if L is None:
        return [list(range(len(layer))) for layer in K.simplices]
    cx = L if isinstance(L, ChainComplexGF2) else ChainComplexGF2(K, L)
    return [list(_bits(cx.rel[d])) for d in range(K.dim + 1)]


@dataclass
class IntegerChainData:
    """Relative integer chain data: admissible simplices and elementary divisors per degree."""

    K: SimplicialComplex
    rel: list[list[int]]
    divisors: dict

    def homology(self) -> list[tuple[int, list[int]]]:
        out = []
        for d in range(self.K.dim + 1):
            c = len(self.rel[d])
            nxt = self.divisors.get(d + 1, [])
            free = c - len(self.divisors.get(d, [])) - len(nxt)
            out.append((free, [x for x in nxt if x > 1]))
        return out


def integer_chain_data(K: SimplicialComplex, L=None) -> IntegerChainData:
    rel = relative_ids(K, L)
    divisors = {}
    for d in range(1, K.dim + 1):
        if rel[d] and rel[d - 1]:
            divisors[d] = sparse_elementary_divisors(boundary_rows(K, d, rel))
        else:
            divisors[d] = []
    return IntegerChainData(K, rel, divisors)


def integer_homology(K: SimplicialComplex, L=None) -> list[tuple[int, list[int]]]:
    """Per degree: (free rank, torsion divisors > 1) of ``H_d(K, L; Z)``."""
    return integer_chain_data(K, L).homology()


def integer_cup(K: SimplicialComplex, p: int, a: Mapping[int, int], q: int,
                b: Mapping[int, int]) -> dict[int, int]:
    """Alexander-Whitney cup of integer cochains given as ``{simplex index: value}``."""
    n = p + q
    if n > K.dim:
        return {}
    ip, iq = K.index(p), K.index(q)
    out = {}
    for i, x in enumerate(K.simplices[n]):
        v = a.get(ip[x[:p + 1]], 0)
        if v:
            w = b.get(iq[x[p:]], 0)
            if w:
                out[i] = v * w
    return out


def integer_is_coboundary(K: SimplicialComplex, d: int, c: Mapping[int, int]) -> bool:
    """Whether the integer d-cochain ``c`` is ``delta`` of some (d-1)-cochain on K."""
    if not any(c.values()):
        return True
    if d == 0:
        return False
    rows = coboundary_rows(K, d - 1)
    rhs = [c.get(i, 0) for i in range(len(K.simplices[d]))]
    return sparse_integer_solve(rows, rhs, len(K.simplices[d - 1])) is not None


def integer_coboundary(K: SimplicialComplex, d: int, c: Mapping[int, int]) -> dict[int, int]:
    out: dict[int, int] = {}
    for j, row in enumerate(coboundary_rows(K, d)):
        v = sum(w * c.get(i, 0) for i, w in row.items())
        if v:
            out[j] = v
    return out
