"""Finite posets, order complexes, and greedy collapses.

Relations are stored as bitmasks: ``up[i]`` holds every ``j`` with
``items[i] <= items[j]`` (including ``i`` itself).
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Hashable, Iterable, Iterator, Mapping, Sequence

__all__ = [
    "NotAPartialOrder",
    "NotOrderPreserving",
    "Poset",
    "PosetMap",
    "SimplicialComplex",
    "CollapseResult",
    "order_complex",
    "barycentric",
    "lower_interval",
    "upper_interval",
    "fiber_sub",
    "connected_components",
    "collapse_certificate",
    "chain_poset",
    "antichain",
]


class NotAPartialOrder(ValueError):
    pass


class NotOrderPreserving(ValueError):
    def __init__(self, pair):
        super().__init__(f"map is not order-preserving on {pair[0]!r} <= {pair[1]!r}")
        self.pair = pair


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class Poset:
    __slots__ = ("items", "index", "up", "down", "_ext", "_covers")

    def __init__(self, items: Sequence[Hashable], up: Sequence[int], check: bool = True):
        self.items = tuple(items)
        if len(set(self.items)) != len(self.items):
            raise ValueError("poset items must be distinct")
        self.index = {x: i for i, x in enumerate(self.items)}
        n = len(self.items)
        self.up = tuple(up[i] | (1 << i) for i in range(n))
        down = [0] * n
        for i in range(n):
            for j in _bits(self.up[i]):
                down[j] |= 1 << i
        self.down = tuple(down)
        self._ext = None
        self._covers = None
        if check:
            for i in range(n):
                if (self.up[i] & self.down[i]) != (1 << i):
                    j = next(j for j in _bits(self.up[i] & self.down[i]) if j != i)
                    raise NotAPartialOrder(f"antisymmetry fails for {self.items[i]!r}, "
                                           f"{self.items[j]!r}")
                for j in _bits(self.up[i]):
                    if self.up[j] & ~self.up[i]:
                        raise NotAPartialOrder(f"transitivity fails above {self.items[i]!r}")

    # -- constructors -------------------------------------------------------
    @classmethod
    def from_leq(cls, items: Sequence, leq: Callable[[object, object], bool]) -> "Poset":
        items = list(items)
        up = []
        for a in items:
            m = 0
            for j, b in enumerate(items):
                if a is b or leq(a, b):
                    m |= 1 << j
            up.append(m)
        return cls(items, up)

    @classmethod
    def from_covers(cls, items: Sequence, covers: Iterable[tuple]) -> "Poset":
        """Transitive closure of the relations ``x < y`` listed in ``covers``."""
        items = list(items)
        index = {x: i for i, x in enumerate(items)}
        succ = [0] * len(items)
        for x, y in covers:
            if x not in index or y not in index:
                raise ValueError(f"cover relation {x!r} < {y!r} mentions an unknown item")
            succ[index[x]] |= 1 << index[y]
        up = [None] * len(items)
        state = [0] * len(items)

        def visit(i):
            if state[i] == 1:
                raise NotAPartialOrder(f"cycle through {items[i]!r}")
            if state[i] == 2:
                return up[i]
            state[i] = 1
            m = 1 << i
            for j in _bits(succ[i]):
                m |= visit(j)
            state[i] = 2
            up[i] = m
            return m

        for i in range(len(items)):
            visit(i)
        return cls(items, up, check=False)

    # -- basic queries ------------------------------------------------------
    def __len__(self) -> int:
        return len(self.items)

    def __iter__(self):
        return iter(self.items)

    def __contains__(self, x) -> bool:
        return x in self.index

    def __repr__(self) -> str:
        return f"Poset({len(self)} items)"

    def __eq__(self, other) -> bool:
        if not isinstance(other, Poset):
            return NotImplemented
        if set(self.items) != set(other.items):
            return False
        return all(self.leq(a, b) == other.leq(a, b) for a in self.items for b in self.items)

    __hash__ = None

    def idx(self, x) -> int:
        try:
            return self.index[x]
        except KeyError:
            raise KeyError(f"{x!r} is not an element of the poset") from None

    def leq(self, a, b) -> bool:
        return bool(self.up[self.idx(a)] >> self.idx(b) & 1)

    def lt(self, a, b) -> bool:
        return a != b and self.leq(a, b)

    def comparable(self, a, b) -> bool:
        return self.leq(a, b) or self.leq(b, a)

    def cover_pairs(self) -> list[tuple]:
        """Hasse diagram edges ``(x, y)`` with ``y`` covering ``x``."""
        if self._covers is None:
            out = []
            for i in range(len(self)):
                above = self.up[i] & ~(1 << i)
                not_cover = 0
                for k in _bits(above):
                    not_cover |= self.up[k] & ~(1 << k)
                for j in _bits(above & ~not_cover):
                    out.append((self.items[i], self.items[j]))
            self._covers = out
        return list(self._covers)

    def strict_pairs(self) -> Iterator[tuple]:
        """All pairs ``(x, y)`` with ``x < y``."""
        for i in range(len(self)):
            for j in _bits(self.up[i] & ~(1 << i)):
                yield self.items[i], self.items[j]

    def minimal(self) -> list:
        return [x for i, x in enumerate(self.items) if self.down[i] == 1 << i]

    def maximal(self) -> list:
        return [x for i, x in enumerate(self.items) if self.up[i] == 1 << i]

    def maximum(self):
        full = (1 << len(self)) - 1
        for i, x in enumerate(self.items):
            if self.down[i] == full:
                return x
        return None

    def minimum(self):
        full = (1 << len(self)) - 1
        for i, x in enumerate(self.items):
            if self.up[i] == full:
                return x
        return None

    def depths(self) -> list[int]:
        """Length of the longest strictly descending chain below each item."""
        depth = [None] * len(self)

        def d(i):
            if depth[i] is None:
                below = self.down[i] & ~(1 << i)
                depth[i] = 1 + max((d(j) for j in _bits(below)), default=-1)
            return depth[i]

        return [d(i) for i in range(len(self))]

    def linear_extension(self) -> list[int]:
        """Stable topological order by (depth, label); indices into ``items``."""
        if self._ext is None:
            depth = self.depths()
            if all(isinstance(x, str) for x in self.items):
                key = lambda i: (depth[i], self.items[i])
            else:
                key = lambda i: (depth[i], i)
            self._ext = sorted(range(len(self)), key=key)
        return list(self._ext)

    # -- derived posets -----------------------------------------------------
    def subposet(self, subset: Iterable) -> "Poset":
        chosen = sorted({self.idx(x) for x in subset})
        return self._induced(chosen)

    def _induced(self, chosen: Sequence[int]) -> "Poset":
        pos = {i: k for k, i in enumerate(chosen)}
        up = []
        for i in chosen:
            m = 0
            for j in _bits(self.up[i]):
                if j in pos:
                    m |= 1 << pos[j]
            up.append(m)
        return Poset([self.items[i] for i in chosen], up, check=False)

    def op(self) -> "Poset":
        return Poset(self.items, self.down, check=False)

    def product(self, other: "Poset") -> "Poset":
        items = [(a, b) for a in self.items for b in other.items]
        m = len(other)
        up = []
        for i in range(len(self)):
            for j in range(len(other)):
                mask = 0
                for i2 in _bits(self.up[i]):
                    for j2 in _bits(other.up[j]):
                        mask |= 1 << (i2 * m + j2)
                up.append(mask)
        return Poset(items, up, check=False)

    def chains(self, max_size: int | None = None) -> Iterator[tuple[int, ...]]:
        """Nonempty chains as increasing tuples of positions in the linear extension."""
        ext = self.linear_extension()
        pos = {i: p for p, i in enumerate(ext)}
        above = []
        for i in ext:
            m = 0
            for j in _bits(self.up[i] & ~(1 << i)):
                m |= 1 << pos[j]
            above.append(m)
        limit = len(self) if max_size is None else max_size

        def extend(chain, allowed):
            yield chain
            if len(chain) >= limit:
                return
            for p in _bits(allowed):
                yield from extend(chain + (p,), allowed & above[p])

        for p in range(len(ext)):
            yield from extend((p,), above[p])


def chain_poset(labels: Sequence) -> Poset:
    """Total order ``labels[0] < labels[1] < ...``."""
    return Poset.from_covers(labels, zip(labels, labels[1:]))


def antichain(labels: Sequence) -> Poset:
    return Poset(labels, [0] * len(labels), check=False)


class PosetMap:
    """Order-preserving map of finite posets."""

    __slots__ = ("source", "target", "assignment")

    def __init__(self, source: Poset, target: Poset, assignment: Mapping, check: bool = True):
        self.source = source
        self.target = target
        self.assignment = {x: assignment[x] for x in source.items}
        for x, y in self.assignment.items():
            if y not in target:
                raise ValueError(f"image {y!r} of {x!r} is not in the target poset")
        if check:
            for a, b in source.strict_pairs():
                if not target.leq(self.assignment[a], self.assignment[b]):
                    raise NotOrderPreserving((a, b))

    def __call__(self, x):
        return self.assignment[x]

    def compose(self, inner: "PosetMap") -> "PosetMap":
        """``self o inner``."""
        return PosetMap(inner.source, self.target,
                        {x: self.assignment[inner(x)] for x in inner.source.items}, check=False)

    @classmethod
    def identity(cls, poset: Poset) -> "PosetMap":
        return cls(poset, poset, {x: x for x in poset.items}, check=False)


class SimplicialComplex:
    """Ordered abstract simplicial complex.

    Vertices are listed in ``vertex_order``; a simplex is a strictly increasing
    tuple of vertex positions.  ``simplices[d]`` is the sorted list of
    ``d``-simplices.
    """

    __slots__ = ("vertices", "simplices", "_index")

    def __init__(self, vertices: Sequence, simplices: Iterable[tuple[int, ...]], check: bool = True):
        self.vertices = tuple(vertices)
        by_dim: dict[int, set] = {}
        for s in simplices:
            s = tuple(s)
            if not s:
                raise ValueError("simplices are nonempty")
            by_dim.setdefault(len(s) - 1, set()).add(s)
        top = max(by_dim, default=-1)
        self.simplices = [sorted(by_dim.get(d, ())) for d in range(top + 1)]
        self._index = None
        if check:
            n = len(self.vertices)
            for d, layer in enumerate(self.simplices):
                for s in layer:
                    if any(a >= b for a, b in zip(s, s[1:])) or s[0] < 0 or s[-1] >= n:
                        raise ValueError(f"simplex {s} is not increasing in vertex order")
            for d in range(1, len(self.simplices)):
                lower = set(self.simplices[d - 1])
                for s in self.simplices[d]:
                    for f in combinations(s, d):
                        if f not in lower:
                            raise ValueError(f"face {f} of {s} is missing")

    @classmethod
    def from_facets(cls, vertices: Sequence, facets: Iterable[Iterable]) -> "SimplicialComplex":
        """Downward closure of ``facets`` (given as vertex labels)."""
        pos = {v: i for i, v in enumerate(vertices)}
        out = set()
        for f in facets:
            s = tuple(sorted(pos[v] for v in f))
            for r in range(1, len(s) + 1):
                out.update(combinations(s, r))
        return cls(vertices, out, check=False)

    @property
    def dim(self) -> int:
        return len(self.simplices) - 1

    def __len__(self) -> int:
        return sum(len(layer) for layer in self.simplices)

    def __repr__(self) -> str:
        return f"SimplicialComplex(f-vector={self.f_vector()})"

    def f_vector(self) -> tuple[int, ...]:
        return tuple(len(layer) for layer in self.simplices)

    def all_simplices(self) -> Iterator[tuple[int, ...]]:
        for layer in self.simplices:
            yield from layer

    def index(self, d: int) -> dict[tuple[int, ...], int]:
        if self._index is None:
            self._index = [None] * len(self.simplices)
        if self._index[d] is None:
            self._index[d] = {s: i for i, s in enumerate(self.simplices[d])}
        return self._index[d]

    def __contains__(self, s) -> bool:
        s = tuple(s)
        d = len(s) - 1
        return 0 <= d <= self.dim and s in self.index(d)

    def labels(self, s: tuple[int, ...]) -> tuple:
        return tuple(self.vertices[i] for i in s)

    def euler_characteristic(self) -> int:
        return sum((-1) ** d * len(layer) for d, layer in enumerate(self.simplices))

    def subcomplex_positions(self, other: "SimplicialComplex") -> list[set]:
        """Simplices of ``other`` translated to vertex positions of ``self``.

        Raises ``ValueError`` when ``other`` is not a subcomplex of ``self``.
        """
        pos = {v: i for i, v in enumerate(self.vertices)}
        out = [set() for _ in range(self.dim + 1)]
        for s in other.all_simplices():
            try:
                t = tuple(sorted(pos[other.vertices[i]] for i in s))
            except KeyError:
                raise ValueError("not a subcomplex: unknown vertex") from None
            if t not in self:
                raise ValueError(f"not a subcomplex: {other.labels(s)} missing")
            out[len(t) - 1].add(t)
        return out

    def with_vertex_order(self, order: Sequence) -> "SimplicialComplex":
        """Same complex with the vertices relisted in ``order`` (a permutation of labels)."""
        pos = {v: i for i, v in enumerate(order)}
        if len(pos) != len(self.vertices) or set(pos) != set(self.vertices):
            raise ValueError("order must be a permutation of the vertices")
        simplices = [tuple(sorted(pos[self.vertices[i]] for i in s)) for s in self.all_simplices()]
        return SimplicialComplex(order, simplices, check=False)


def order_complex(P: Poset, max_dim: int | None = None) -> SimplicialComplex:
    """Chains of ``P``; vertices listed in the linear extension of ``P``."""
    ext = P.linear_extension()
    max_size = None if max_dim is None else max_dim + 1
    return SimplicialComplex([P.items[i] for i in ext], P.chains(max_size), check=False)


def barycentric(K: SimplicialComplex) -> SimplicialComplex:
    """Order complex of the face poset; new vertices are simplices as label tuples."""
    faces = list(K.all_simplices())
    labels = [K.labels(s) for s in faces]
    up = []
    for s in faces:
        ss = set(s)
        up.append(sum(1 << j for j, t in enumerate(faces) if ss <= set(t)))
    return order_complex(Poset(labels, up, check=False))


def lower_interval(P: Poset, p) -> Poset:
    return P._induced(sorted(_bits(P.down[P.idx(p)])))


def upper_interval(P: Poset, p) -> Poset:
    return P._induced(sorted(_bits(P.up[P.idx(p)])))


def fiber_sub(f: PosetMap, q, side: str = "all", p=None) -> Poset:
    """``f^{-1}(q)``, intersected with ``P_{<=p}`` or ``P_{>=p}`` when ``side`` says so."""
    if q not in f.target:
        raise KeyError(f"{q!r} is not an element of the target poset")
    P = f.source
    mask = sum(1 << i for i, x in enumerate(P.items) if f(x) == q)
    if side == "<=":
        mask &= P.down[P.idx(p)]
    elif side == ">=":
        mask &= P.up[P.idx(p)]
    elif side != "all":
        raise ValueError(f"side must be '<=', '>=' or 'all', not {side!r}")
    return P._induced(sorted(_bits(mask)))


def connected_components(P: Poset) -> list[list]:
    """Components of the comparability graph, each in item order."""
    n = len(P)
    nbr = [P.up[i] | P.down[i] for i in range(n)]
    seen = 0
    out = []
    for i in range(n):
        if seen >> i & 1:
            continue
        comp = 1 << i
        frontier = comp
        while frontier:
            grow = 0
            for j in _bits(frontier):
                grow |= nbr[j]
            frontier = grow & ~comp
            comp |= grow
        seen |= comp
        out.append([P.items[j] for j in _bits(comp)])
    return out


@dataclass
class CollapseResult:
    certified: bool
    remainder: SimplicialComplex
    steps: list = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.certified


def collapse_certificate(K: SimplicialComplex) -> CollapseResult:
    """Greedy elementary collapses.

    Repeatedly removes a free pair (tau, sigma) with sigma of maximal dimension,
    ties broken by the lexicographically smallest tau.  ``certified`` means the
    complex collapsed to a single vertex; otherwise ``remainder`` is where the
    greedy search got stuck, which proves nothing by itself.
    """
    if len(K) == 0:
        raise ValueError("cannot collapse the empty complex")
    cofaces: dict[tuple, set] = {s: set() for s in K.all_simplices()}
    for s in K.all_simplices():
        if len(s) > 1:
            for f in combinations(s, len(s) - 1):
                cofaces[f].add(s)
    heap = [(-len(s), s) for s, c in cofaces.items() if len(c) == 1]
    heapq.heapify(heap)
    steps = []

    def push_candidates(rho):
        if len(cofaces[rho]) == 1:
            heapq.heappush(heap, (-len(rho), rho))

    while heap:
        _, tau = heapq.heappop(heap)
        if tau not in cofaces or len(cofaces[tau]) != 1:
            continue
        (sigma,) = cofaces[tau]
        if cofaces[sigma]:
            continue
        steps.append((tau, sigma))
        for s in (sigma, tau):
            del cofaces[s]
        for f in combinations(sigma, len(sigma) - 1):
            if f in cofaces:
                cofaces[f].discard(sigma)
                push_candidates(f)
                if not cofaces[f] and len(f) > 1:
                    for g in combinations(f, len(f) - 1):
                        if g in cofaces:
                            push_candidates(g)
        if len(tau) > 1:
            for f in combinations(tau, len(tau) - 1):
                if f in cofaces:
                    cofaces[f].discard(tau)
                    push_candidates(f)
                    if not cofaces[f] and len(f) > 1:
                        for g in combinations(f, len(f) - 1):
                            if g in cofaces:
                                push_candidates(g)
    rest = SimplicialComplex(K.vertices, cofaces.keys(), check=False)
    certified = rest.f_vector() == (1,)
    return CollapseResult(certified, rest, steps)
