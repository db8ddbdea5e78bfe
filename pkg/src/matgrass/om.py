"""Sign vectors and oriented matroids given by their covectors.

A sign vector on an ordered ground set of ``n`` elements is packed into two
bitmasks: bit ``i`` of ``pos`` (resp. ``neg``) is set when entry ``i`` is
``+`` (resp. ``-``).  Covector sets are stored explicitly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, NamedTuple, Sequence

__all__ = [
    "SignVector",
    "DomainError",
    "InvalidOrientedMatroid",
    "AxiomReport",
    "OrientedMatroid",
    "Chirotope",
    "compose",
    "verify_covector_axioms",
    "composition_closure",
    "coordinate_om",
    "rank_zero_om",
    "perm_sign",
]

_CHARS = {1: "+", -1: "-", 0: "0"}


class DomainError(ValueError):
    """Sign vectors or element sets that do not live on the same ground set."""


class SignVector(NamedTuple):
    pos: int
    neg: int
    n: int

    @classmethod
    def zero(cls, n: int) -> "SignVector":
        return cls(0, 0, n)

    @classmethod
    def from_signs(cls, signs: Iterable[int]) -> "SignVector":
        pos = neg = 0
        n = 0
        for i, s in enumerate(signs):
            n = i + 1
            if s > 0:
                pos |= 1 << i
            elif s < 0:
                neg |= 1 << i
        return cls(pos, neg, n)

    @classmethod
    def parse(cls, text: str) -> "SignVector":
        signs = []
        for ch in text:
            if ch == "+":
                signs.append(1)
            elif ch == "-":
                signs.append(-1)
            elif ch == "0":
                signs.append(0)
            else:
                raise ValueError(f"bad sign character {ch!r} in {text!r}")
        v = cls.from_signs(signs)
        return cls(v.pos, v.neg, len(text))

    def __str__(self) -> str:
        return "".join(_CHARS[self[i]] for i in range(self.n))

    def __getitem__(self, i):  # type: ignore[override]
        # tuple indexing would expose the packed fields; entries are what callers want
        if not isinstance(i, int):
            raise TypeError("sign vectors are indexed by element position")
        if not 0 <= i < self.n:
            raise IndexError(i)
        bit = 1 << i
        if self.pos & bit:
            return 1
        if self.neg & bit:
            return -1
        return 0

    def signs(self) -> tuple[int, ...]:
        return tuple(self[i] for i in range(self.n))

    def __neg__(self) -> "SignVector":
        return SignVector(self.neg, self.pos, self.n)

    @property
    def support(self) -> int:
        return self.pos | self.neg

    def is_zero(self) -> bool:
        return not (self.pos | self.neg)

    def compose(self, other: "SignVector") -> "SignVector":
        return compose(self, other)

    def geq(self, other: "SignVector") -> bool:
        """Conformal order: every nonzero entry of ``other`` agrees with ``self``."""
        return (other.pos & ~self.pos) == 0 and (other.neg & ~self.neg) == 0

    def separation(self, other: "SignVector") -> int:
        return (self.pos & other.neg) | (self.neg & other.pos)

    def restrict(self, keep: Sequence[int]) -> "SignVector":
        """Entries at positions ``keep``, in that order."""
        pos = neg = 0
        for j, i in enumerate(keep):
            bit = 1 << i
            if self.pos & bit:
                pos |= 1 << j
            elif self.neg & bit:
                neg |= 1 << j
        return SignVector(pos, neg, len(keep))

    def concat(self, other: "SignVector") -> "SignVector":
        return SignVector(
            self.pos | (other.pos << self.n), self.neg | (other.neg << self.n), self.n + other.n
        )


def compose(x: SignVector, y: SignVector) -> SignVector:
    """``(x o y)(e) = x(e)`` if ``x(e) != 0`` else ``y(e)``."""
    if x.n != y.n:
        raise DomainError(f"cannot compose sign vectors of lengths {x.n} and {y.n}")
    free = ~(x.pos | x.neg)
    return SignVector(x.pos | (y.pos & free), x.neg | (y.neg & free), x.n)


def perm_sign(seq: Sequence[int]) -> int:
    """Sign of the permutation sorting ``seq`` (0 if it has repeats)."""
    if len(set(seq)) < len(seq):
        return 0
    inv = sum(1 for a, b in combinations(seq, 2) if a > b)
    return -1 if inv & 1 else 1


@dataclass(frozen=True)
class AxiomReport:
    ok: bool
    axiom: int | None = None
    witness: tuple = ()
    message: str = ""

    def __bool__(self) -> bool:
        return self.ok


_AXIOM_NAMES = {1: "zero", 2: "negation", 3: "composition", 4: "elimination"}


def verify_covector_axioms(elements: Sequence, covectors: Iterable[SignVector]) -> AxiomReport:
    """Check the four covector axioms; report the first violation found.

    Witnesses: axiom 1 -> (), axiom 2 -> (X,), axiom 3 -> (X, Y),
    axiom 4 -> (X, Y, e) with ``e`` the element label where X is + and Y is -.
    """
    elements = list(elements)
    n = len(elements)
    S = set(covectors)
    for x in S:
        if x.n != n:
            raise DomainError(f"sign vector {x} has length {x.n}, ground set has {n} elements")
    ordered = sorted(S, key=lambda v: str(v))

    zero = SignVector.zero(n)
    if zero not in S:
        return AxiomReport(False, 1, (), "zero covector missing")
    for x in ordered:
        if -x not in S:
            return AxiomReport(False, 2, (x,), f"negation of {x} missing")
    for x in ordered:
        for y in ordered:
            if compose(x, y) not in S:
                return AxiomReport(False, 3, (x, y), f"{x} o {y} missing")

    # index covectors by their restriction to a mask; masks are cached lazily
    by_mask: dict[int, set[tuple[int, int]]] = {}
    full = (1 << n) - 1

    def restrictions(mask: int) -> set[tuple[int, int]]:
        got = by_mask.get(mask)
        if got is None:
            got = {(z.pos & mask, z.neg & mask) for z in S}
            by_mask[mask] = got
        return got

    for x in ordered:
        for y in ordered:
            sep = x.separation(y)
            plus_minus = x.pos & y.neg
            if not plus_minus:
                continue
            xy = compose(x, y)
            agree = full & ~sep
            e_bits = plus_minus
            while e_bits:
                low = e_bits & -e_bits
                e_bits ^= low
                mask = agree | low
                if (xy.pos & agree, xy.neg & agree) not in restrictions(mask):
                    e = elements[low.bit_length() - 1]
                    return AxiomReport(False, 4, (x, y, e), f"no elimination of {x}, {y} at {e}")
    return AxiomReport(True)


def composition_closure(generators: Iterable[SignVector], n: int) -> frozenset[SignVector]:
    """Zero together with all finite compositions of ``generators``."""
    gens = sorted(set(generators), key=str)
    zero = SignVector.zero(n)
    seen = {zero}
    frontier = [zero]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                z = compose(x, g)
                if z not in seen:
                    seen.add(z)
                    nxt.append(z)
        frontier = nxt
    return frozenset(seen)


class InvalidOrientedMatroid(ValueError):
    def __init__(self, report: AxiomReport):
        super().__init__(f"covector axiom {report.axiom} ({_AXIOM_NAMES.get(report.axiom)}) fails: "
                         f"{report.message}")
        self.report = report


class OrientedMatroid:
    """An oriented matroid on an ordered ground set, stored by its covectors.

    Instances are immutable.  Construction verifies the covector axioms unless
    ``check=False`` (used only on paths whose output is verified elsewhere).
    """

    __slots__ = ("elements", "covectors", "_index", "_rank", "_key", "_cocircuits",
                 "_supports", "_hash")

    def __init__(self, elements: Sequence, covectors: Iterable[SignVector], check: bool = True):
        elements = tuple(elements)
        if len(set(elements)) != len(elements):
            raise ValueError(f"element labels must be distinct: {elements}")
        covs = frozenset(covectors)
        n = len(elements)
        for x in covs:
            if x.n != n:
                raise DomainError(f"sign vector {x} does not match ground set {elements}")
        if check and __debug__:
            report = verify_covector_axioms(elements, covs)
            if not report:
                raise InvalidOrientedMatroid(report)
        self.elements = elements
        self.covectors = covs
        self._index = {e: i for i, e in enumerate(elements)}
        self._rank = None
        self._key = None
        self._cocircuits = None
        self._supports = None
        self._hash = None

    # -- identity -------------------------------------------------------
    @property
    def n(self) -> int:
        return len(self.elements)

    def key(self) -> tuple:
        """Canonical key: ground set plus lexicographically sorted covector strings."""
        if self._key is None:
            self._key = (tuple(str(e) for e in self.elements),
                         tuple(sorted(str(x) for x in self.covectors)))
        return self._key

    def __eq__(self, other) -> bool:
        if not isinstance(other, OrientedMatroid):
            return NotImplemented
        return self.elements == other.elements and self.covectors == other.covectors

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.elements, self.covectors))
        return self._hash

    def __repr__(self) -> str:
        return f"OrientedMatroid(elements={list(self.elements)}, rank={self.rank}, " \
               f"covectors={len(self.covectors)})"

    def index(self, e) -> int:
        try:
            return self._index[e]
        except KeyError:
            raise DomainError(f"{e!r} is not an element of {self.elements}") from None

    def mask(self, subset: Iterable) -> int:
        m = 0
        for e in subset:
            m |= 1 << self.index(e)
        return m

    def labels(self, mask: int) -> tuple:
        return tuple(e for i, e in enumerate(self.elements) if mask >> i & 1)

    def sorted_covectors(self) -> list[SignVector]:
        return sorted(self.covectors, key=str)

    def nonzero_covectors(self) -> list[SignVector]:
        return [x for x in self.sorted_covectors() if not x.is_zero()]

    # -- rank and independence -----------------------------------------
    def _support_list(self) -> tuple[int, ...]:
        if self._supports is None:
            self._supports = tuple(sorted({x.support for x in self.covectors}))
        return self._supports

    def _independent_mask(self, m: int) -> bool:
        supports = self._support_list()
        bits = m
        while bits:
            low = bits & -bits
            bits ^= low
            rest = m ^ low
            if not any(s & low and not s & rest for s in supports):
                return False
        return True

    def is_independent(self, subset: Iterable) -> bool:
        return self._independent_mask(self.mask(subset))

    @property
    def rank(self) -> int:
        if self._rank is None:
            basis = 0
            for i in range(self.n):
                cand = basis | (1 << i)
                if self._independent_mask(cand):
                    basis = cand
            self._rank = bin(basis).count("1")
        return self._rank

    def loops(self) -> tuple:
        used = 0
        for x in self.covectors:
            used |= x.support
        return tuple(e for i, e in enumerate(self.elements) if not used >> i & 1)

    def is_loopfree(self) -> bool:
        return not self.loops()

    def bases(self) -> list[tuple[int, ...]]:
        """Bases as sorted index tuples, in lexicographic order."""
        r = self.rank
        return [b for b in combinations(range(self.n), r)
                if self._independent_mask(sum(1 << i for i in b))]

    # -- minors and sums ------------------------------------------------
    def delete(self, subset: Iterable) -> "OrientedMatroid":
        m = self.mask(subset)
        keep = [i for i in range(self.n) if not m >> i & 1]
        covs = {x.restrict(keep) for x in self.covectors}
        return OrientedMatroid([self.elements[i] for i in keep], covs)

    def contract(self, subset: Iterable) -> "OrientedMatroid":
        m = self.mask(subset)
        keep = [i for i in range(self.n) if not m >> i & 1]
        covs = {x.restrict(keep) for x in self.covectors if not x.support & m}
        return OrientedMatroid([self.elements[i] for i in keep], covs)

    def restrict_to(self, subset: Iterable) -> "OrientedMatroid":
        """Deletion of the complement of ``subset``."""
        m = self.mask(subset)
        return self.delete(e for i, e in enumerate(self.elements) if not m >> i & 1)

    def direct_sum(self, other: "OrientedMatroid") -> "OrientedMatroid":
        overlap = set(self.elements) & set(other.elements)
        if overlap:
            raise DomainError(f"ground sets overlap in {sorted(map(str, overlap))}")
        covs = {x.concat(y) for x in self.covectors for y in other.covectors}
        # a product of covector sets is always an oriented matroid
        return OrientedMatroid(self.elements + other.elements, covs, check=False)

    def relabel(self, mapping) -> "OrientedMatroid":
        return OrientedMatroid([mapping.get(e, e) for e in self.elements], self.covectors,
                               check=False)

    # -- cocircuits and chirotopes ------------------------------------
    def cocircuits(self) -> frozenset[SignVector]:
        if self._cocircuits is None:
            nz = [x for x in self.covectors if not x.is_zero()]
            supports = {x.support for x in nz}
            minimal = {s for s in supports if not any(t != s and t & s == t for t in supports)}
            self._cocircuits = frozenset(x for x in nz if x.support in minimal)
        return self._cocircuits

    def chirotope_pair(self) -> tuple["Chirotope", "Chirotope"]:
        """The pair (chi, -chi); chi is positive on the lexicographically first basis.

        Signs are propagated across the basis-exchange graph: for bases B and
        B - x + y with H = B - x, the cocircuit C vanishing on H satisfies
        chi(H, y) * chi(H, x) = C(x) * C(y).  The result is checked by
        rebuilding the cocircuits from chi.
        """
        k = self.rank
        if k == 0:
            raise ValueError("a rank 0 oriented matroid has no chirotope")
        n = self.n
        cocs = self.cocircuits()
        by_zero: dict[int, SignVector] = {}
        for c in cocs:
            by_zero.setdefault(((1 << n) - 1) & ~c.support, c)
        bases = self.bases()
        basis_set = set(bases)
        b0 = bases[0]
        chi = {b0: 1}
        queue = [b0]
        while queue:
            b = queue.pop()
            for x in b:
                h = tuple(i for i in b if i != x)
                hmask = sum(1 << i for i in h)
                coc = next(c for z, c in by_zero.items() if z & hmask == hmask and c[x] != 0)
                for y in range(n):
                    if y in b:
                        continue
                    b2 = tuple(sorted(h + (y,)))
                    if b2 not in basis_set:
                        continue
                    val = perm_sign(h + (y,)) * coc[x] * coc[y] * perm_sign(h + (x,)) * chi[b]
                    if b2 in chi:
                        if chi[b2] != val:
                            raise ValueError("inconsistent chirotope propagation")
                    else:
                        chi[b2] = val
                        queue.append(b2)
        values = tuple(chi.get(s, 0) for s in combinations(range(n), k))
        result = Chirotope(self.elements, k, values)
        if result.cocircuits() != cocs:
            raise ValueError("chirotope does not reproduce the cocircuits")
        return result, -result


@dataclass(frozen=True)
class Chirotope:
    """Basis orientation; ``values`` lists signs of sorted k-subsets in combinations order."""

    elements: tuple
    rank: int
    values: tuple[int, ...]
    _lookup: dict = field(default=None, compare=False, hash=False, repr=False)

    def __post_init__(self):
        if not any(self.values):
            raise ValueError("a chirotope is not identically zero")
        subsets = list(combinations(range(len(self.elements)), self.rank))
        object.__setattr__(self, "_lookup", dict(zip(subsets, self.values)))

    def __neg__(self) -> "Chirotope":
        return Chirotope(self.elements, self.rank, tuple(-v for v in self.values))

    def sign(self, indices: Sequence[int]) -> int:
        """Alternating evaluation on an ordered tuple of element positions."""
        s = perm_sign(indices)
        if s == 0:
            return 0
        return s * self._lookup[tuple(sorted(indices))]

    def __call__(self, *labels) -> int:
        index = {e: i for i, e in enumerate(self.elements)}
        return self.sign([index[e] for e in labels])

    def items(self):
        return self._lookup.items()

    def weak_geq(self, other: "Chirotope") -> bool:
        """Agrees with ``other`` on every subset where ``other`` is nonzero."""
        return all(w == 0 or v == w for v, w in zip(self.values, other.values))

    def cocircuits(self) -> frozenset[SignVector]:
        n = len(self.elements)
        out = set()
        for h in combinations(range(n), self.rank - 1):
            v = SignVector.from_signs(self.sign(h + (e,)) if e not in h else 0 for e in range(n))
            v = SignVector(v.pos, v.neg, n)
            if not v.is_zero():
                out.add(v)
                out.add(-v)
        return frozenset(out)

    def __str__(self) -> str:
        return "".join(_CHARS[v] for v in self.values)


def coordinate_om(elements: Sequence) -> OrientedMatroid:
    """The unique rank-n oriented matroid on n elements: every sign vector is a covector."""
    n = len(elements)
    covs = []
    for pos in range(1 << n):
        rest = ((1 << n) - 1) & ~pos
        sub = rest
        while True:
            covs.append(SignVector(pos, sub, n))
            if sub == 0:
                break
            sub = (sub - 1) & rest
    return OrientedMatroid(elements, covs, check=False)


def rank_zero_om(elements: Sequence) -> OrientedMatroid:
    return OrientedMatroid(elements, [SignVector.zero(len(elements))])
