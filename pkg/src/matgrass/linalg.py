"""Exact linear algebra: rationals, GF(2) bit-packed vectors, and integer Smith form."""

from __future__ import annotations

import heapq
from fractions import Fraction
from typing import Iterable, Sequence

__all__ = [
    "rational_rank",
    "rational_det",
    "sign",
    "GF2Echelon",
    "gf2_rank",
    "gf2_kernel",
    "smith_normal_form",
    "elementary_divisors",
    "integer_solve",
    "integer_kernel",
    "matmul",
    "identity",
    "sparse_integer_solve",
    "sparse_elementary_divisors",
]


def sign(x) -> int:
    return (x > 0) - (x < 0)


# rationals ---------------------------------------------------------------

def _row_reduce(rows: Sequence[Sequence[Fraction]]) -> list[list[Fraction]]:
    m = [list(map(Fraction, r)) for r in rows]
    if not m:
        return m
    ncols = len(m[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        pr = m[r]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c] / pr[c]
                m[i] = [a - f * b for a, b in zip(m[i], pr)]
        r += 1
        if r == len(m):
            break
    return m[:r]


def rational_rank(rows: Sequence[Sequence]) -> int:
    return len(_row_reduce(rows))


def rational_det(rows: Sequence[Sequence]) -> Fraction:
    m = [list(map(Fraction, r)) for r in rows]
    n = len(m)
    if any(len(r) != n for r in m):
        raise ValueError("determinant of a non-square matrix")
    det = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        for i in range(c + 1, n):
            if m[i][c] != 0:
                f = m[i][c] / m[c][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return det


# GF(2) ----------------------------------------------------------------

class GF2Echelon:
    """Incremental echelon basis of GF(2) vectors packed in ints.

    Each stored row carries a ``tag`` bitmask recording which inserted vectors
    it combines.  Pivots are highest set bits.  Rows are not back-substituted
    (that is quadratic in the rank); reduction clears pivot bits from the top
    down instead, which lands on the same residue.
    """

    __slots__ = ("rows", "tags", "pivot_mask", "_count")

    def __init__(self):
        self.rows: dict[int, int] = {}
        self.tags: dict[int, int] = {}
        self.pivot_mask = 0
        self._count = 0

    def __len__(self) -> int:
        return len(self.rows)

    def reduce(self, v: int) -> tuple[int, int]:
        """Return ``(residue, tag)`` with ``v = residue + sum of tagged inserts``.

        The residue has no pivot bits; it is the smallest integer in the coset
        of ``v`` modulo the span.
        """
        tag = 0
        rows, tags, mask = self.rows, self.tags, self.pivot_mask
        hits = v & mask
        while hits:
            p = hits.bit_length() - 1
            v ^= rows[p]
            tag ^= tags[p]
            hits = v & mask
        return v, tag

    def add(self, v: int, tag: int | None = None) -> bool:
        """Insert ``v``; returns False (and stores nothing) when ``v`` is dependent."""
        if tag is None:
            tag = 1 << self._count
        self._count += 1
        res, t = self.reduce(v)
        if not res:
            return False
        p = res.bit_length() - 1
        self.rows[p] = res
        self.tags[p] = tag ^ t
        self.pivot_mask |= 1 << p
        return True

    def contains(self, v: int) -> bool:
        return self.reduce(v)[0] == 0


def gf2_rank(vectors: Iterable[int]) -> int:
    pivots: dict[int, int] = {}
    for v in vectors:
        while v:
            p = v.bit_length() - 1
            row = pivots.get(p)
            if row is None:
                pivots[p] = v
                break
            v ^= row
    return len(pivots)


def gf2_kernel(columns: Sequence[int]) -> list[int]:
    """Basis of ``{c : sum of columns[i] for i in c == 0}`` as bitmasks over indices."""
    pivots: dict[int, tuple[int, int]] = {}
    kernel = []
    for i, v in enumerate(columns):
        combo = 1 << i
        while v:
            p = v.bit_length() - 1
            hit = pivots.get(p)
            if hit is None:
                pivots[p] = (v, combo)
                break
            v ^= hit[0]
            combo ^= hit[1]
        if not v:
            kernel.append(combo)
    return kernel


# integers --------------------------------------------------------------

def identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> list[list[int]]:
    if not a:
        return []
    inner = len(b)
    cols = len(b[0]) if b else 0
    out = []
    for row in a:
        nz = [(k, x) for k, x in enumerate(row) if x]
        out.append([sum(x * b[k][j] for k, x in nz) for j in range(cols)])
    if inner == 0:
        return [[0] * cols for _ in a]
    return out


def smith_normal_form(a: Sequence[Sequence[int]], transforms: bool = True):
    """Smith normal form ``U @ A @ V = D`` over the integers.

    Pivots are chosen with minimal absolute value.  Returns ``(D, U, V)`` with
    unimodular ``U`` (m x m) and ``V`` (n x n); the diagonal of ``D`` lists the
    elementary divisors, each dividing the next.  With ``transforms=False`` the
    transformation matrices are not tracked (returned as None).
    """
    m = len(a)
    n = len(a[0]) if m else 0
    d = [list(map(int, r)) for r in a]
    U = identity(m) if transforms else None
    V = identity(n) if transforms else None

    def swap_rows(i, j):
        d[i], d[j] = d[j], d[i]
        if U is not None:
            U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for r in d:
            r[i], r[j] = r[j], r[i]
        if V is not None:
            for r in V:
                r[i], r[j] = r[j], r[i]

    def add_row(dst, src, f):  # row dst += f * row src
        rs, rd = d[src], d[dst]
        for c in range(n):
            if rs[c]:
                rd[c] += f * rs[c]
        if U is not None:
            us, ud = U[src], U[dst]
            for c in range(m):
                if us[c]:
                    ud[c] += f * us[c]

    def add_col(dst, src, f):  # col dst += f * col src
        for r in d:
            if r[src]:
                r[dst] += f * r[src]
        if V is not None:
            for r in V:
                if r[src]:
                    r[dst] += f * r[src]

    t = 0
    while t < min(m, n):
        # minimal nonzero entry in the trailing block
        best = None
        for i in range(t, m):
            row = d[i]
            for j in range(t, n):
                x = row[j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            p = d[t][t]
            done = True
            for i in range(t + 1, m):
                if d[i][t]:
                    q = d[i][t] // p
                    add_row(i, t, -q)
                    if d[i][t]:
                        done = False
            for j in range(t + 1, n):
                if d[t][j]:
                    q = d[t][j] // p
                    add_col(j, t, -q)
                    if d[t][j]:
                        done = False
            if done:
                # divisibility: pivot must divide every trailing entry
                bad = None
                for i in range(t + 1, m):
                    for j in range(t + 1, n):
                        if d[i][j] % p:
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is None:
                    break
                add_row(t, bad, 1)
                continue
            # move the smallest remaining entry of row/column t to the pivot
            best = (abs(p), t, t)
            for i in range(t + 1, m):
                if d[i][t] and abs(d[i][t]) < best[0]:
                    best = (abs(d[i][t]), i, t)
            for j in range(t + 1, n):
                if d[t][j] and abs(d[t][j]) < best[0]:
                    best = (abs(d[t][j]), t, j)
            _, i, j = best
            swap_rows(t, i)
            swap_cols(t, j)
        if d[t][t] < 0:
            for c in range(n):
                d[t][c] = -d[t][c]
            if U is not None:
                U[t] = [-x for x in U[t]]
        t += 1
    return d, U, V


def elementary_divisors(a: Sequence[Sequence[int]]) -> list[int]:
    """Nonzero diagonal of the Smith normal form."""
    if not a or not a[0]:
        return []
    d, _, _ = smith_normal_form(a, transforms=False)
    return [d[i][i] for i in range(min(len(d), len(d[0]))) if d[i][i]]


def integer_kernel(a: Sequence[Sequence[int]], ncols: int | None = None) -> list[list[int]]:
    """Basis of the integer kernel ``{x : A x = 0}`` (a saturated lattice)."""
    m = len(a)
    n = ncols if ncols is not None else (len(a[0]) if m else 0)
    if m == 0:
        return identity(n)
    d, _, V = smith_normal_form(a)
    r = sum(1 for i in range(min(m, n)) if d[i][i])
    return [[V[i][j] for i in range(n)] for j in range(r, n)]


def integer_solve(a: Sequence[Sequence[int]], b: Sequence[int], ncols: int | None = None):
    """An integer solution of ``A x = b`` or None when none exists."""
    m = len(a)
    n = ncols if ncols is not None else (len(a[0]) if m else 0)
    if m == 0:
        return [0] * n
    d, U, V = smith_normal_form(a)
    c = [sum(U[i][k] * b[k] for k in range(m)) for i in range(m)]
    y = [0] * n
    for i in range(m):
        di = d[i][i] if i < n else 0
        if di == 0:
            if c[i] != 0:
                return None
        else:
            if c[i] % di:
                return None
            y[i] = c[i] // di
    return [sum(V[i][j] * y[j] for j in range(n)) for i in range(n)]


# sparse integer systems ------------------------------------------------------
#
# Chain-complex matrices are sparse with mostly unit entries.  Eliminating unit
# pivots first is a unimodular change of basis, so a dense Smith form is only
# needed on whatever remains.

def _unit_eliminate(rows: list[dict], rhs: list[int] | None):
    """Eliminate unit pivots in place.

    Returns ``(pivots, active)`` where ``pivots`` lists ``(col, row, rhs_value)``
    in elimination order and ``active`` the indices of untouched rows.  With
    ``rhs`` given, an inconsistent zero row raises ``ArithmeticError``.
    """
    cols: dict[int, set] = {}
    for i, r in enumerate(rows):
        for c in r:
            cols.setdefault(c, set()).add(i)
    active = set(range(len(rows)))
    pivots = []
    # approximate Markowitz order: shortest row first (lazy heap, stale entries
    # are re-pushed with their current length), then its sparsest unit column
    heap = [(len(r), i) for i, r in enumerate(rows) if r]
    heapq.heapify(heap)
    while heap:
        n, i = heapq.heappop(heap)
        if i not in active:
            continue
        r = rows[i]
        if n != len(r):
            if r:
                heapq.heappush(heap, (len(r), i))
            continue
        c = None
        for c2, v in r.items():
            if (v == 1 or v == -1) and (c is None or len(cols[c2]) < len(cols[c])):
                c = c2
        if c is None:
            continue  # no unit entry now; pushed again if a later step changes the row
        prow = rows[i]
        p = prow[c]
        active.discard(i)
        for c2 in prow:
            cols[c2].discard(i)
        for j in list(cols[c]):
            r = rows[j]
            f = r[c] * p  # p = +-1 so r[c] / p == r[c] * p
            for c2, v in prow.items():
                nv = r.get(c2, 0) - f * v
                if nv:
                    if c2 not in r:
                        cols[c2].add(j)
                    r[c2] = nv
                elif c2 in r:
                    del r[c2]
                    cols[c2].discard(j)
            if rhs is not None:
                rhs[j] -= f * rhs[i]
            if r:
                heapq.heappush(heap, (len(r), j))
            else:
                active.discard(j)
                if rhs is not None and rhs[j]:
                    raise ArithmeticError("inconsistent system")
        pivots.append((c, prow, rhs[i] if rhs is not None else 0))
    return pivots, active


def sparse_integer_solve(rows: Sequence[dict], rhs: Sequence[int], ncols: int):
    """Integer solution of a sparse system (rows as ``{col: coeff}``) or None."""
    rows = [dict(r) for r in rows]
    b = list(rhs)
    for r, v in zip(rows, b):
        if not r and v:
            return None
    try:
        pivots, active = _unit_eliminate(rows, b)
    except ArithmeticError:
        return None
    x = [0] * ncols
    rest = sorted(i for i in active if rows[i])
    if rest:
        rest_cols = sorted({c for i in rest for c in rows[i]})
        cpos = {c: k for k, c in enumerate(rest_cols)}
        dense = [[0] * len(rest_cols) for _ in rest]
        for a, i in enumerate(rest):
            for c, v in rows[i].items():
                dense[a][cpos[c]] = v
        sol = integer_solve(dense, [b[i] for i in rest], len(rest_cols))
        if sol is None:
            return None
        for c, v in zip(rest_cols, sol):
            x[c] = v
    for i in active:
        if not rows[i] and b[i]:
            return None
    for c, prow, value in reversed(pivots):
        p = prow[c]
        acc = value - sum(v * x[c2] for c2, v in prow.items() if c2 != c)
        x[c] = acc * p
    return x


def sparse_elementary_divisors(rows: Sequence[dict]) -> list[int]:
    """Nonzero Smith-form diagonal of a sparse integer matrix."""
    rows = [dict(r) for r in rows if r]
    pivots, active = _unit_eliminate(rows, None)
    rest = sorted(i for i in active if rows[i])
    ones = [1] * len(pivots)
    if not rest:
        return ones
    rest_cols = sorted({c for i in rest for c in rows[i]})
    cpos = {c: k for k, c in enumerate(rest_cols)}
    dense = [[0] * len(rest_cols) for _ in rest]
    for a, i in enumerate(rest):
        for c, v in rows[i].items():
            dense[a][cpos[c]] = v
    return ones + elementary_divisors(dense)
