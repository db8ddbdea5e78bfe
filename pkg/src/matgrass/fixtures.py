"""Golden fixtures: small bundles, vector-field lifts and poset maps.

Builders here construct everything from scratch; the same objects ship as
text files under ``matgrass/data`` (regenerate with ``write_data``).  Bases
use string labels so that the files round-trip exactly.
"""

from __future__ import annotations

import os
from functools import lru_cache
from importlib import resources

from .bundles import MatroidBundle, constant_bundle, whitney_sum
from .io import read_bundle, read_lift, write_bundle, write_lift
from .grassmann import RationalConfiguration, macpherson, mu_point
from .om import OrientedMatroid, SignVector, coordinate_om
from .poset import Poset, PosetMap, chain_poset
from .vecfields import VectorFieldLift, search_lift

__all__ = [
    "degen_matroids",
    "degen_bundle",
    "identity_bundle",
    "circle_base",
    "octahedron",
    "BUNDLES",
    "LIFTS",
    "EXPECTED",
    "bundle",
    "lift",
    "pullback_maps",
    "data_dir",
    "load_bundle",
    "load_lift",
    "write_data",
]

_Q2 = [(1, 0), (0, 1)]


def degen_matroids() -> tuple[OrientedMatroid, OrientedMatroid]:
    """M1: a=(1,0), b=(0,1), c=(-1,1); M0: the same with b replaced by the zero form."""
    m1 = mu_point(RationalConfiguration(["a", "b", "c"], [(1, 0), (0, 1), (-1, 1)]), _Q2)
    m0 = mu_point(RationalConfiguration(["a", "b", "c"], [(1, 0), (0, 0), (-1, 1)]), _Q2)
    return m1, m0


def degen_bundle() -> MatroidBundle:
    m1, m0 = degen_matroids()
    return MatroidBundle(chain_poset(["0", "1"]), {"1": m1, "0": m0})


def identity_bundle(k: int, n: int, prefix: str = "p") -> MatroidBundle:
    """Tautological bundle over MacP(k, n), items renamed ``p0, p1, ...``."""
    P = macpherson(k, n)
    names = [f"{prefix}{i}" for i in range(len(P))]
    base = Poset(names, P.up, check=False)
    return MatroidBundle(base, dict(zip(names, P.items)))


def circle_base() -> Poset:
    return identity_bundle(1, 2).base


def octahedron() -> Poset:
    """Two points below two points below two points: the order complex is an octahedron (S^2)."""
    return Poset.from_covers(list("abcdef"), [
        ("a", "c"), ("a", "d"), ("b", "c"), ("b", "d"),
        ("c", "e"), ("c", "f"), ("d", "e"), ("d", "f")])


def _eps(base: Poset, names) -> MatroidBundle:
    return constant_bundle(base, coordinate_om(names))


def _mobius() -> MatroidBundle:
    return identity_bundle(1, 2)


def _canonical() -> MatroidBundle:
    return identity_bundle(1, 3)


BUNDLES = {
    "degen": degen_bundle,
    "mobius": _mobius,
    "canonical13": _canonical,
    "trivial1_circle": lambda: _eps(circle_base(), ["z"]),
    "trivial2_circle": lambda: _eps(circle_base(), ["x", "y"]),
    "trivial2_s2": lambda: _eps(octahedron(), ["x", "y"]),
    "mobius2": lambda: whitney_sum(bundle("mobius"), bundle("mobius"), relabel=True),
    "mobius_eps": lambda: whitney_sum(bundle("mobius"), _eps(circle_base(), ["z"])),
    "canonical_eps": lambda: whitney_sum(bundle("canonical13"), _eps(bundle("canonical13").base, ["z"])),
    "canonical2": lambda: whitney_sum(bundle("canonical13"), bundle("canonical13"), relabel=True),
}

# summary of w, orientability, and whether the Euler class vanishes (None: not orientable)
EXPECTED = {
    "degen": ("1", True, True),
    "mobius": ("1 + w1", False, None),
    "canonical13": ("1 + w1", False, None),
    "trivial1_circle": ("1", True, True),
    "trivial2_circle": ("1", True, True),
    "trivial2_s2": ("1", True, True),
    "mobius2": ("1", True, True),
    "mobius_eps": ("1 + w1", False, None),
    "canonical_eps": ("1 + w1", False, None),
    "canonical2": ("1 + w2", True, False),
}


@lru_cache(maxsize=None)
def bundle(name: str) -> MatroidBundle:
    return BUNDLES[name]()


def _constant_lift(xi: MatroidBundle, M: OrientedMatroid, l: int) -> VectorFieldLift:
    return VectorFieldLift(xi, {x: M for x in xi.base.items}, l)


def _lift_trivial2_circle():
    M = mu_point(RationalConfiguration(["x", "y", "f"], [(1, 0), (0, 1), (1, 1)]), _Q2)
    return _constant_lift(bundle("trivial2_circle"), M, 1)


def _lift_trivial2_s2():
    M = mu_point(RationalConfiguration(["x", "y", "f", "g"], [(1, 0), (0, 1), (1, 1), (1, -1)]), _Q2)
    return _constant_lift(bundle("trivial2_s2"), M, 2)


def _lift_mobius_eps():
    xi = bundle("mobius_eps")
    line = OrientedMatroid(["z", "f"], [SignVector.parse(s) for s in ("00", "++", "--")])
    lift = {}
    for x in xi.base.items:
        mob = bundle("mobius").assign[x]
        lift[x] = mob.direct_sum(line)
    return VectorFieldLift(xi, lift, 1)


def _lift_degen():
    xi = bundle("degen")
    q1 = RationalConfiguration(["a", "b", "c", "d"], [(1, 0), (0, 1), (-1, 1), (1, 1)])
    q0 = RationalConfiguration(["a", "b", "c", "d"], [(1, 0), (0, 0), (-1, 1), (1, 1)])
    return VectorFieldLift(xi, {"1": mu_point(q1, _Q2), "0": mu_point(q0, _Q2)}, 1)


def _lift_mobius2():
    found = search_lift(bundle("mobius2"), ["f"])
    if found is None:
        raise RuntimeError("no lift found for mobius2")
    return found


LIFTS = {
    "trivial2_circle_field": ("trivial2_circle", _lift_trivial2_circle),
    "trivial2_s2_frame": ("trivial2_s2", _lift_trivial2_s2),
    "mobius_eps_field": ("mobius_eps", _lift_mobius_eps),
    "degen_field": ("degen", _lift_degen),
    "mobius2_field": ("mobius2", _lift_mobius2),
}


@lru_cache(maxsize=None)
def lift(name: str) -> VectorFieldLift:
    return LIFTS[name][1]()


def _double_cover() -> Poset:
    """An 8-element circle poset (alternating minima m_i and maxima M_i)."""
    items = [f"m{i}" for i in range(4)] + [f"M{i}" for i in range(4)]
    covers = []
    for i in range(4):
        covers.append((f"m{i}", f"M{i}"))
        covers.append((f"m{(i + 1) % 4}", f"M{i}"))
    return Poset.from_covers(items, covers)


def pullback_maps() -> list[tuple[str, str, PosetMap]]:
    """(description, bundle name, map into that bundle's base)."""
    circle = circle_base()
    lows = circle.minimal()
    highs = circle.maximal()
    # every minimum lies below every maximum, so m_i -> lows[i % 2], M_i -> highs[i % 2]
    # is order preserving and runs twice around the 4-cycle
    cover = _double_cover()
    wrap = {}
    for i in range(4):
        wrap[f"m{i}"] = lows[i % 2]
        wrap[f"M{i}"] = highs[i % 2]
    double = PosetMap(cover, circle, wrap)

    seg = chain_poset([lows[0], highs[0]])
    inclusion = PosetMap(seg, circle, {x: x for x in seg.items})

    # MacP(1,2) sits inside MacP(1,3) as the matroids in which element 3 is a loop
    can = bundle("canonical13")
    mob = bundle("mobius")
    emb = {}
    for x in circle.items:
        M = mob.assign[x]
        target = [y for y in can.base.items
                  if can.assign[y].delete(["3"]) == M and "3" in can.assign[y].loops()]
        emb[x] = target[0]
    embed = PosetMap(circle, can.base, emb)
    return [
        ("8-cycle wrapping twice around the circle", "mobius", double),
        ("an edge of the circle", "mobius", inclusion),
        ("circle of matroids with a loop at 3", "canonical13", embed),
    ]


# shipped data ------------------------------------------------------------

def data_dir() -> str:
    return str(resources.files("matgrass") / "data")


def load_bundle(name: str) -> MatroidBundle:
    return read_bundle(os.path.join(data_dir(), f"{name}.mb"))


def load_lift(name: str) -> VectorFieldLift:
    bundle_name = LIFTS[name][0]
    return read_lift(os.path.join(data_dir(), f"{name}.vf"), load_bundle(bundle_name))


def write_data(directory: str | None = None) -> list[str]:
    """Regenerate the shipped fixture files."""
    directory = directory or data_dir()
    os.makedirs(directory, exist_ok=True)
    written = []
    for name in BUNDLES:
        path = os.path.join(directory, f"{name}.mb")
        write_bundle(bundle(name), path)
        written.append(path)
    for name in LIFTS:
        path = os.path.join(directory, f"{name}.vf")
        write_lift(lift(name), path)
        written.append(path)
    return written

