"""Text formats: oriented matroids (.om), posets (.poset), bundles (.mb),
vector-field lifts (.vf) and rational configurations.

OM files::

    elements: a b c
    covectors:
    000
    -++

Blank lines and ``#`` comments are ignored everywhere.  A comment starts at a
``#`` at the beginning of a line or after whitespace, so labels such as
``a#1`` (produced by Whitney sums) survive.  The zero covector may
be left out on input and is always written on output.
"""

from __future__ import annotations

import os
import re
from fractions import Fraction
from typing import Callable

from .bundles import MatroidBundle
from .grassmann import RationalConfiguration
from .om import OrientedMatroid, SignVector, verify_covector_axioms, InvalidOrientedMatroid
from .poset import Poset
from .vecfields import VectorFieldLift

__all__ = [
    "FormatError",
    "parse_om",
    "emit_om",
    "read_om",
    "write_om",
    "parse_poset",
    "emit_poset",
    "parse_bundle",
    "read_bundle",
    "write_bundle",
    "parse_lift",
    "read_lift",
    "write_lift",
    "parse_config",
    "parse_plane",
    "parse_rational",
]


class FormatError(ValueError):
    def __init__(self, message: str, line: int | None = None, source: str | None = None):
        where = ""
        if source:
            where += f"{source}:"
        if line is not None:
            where += f"{line}:"
        super().__init__(f"{where} {message}" if where else message)
        self.line = line


_COMMENT = re.compile(r"(^|\s)#.*$")


def strip_comment(raw: str) -> str:
    return _COMMENT.sub("", raw).strip()


def _lines(text: str):
    for no, raw in enumerate(text.splitlines(), start=1):
        line = strip_comment(raw)
        if line:
            yield no, line


# oriented matroids ---------------------------------------------------------

def parse_om(text: str, source: str | None = None) -> OrientedMatroid:
    elements = None
    covs = []
    in_covs = False
    for no, line in _lines(text):
        if line.startswith("elements:"):
            if elements is not None:
                raise FormatError("duplicate elements line", no, source)
            elements = line[len("elements:"):].split()
            continue
        if line == "covectors:":
            if elements is None:
                raise FormatError("covectors before elements", no, source)
            in_covs = True
            continue
        if not in_covs:
            raise FormatError(f"unexpected line {line!r}", no, source)
        if len(line) != len(elements) or set(line) - set("+-0"):
            raise FormatError(f"bad covector {line!r} for {len(elements)} elements", no, source)
        covs.append(SignVector.parse(line))
    if elements is None:
        raise FormatError("missing elements line", None, source)
    covs.append(SignVector.zero(len(elements)))
    report = verify_covector_axioms(elements, covs)
    if not report:
        raise InvalidOrientedMatroid(report)
    return OrientedMatroid(elements, covs, check=False)


def emit_om(M: OrientedMatroid) -> str:
    out = ["elements: " + " ".join(map(str, M.elements)), "covectors:"]
    out.extend(str(x) for x in M.sorted_covectors())
    return "\n".join(out) + "\n"


def read_om(path: str) -> OrientedMatroid:
    with open(path) as fh:
        return parse_om(fh.read(), source=path)


def write_om(M: OrientedMatroid, path: str) -> None:
    with open(path, "w") as fh:
        fh.write(emit_om(M))


# posets ------------------------------------------------------------------

def _parse_poset_lines(lines, source) -> Poset:
    items = None
    covers = []
    for no, line in lines:
        if line.startswith("items:"):
            if items is not None:
                raise FormatError("duplicate items line", no, source)
            items = line[len("items:"):].split()
            if len(set(items)) != len(items):
                raise FormatError("items must be distinct", no, source)
            continue
        parts = line.split("<")
        if len(parts) != 2 or items is None:
            raise FormatError(f"expected 'x < y', got {line!r}", no, source)
        a, b = parts[0].strip(), parts[1].strip()
        for x in (a, b):
            if x not in items:
                raise FormatError(f"unknown item {x!r}", no, source)
        covers.append((a, b))
    if items is None:
        raise FormatError("missing items line", None, source)
    try:
        return Poset.from_covers(items, covers)
    except ValueError as exc:
        raise FormatError(str(exc), None, source) from None


def parse_poset(text: str, source: str | None = None) -> Poset:
    return _parse_poset_lines(_lines(text), source)


def emit_poset(P: Poset, name: Callable = str) -> str:
    out = ["items: " + " ".join(name(x) for x in P.items)]
    out.extend(f"{name(a)} < {name(b)}" for a, b in sorted(
        P.cover_pairs(), key=lambda ab: (P.idx(ab[0]), P.idx(ab[1]))))
    return "\n".join(out) + "\n"


# bundles and lifts -------------------------------------------------------

def _parse_assignment_file(text: str, source: str | None, loader: Callable[[str], OrientedMatroid],
                           header_keys=()):
    header = {}
    base_lines = []
    assign_refs = []
    section = None
    for no, line in _lines(text):
        key = line.split("=", 1)[0].strip() if "=" in line and ":" not in line else None
        if key in header_keys and section is None:
            try:
                header[key] = int(line.split("=", 1)[1])
            except ValueError:
                raise FormatError(f"bad integer in {line!r}", no, source) from None
            continue
        if line == "base:":
            section = "base"
            continue
        if line.startswith("assign:"):
            section = "assign"
            spec = line[len("assign:"):].strip()
            if not spec:
                raise FormatError("empty assign line", no, source)
            if "=" not in spec:
                raise FormatError(f"expected 'assign: cell = file.om', got {line!r}", no, source)
            cell, ref = (p.strip() for p in spec.split("=", 1))
            assign_refs.append((no, cell, ref))
            continue
        if section != "base":
            raise FormatError(f"unexpected line {line!r}", no, source)
        base_lines.append((no, line))
    for key in header_keys:
        if key not in header:
            raise FormatError(f"missing header {key}=", None, source)
    base = _parse_poset_lines(base_lines, source)
    assign = {}
    cache: dict = {}
    for no, cell, ref in assign_refs:
        if cell not in base:
            raise FormatError(f"unknown cell {cell!r}", no, source)
        if cell in assign:
            raise FormatError(f"cell {cell!r} assigned twice", no, source)
        if ref not in cache:
            try:
                cache[ref] = loader(ref)
            except OSError as exc:
                raise FormatError(f"cannot read {ref}: {exc.strerror}", no, source) from None
        assign[cell] = cache[ref]
    return header, base, assign


def _file_loader(directory: str):
    return lambda ref: read_om(os.path.join(directory, ref))


def parse_bundle(text: str, loader: Callable[[str], OrientedMatroid],
                 source: str | None = None) -> MatroidBundle:
    _, base, assign = _parse_assignment_file(text, source, loader)
    return MatroidBundle(base, assign)


def read_bundle(path: str) -> MatroidBundle:
    with open(path) as fh:
        text = fh.read()
    return parse_bundle(text, _file_loader(os.path.dirname(path) or "."), source=path)


def parse_lift(text: str, bundle: MatroidBundle, loader: Callable[[str], OrientedMatroid],
               source: str | None = None) -> VectorFieldLift:
    header, base, lift = _parse_assignment_file(text, source, loader, header_keys=("n", "l"))
    if base != bundle.base:
        raise FormatError("lift base differs from the bundle base", None, source)
    if header["n"] != len(bundle.elements):
        raise FormatError(f"n={header['n']} but the bundle has {len(bundle.elements)} elements",
                          None, source)
    return VectorFieldLift(bundle, lift, header["l"])


def read_lift(path: str, bundle: MatroidBundle) -> VectorFieldLift:
    with open(path) as fh:
        text = fh.read()
    return parse_lift(text, bundle, _file_loader(os.path.dirname(path) or "."), source=path)


def _write_assignment(path: str, base: Poset, assign: dict, prefix: str, header: str = "") -> None:
    directory = os.path.dirname(path) or "."
    names: dict = {}
    lines = [header] if header else []
    lines.append("base:")
    lines.append(emit_poset(base).rstrip("\n"))
    for x in base.items:
        M = assign[x]
        if M not in names:
            names[M] = f"{prefix}{len(names)}.om"
            write_om(M, os.path.join(directory, names[M]))
        lines.append(f"assign: {x} = {names[M]}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def write_bundle(xi: MatroidBundle, path: str, prefix: str | None = None) -> None:
    """Write ``path`` plus one OM file per distinct fiber next to it."""
    stem = os.path.splitext(os.path.basename(path))[0]
    _write_assignment(path, xi.base, xi.assign, prefix or f"{stem}_")


def write_lift(nu: VectorFieldLift, path: str, prefix: str | None = None) -> None:
    stem = os.path.splitext(os.path.basename(path))[0]
    header = f"n={len(nu.bundle.elements)}\nl={nu.l}"
    _write_assignment(path, nu.bundle.base, nu.lift, prefix or f"{stem}_", header)


# configurations -----------------------------------------------------------

def parse_rational(token: str) -> Fraction:
    try:
        return Fraction(token)
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"not an exact rational: {token!r}") from None


def parse_config(text: str, source: str | None = None) -> RationalConfiguration:
    """One vector per line: ``label: p/q p/q ...``."""
    labels, vectors = [], []
    for no, line in _lines(text):
        if ":" not in line:
            raise FormatError(f"expected 'label: coordinates', got {line!r}", no, source)
        label, coords = line.split(":", 1)
        try:
            vec = [parse_rational(t) for t in coords.split()]
        except ValueError as exc:
            raise FormatError(str(exc), no, source) from None
        if vectors and len(vec) != len(vectors[0]):
            raise FormatError("vectors have different lengths", no, source)
        labels.append(label.strip())
        vectors.append(vec)
    if not vectors:
        raise FormatError("empty configuration", None, source)
    try:
        return RationalConfiguration(labels, vectors)
    except ValueError as exc:
        raise FormatError(str(exc), None, source) from None


def parse_plane(text: str, source: str | None = None) -> list[list[Fraction]]:
    """One basis vector per line, whitespace-separated rationals."""
    rows = []
    for no, line in _lines(text):
        try:
            rows.append([parse_rational(t) for t in line.split()])
        except ValueError as exc:
            raise FormatError(str(exc), no, source) from None
    if not rows:
        raise FormatError("empty plane basis", None, source)
    return rows
