"""``matgrass`` command line.

Exit codes: 0 success, 1 the mathematics says no (e.g. a failed fiber
audit), 2 bad input.  ``--json`` prints a deterministic machine-readable
report; ``--timing`` adds wall-clock time to it (and so breaks byte equality).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time

from . import __version__
from . import fixtures as fx
from .bundles import (BundleError, babson_check, disk_bundle, fiber_audit, sphere_bundle,
                      sum_relabeling, whitney_sum)
from .charclass import euler_class, orientation_lift, sw_classes, thom_class
from .grassmann import EnumerationLimit, enumerate_rank_k, gamma, macpherson, mu_point
from .homology import betti_gf2, cohomology_basis, integer_homology, reduced_betti_gf2
from .io import (FormatError, emit_om, emit_poset, parse_config, parse_plane, parse_poset,
                 read_bundle, read_lift, read_om, strip_comment, write_bundle, write_om)
from .om import DomainError, InvalidOrientedMatroid
from .poset import NotAPartialOrder, Poset, connected_components, order_complex
from .vecfields import obstruction_report

__all__ = ["main", "build_parser", "run"]

SCHEMA = 1


class MathFailure(Exception):
    """Raised to turn a computed negative answer into exit code 1."""


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (str, int, float, bool)) or x is None:
        return x
    return str(x)


class Run:
    def __init__(self, argv):
        self.argv = list(argv)
        self.inputs: list[str] = []
        self.lines: list[str] = []
        self.results: dict = {}
        self.ok = True
        self._digest = hashlib.sha256()

    def read(self, path: str) -> str:
        """Read an input file, folding its bytes into the report digest."""
        with open(path, "rb") as fh:
            data = fh.read()
        self.inputs.append(path)
        self._digest.update(data)
        return data.decode()

    def say(self, line: str):
        self.lines.append(line)

    def report(self, timing: float | None) -> dict:
        digest = self._digest.hexdigest()
        out = {
            "schema": SCHEMA,
            "tool": f"matgrass {__version__}",
            "command": self.argv,
            "inputs": {"files": self.inputs, "sha256": digest},
            "ok": self.ok,
            "results": _jsonable(self.results),
        }
        if timing is not None:
            out["timing_seconds"] = round(timing, 3)
        return out


def _bundle_inputs(run: Run, path: str):
    """Hash the bundle file and every OM file it references."""
    text = run.read(path)
    directory = os.path.dirname(path) or "."
    for line in text.splitlines():
        line = strip_comment(line)
        if line.startswith("assign:") and "=" in line:
            ref = line.split("=", 1)[1].strip()
            p = os.path.join(directory, ref)
            if os.path.exists(p) and p not in run.inputs:
                run.read(p)
    return read_bundle(path)


def _betti_text(b) -> str:
    return "(" + ",".join(map(str, b)) + ")"


def _int_homology_text(h) -> list[str]:
    out = []
    for d, (free, tors) in enumerate(h):
        parts = (["Z^%d" % free] if free > 1 else ["Z"] if free == 1 else []) + [f"Z/{t}" for t in tors]
        out.append(f"H{d} = {' + '.join(parts) if parts else '0'}")
    return out


# commands ------------------------------------------------------------------

def cmd_enum(args, run: Run):
    elements = [e for e in args.elements.split(",") if e]
    try:
        oms = enumerate_rank_k(elements, args.rank)
    except ValueError as exc:
        if isinstance(exc, EnumerationLimit):
            raise
        raise FormatError(str(exc)) from None
    run.results = {"elements": elements, "rank": args.rank, "count": len(oms)}
    run.say(f"{len(oms)} oriented matroids of rank {args.rank} on {','.join(elements)}")
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        width = len(str(len(oms)))
        for i, M in enumerate(oms):
            write_om(M, os.path.join(args.out, f"m{i:0{width}d}.om"))
        run.say(f"wrote {len(oms)} files to {args.out}")


def _poset_topology(run: Run, P: Poset, args, names=None):
    comps = connected_components(P)
    run.results["components"] = len(comps)
    run.say(f"{len(P)} items, {len(comps)} connected component(s)")
    if getattr(args, "homology", False) or getattr(args, "integer", False):
        K = order_complex(P)
        run.results["f_vector"] = list(K.f_vector())
        b = betti_gf2(K)
        run.results["betti_gf2"] = b
        run.say(f"order complex f-vector {_betti_text(K.f_vector())}")
        run.say(f"mod 2 Betti numbers {_betti_text(b)}")
        if getattr(args, "integer", False):
            h = integer_homology(K)
            run.results["integer_homology"] = [{"free": f, "torsion": t} for f, t in h]
            for line in _int_homology_text(h):
                run.say(line)


def _write_poset_with_oms(P: Poset, path: str):
    names = {M: f"p{i}" for i, M in enumerate(P.items)}
    directory = os.path.dirname(path) or "."
    stem = os.path.splitext(os.path.basename(path))[0]
    with open(path, "w") as fh:
        fh.write(emit_poset(P, name=lambda M: names[M]))
    odir = os.path.join(directory, f"{stem}_oms")
    os.makedirs(odir, exist_ok=True)
    for M, name in names.items():
        write_om(M, os.path.join(odir, f"{name}.om"))


def cmd_macp(args, run: Run):
    P = macpherson(args.k, args.n)
    run.results = {"k": args.k, "n": args.n, "items": len(P)}
    run.say(f"MacP({args.k},{args.n})")
    _poset_topology(run, P, args)
    if args.poset:
        _write_poset_with_oms(P, args.poset)
        run.say(f"wrote {args.poset}")


def cmd_gamma(args, run: Run):
    run.read(args.om)
    M = read_om(args.om)
    try:
        P = gamma(args.k, M)
    except EnumerationLimit:
        raise
    except ValueError as exc:  # k above the rank of M
        raise FormatError(str(exc)) from None
    run.results = {"k": args.k, "items": len(P)}
    run.say(f"Gamma({args.k}, M) for M of rank {M.rank} on {len(M.elements)} elements")
    _poset_topology(run, P, args)
    if args.poset:
        _write_poset_with_oms(P, args.poset)


def cmd_mu(args, run: Run):
    config = parse_config(run.read(args.config), args.config)
    plane = parse_plane(run.read(args.plane), args.plane)
    try:
        M = mu_point(config, plane)
    except ValueError as exc:  # dependent basis or dimension mismatch
        raise FormatError(str(exc)) from None
    text = emit_om(M)
    run.results = {"rank": M.rank, "loops": list(M.loops()), "om": text.splitlines()}
    if args.out:
        write_om(M, args.out)
    run.say(text.rstrip("\n"))


def _audit(run: Run, xi, label: str, total):
    rows = fiber_audit(total)
    good = all(r.ok for r in rows)
    run.results[label] = [{"item": r.item, "betti": list(r.betti), "expected": list(r.expected),
                           "ok": r.ok} for r in rows]
    kind = "sphere" if total.sphere else "disk"
    target = f"S^{xi.rank - 1}" if total.sphere else "a point"
    bad = [r for r in rows if not r.ok]
    run.say(f"{kind} fibers: {len(rows) - len(bad)}/{len(rows)} have the mod 2 homology of {target}")
    for r in bad:
        run.say(f"  fiber over {r.item}: reduced Betti {_betti_text(r.betti)}")
    return good


def cmd_bundle(args, run: Run):
    if args.action == "sum":
        xi1 = _bundle_inputs(run, args.files[0])
        xi2 = _bundle_inputs(run, args.files[1])
        r1, r2 = sum_relabeling(xi1.elements, xi2.elements)
        total = whitney_sum(xi1, xi2, relabel=True)
        renamed = {**{f"1:{k}": v for k, v in r1.items() if k != v},
                   **{f"2:{k}": v for k, v in r2.items() if k != v}}
        run.results = {"rank": total.rank, "elements": list(total.elements), "relabeled": renamed}
        run.say(f"Whitney sum: rank {total.rank} on {' '.join(total.elements)}")
        if renamed:
            run.say("relabeled: " + ", ".join(f"{k} -> {v}" for k, v in renamed.items()))
        good = _audit(run, total, "sphere_fibers", sphere_bundle(total))
        if args.out:
            write_bundle(total, args.out)
            run.say(f"wrote {args.out}")
        if not good:
            raise MathFailure
        return
    if len(args.files) != 1:
        raise FormatError(f"bundle {args.action} takes one bundle file")
    xi = _bundle_inputs(run, args.files[0])
    run.results = {"rank": xi.rank, "elements": list(xi.elements), "base_items": len(xi.base)}
    if args.action == "audit":
        ok1 = _audit(run, xi, "sphere_fibers", sphere_bundle(xi))
        ok2 = _audit(run, xi, "disk_fibers", disk_bundle(xi))
        if not (ok1 and ok2):
            raise MathFailure
    elif args.action == "babson":
        good = True
        for label, total in (("sphere", sphere_bundle(xi)), ("disk", disk_bundle(xi))):
            rep = babson_check(total.projection)
            run.results[label] = {"summary": rep.summary, "counts": rep.counts(),
                                  "failures": [{"p": v.p, "q": v.q, "side": v.side}
                                               for v in rep.intervals if v.verdict != "certified"]}
            c = rep.counts()
            run.say(f"{label} bundle projection: {rep.summary} "
                    f"({c['certified']} certified, {c['homology-trivial']} homology-trivial, "
                    f"{c['fails']} failing intervals)")
            good &= rep.ok
        run.say("note: quasifibration evidence only; no fibration replacement is constructed")
        if not good:
            raise MathFailure


def _class_entry(cx, d, bits, coords):
    supp = [list(cx.simplex(d, i)) for i in range(bits.bit_length()) if bits >> i & 1]
    return {"degree": d, "coordinates": coords, "zero": not any(coords), "support": supp}


def cmd_sw(args, run: Run):
    xi = _bundle_inputs(run, args.bundle)
    th = thom_class(xi, integral=False)
    w = sw_classes(th)
    run.results = {
        "rank": xi.rank,
        "classes": [_class_entry(w.base, i, c.bits, w.coords[i]) for i, c in enumerate(w.classes)],
        "summary": w.summary(),
        "checks": w.checks,
    }
    run.say(f"w = {w.summary()}")
    for i in range(len(w.classes)):
        run.say(f"  w{i}: {'zero' if w.is_zero(i) else 'nonzero'}")
    for name, val in w.checks.items():
        run.say(f"  check {name}: {'ok' if val else 'FAILED'}")
    if not all(w.checks.values()):
        raise MathFailure


def cmd_euler(args, run: Run):
    xi = _bundle_inputs(run, args.bundle)
    th = thom_class(xi, integral=True)
    if th.UZ is None:
        run.results = {"orientable": False, "reason": th.uz_note}
        run.say(f"not orientable: {th.uz_note}")
        raise MathFailure
    e = euler_class(th)
    run.results = {"orientable": True, "degree": e.degree, "zero": e.is_zero,
                   "cochain": sorted(e.cochain.items()), "pullback_iso_verified": e.iso_verified}
    run.say(f"Euler class in H^{e.degree}: {'zero' if e.is_zero else 'nonzero'}")
    if not e.iso_verified:
        run.say("warning: p^* is not an isomorphism in this degree (mod 2 check)")


def cmd_orient(args, run: Run):
    xi = _bundle_inputs(run, args.bundle)
    lift = orientation_lift(xi)
    if lift is None:
        run.results = {"orientation": None}
        run.say("no orientation: sign propagation meets a contradiction")
    else:
        run.results = {"orientation": {x: str(chi) for x, chi in lift.items()}}
        run.say("orientation found:")
        for x, chi in lift.items():
            run.say(f"  {x}: {chi}")


def cmd_fields(args, run: Run):
    xi = _bundle_inputs(run, args.bundle)
    run.read(args.lift)
    nu = read_lift(args.lift, xi)
    rep = obstruction_report(xi, nu)
    run.results = {"k": rep.k, "l": rep.l, "w_xi": rep.w_xi, "w_quotient": rep.w_q,
                   "checks": rep.checks, "note": rep.note}
    for name, val in rep.checks.items():
        run.say(f"{name}: {'ok' if val else 'FAILED' if val is not None else 'not applicable'}")
    run.say(f"note: {rep.note}")
    if not rep.ok:
        raise MathFailure


def cmd_homology(args, run: Run):
    if bool(args.poset) == bool(args.om):
        raise FormatError("give exactly one of --poset or --om")
    if args.poset:
        P = parse_poset(run.read(args.poset), args.poset)
        run.say(f"order complex of {args.poset}")
    else:
        run.read(args.om)
        M = read_om(args.om)
        P = Poset.from_leq(M.nonzero_covectors(), lambda x, y: y.geq(x))
        run.say(f"order complex of the nonzero covectors of {args.om}")
    K = order_complex(P)
    b = betti_gf2(K)
    run.results = {"f_vector": list(K.f_vector()), "betti_gf2": b,
                   "reduced_betti_gf2": reduced_betti_gf2(K)}
    run.say(f"f-vector {_betti_text(K.f_vector())}")
    run.say(f"mod 2 Betti numbers {_betti_text(b)}")
    if args.integer:
        h = integer_homology(K)
        run.results["integer_homology"] = [{"free": f, "torsion": t} for f, t in h]
        for line in _int_homology_text(h):
            run.say(line)
    if args.cocycles:
        reps = {}
        for d in range(K.dim + 1):
            reps[d] = [c.support_indices() for c in cohomology_basis(K, d)]
        run.results["cocycles"] = reps


def cmd_selftest(args, run: Run):
    failures = []
    checked = 0
    for name in fx.BUNDLES:
        try:
            shipped = fx.load_bundle(name)
        except (OSError, FormatError) as exc:
            failures.append(f"{name}: cannot load shipped file ({exc})")
            continue
        built = fx.bundle(name)
        if shipped.assign != built.assign or shipped.base != built.base:
            failures.append(f"{name}: shipped file differs from the builder")
        sph = sphere_bundle(shipped)
        if not all(r.ok for r in fiber_audit(sph)):
            failures.append(f"{name}: sphere fiber audit failed")
        th = thom_class(shipped)
        w = sw_classes(th)
        summary, orientable, e_zero = fx.EXPECTED[name]
        if w.summary() != summary:
            failures.append(f"{name}: w = {w.summary()}, expected {summary}")
        if (th.UZ is not None) != orientable or (orientation_lift(shipped) is not None) != orientable:
            failures.append(f"{name}: orientability mismatch")
        if orientable and euler_class(th).is_zero != e_zero:
            failures.append(f"{name}: Euler class mismatch")
        checked += 1
    for name in fx.LIFTS:
        try:
            nu = fx.load_lift(name)
        except (OSError, FormatError, BundleError, DomainError) as exc:
            failures.append(f"{name}: cannot load shipped lift ({exc})")
            continue
        if not obstruction_report(nu.bundle, nu).ok:
            failures.append(f"{name}: obstruction check failed")
        checked += 1
    run.results = {"checked": checked, "failures": failures}
    run.say(f"selftest: {checked} fixtures checked, {len(failures)} failure(s)")
    for f in failures:
        run.say(f"  {f}")
    if failures:
        raise MathFailure


# parser ---------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    # the flags are accepted before and after the subcommand; SUPPRESS keeps a
    # subparser from resetting a value given at the top level
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                        help="print a machine-readable report")
    common.add_argument("--timing", action="store_true", default=argparse.SUPPRESS,
                        help="include wall-clock time in the report")

    p = argparse.ArgumentParser(prog="matgrass", description=__doc__.splitlines()[0])
    p.add_argument("--json", action="store_true", help="print a machine-readable report")
    p.add_argument("--timing", action="store_true", help="include wall-clock time in the report")
    p.add_argument("--version", action="version", version=f"matgrass {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("enum", parents=[common], help="enumerate rank-k oriented matroids")
    s.add_argument("--elements", required=True, help="comma-separated labels")
    s.add_argument("--rank", type=int, required=True)
    s.add_argument("--out", help="directory for one .om file per matroid")
    s.set_defaults(func=cmd_enum)

    s = sub.add_parser("macp", parents=[common], help="the MacPhersonian MacP(k,n)")
    s.add_argument("-k", type=int, required=True)
    s.add_argument("-n", type=int, required=True)
    s.add_argument("--poset", help="write the poset (and its matroids) here")
    s.add_argument("--homology", action="store_true", help="mod 2 Betti numbers of the order complex")
    s.add_argument("--integer", action="store_true", help="integer homology as well")
    s.set_defaults(func=cmd_macp)

    s = sub.add_parser("gamma", parents=[common], help="the combinatorial Grassmannian Gamma(k,M)")
    s.add_argument("-k", type=int, required=True)
    s.add_argument("--om", required=True)
    s.add_argument("--poset")
    s.add_argument("--homology", action="store_true")
    s.add_argument("--integer", action="store_true")
    s.set_defaults(func=cmd_gamma)

    s = sub.add_parser("mu", parents=[common], help="oriented matroid of a configuration restricted to a plane")
    s.add_argument("--config", required=True, help="lines 'label: p/q p/q ...'")
    s.add_argument("--plane", required=True, help="one basis vector per line")
    s.add_argument("--out")
    s.set_defaults(func=cmd_mu)

    s = sub.add_parser("bundle", parents=[common], help="sphere/disk bundle checks and Whitney sums")
    s.add_argument("action", choices=["audit", "babson", "sum"])
    s.add_argument("files", nargs="+")
    s.add_argument("--out", help="for sum: write the sum bundle here")
    s.set_defaults(func=cmd_bundle)

    for name, func, text in (("sw", cmd_sw, "Stiefel-Whitney classes"),
                             ("euler", cmd_euler, "Euler class"),
                             ("orient", cmd_orient, "orientation lift")):
        s = sub.add_parser(name, parents=[common], help=text)
        s.add_argument("bundle")
        s.set_defaults(func=func)

    s = sub.add_parser("fields", parents=[common], help="vector field obstructions")
    s.add_argument("action", choices=["check"])
    s.add_argument("bundle")
    s.add_argument("lift")
    s.set_defaults(func=cmd_fields)

    s = sub.add_parser("homology", parents=[common], help="homology of an order complex")
    s.add_argument("--poset")
    s.add_argument("--om", help="use the poset of nonzero covectors")
    s.add_argument("--integer", action="store_true")
    s.add_argument("--cocycles", action="store_true", help="list cocycle representatives")
    s.set_defaults(func=cmd_homology)

    s = sub.add_parser("selftest", parents=[common], help="re-verify the shipped fixtures")
    s.set_defaults(func=cmd_selftest)
    return p


def run(argv=None, stdout=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    stdout = stdout or sys.stdout
    args = build_parser().parse_args(argv)
    r = Run(argv)
    start = time.perf_counter()
    code = 0
    try:
        args.func(args, r)
    except MathFailure:
        r.ok = False
        code = 1
    except (FormatError, DomainError, InvalidOrientedMatroid, BundleError, EnumerationLimit,
            NotAPartialOrder, OSError) as exc:
        msg = exc.strerror + f": {exc.filename}" if isinstance(exc, OSError) and exc.strerror else str(exc)
        print(f"matgrass: error: {msg}", file=sys.stderr)
        return 2
    elapsed = time.perf_counter() - start if args.timing else None
    if args.json:
        stdout.write(json.dumps(r.report(elapsed), sort_keys=True, indent=2) + "\n")
    else:
        for line in r.lines:
            stdout.write(line + "\n")
        if elapsed is not None:
            stdout.write(f"({elapsed:.2f} s)\n")
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
