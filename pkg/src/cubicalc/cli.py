"""Command-line frontend.

Verbs: slope, derive, table, check, eval.  Exit codes: 0 success, 1 check
failure (with a witness report), 2 usage or parse error.  Output is plain
text or JSON (--format); everything is exact and deterministically ordered.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .checks import check_presentation, first_failure, reports_ok
from .constructions import (gfull, gsy, pair_groupoid, scaled_action,
                            scaleoid, tangent)
from .derive import display_label, monomial_key, vlab, tlab
from .laws import derive_law_full
from .parser import ParseError, parse
from .polymap import PolyError
from .presentation import SamplingError
from .rings import RingError, ring_from_spec
from .slopes import slope, sym_slope_closed, sym_slope_iterated
from .tables import edge_table, render_rows, vertex_table
from .twotyped import g_overline


class UsageError(ValueError):
    pass


def _read_expr(args) -> str:
    if args.expr:
        return args.expr
    if args.file:
        if args.file == "-":
            return sys.stdin.read()
        with open(args.file, "r", encoding="utf-8") as fh:
            return fh.read()
    raise UsageError("one of --expr or --file is required")


def _parse_scalars(ring, text, expect: int | None = None):
    vals = [ring.parse(x.strip()) for x in text.split(",")] if text else []
    if expect is not None and len(vals) != expect:
        raise UsageError(f"expected {expect} comma-separated values, got {len(vals)}")
    return vals


def _emit(args, payload_text: str, payload_json):
    if args.format == "json":
        print(json.dumps(payload_json, indent=2, sort_keys=True))
    else:
        print(payload_text)


def _fmt_scalar(ring, x, digits: int | None):
    if digits is None:
        return ring.fmt(x)
    if not isinstance(x, Fraction):
        return ring.fmt(x)
    scaled = abs(x) * 10 ** digits
    whole = int(scaled)
    if 2 * (scaled - whole) >= 1:
        whole += 1
    sign = "-" if x < 0 else ""
    s = str(whole).rjust(digits + 1, "0")
    return f"{sign}{s[:-digits]}.{s[-digits:]}" if digits else f"{sign}{s}"


def cmd_slope(args) -> int:
    ring = ring_from_spec(args.ring)
    f = parse(_read_expr(args), ring)
    s = slope(f)
    text = s.factorizer.fmt(monomial_order=None)
    _emit(args, text, {
        "inputs": [display_label(l) if not isinstance(l, str) else l
                   for l in s.factorizer.in_labels],
        "components": [c.fmt([str(l) for l in s.factorizer.in_labels])
                       for c in s.factorizer.comps]})
    return 0


def cmd_derive(args) -> int:
    ring = ring_from_spec(args.ring)
    f = parse(_read_expr(args), ring)
    if args.N:
        N = tuple(int(x) for x in args.N.split(","))
    else:
        N = tuple(range(1, (args.n or 1) + 1))
    law = derive_law_full(f, N)
    if args.alpha is not None:
        alpha = frozenset(int(c) for c in args.alpha) if args.alpha != "0" \
            else frozenset()
    else:
        alpha = frozenset(N)
    m = law.vertex_maps[alpha]
    text = m.fmt(monomial_order=monomial_key)
    _emit(args, text, {
        "alpha": sorted(alpha),
        "inputs": [display_label(l) for l in m.in_labels],
        "outputs": [display_label(l) for l in m.out_labels],
        "components": [c.fmt([display_label(l) for l in m.in_labels])
                       for c in m.comps]})
    return 0


def cmd_table(args) -> int:
    ring = ring_from_spec(args.ring)
    if not args.N:
        raise UsageError("--N is required for tables")
    N = tuple(int(x) for x in args.N.split(","))
    kind = args.construction
    if kind not in ("gfull", "scaleoid"):
        raise UsageError("tables exist for --construction gfull|scaleoid")
    if args.what == "vertex":
        rows = vertex_table(N, vdim=0 if kind == "scaleoid" else 1, ring=ring)
        if args.alpha is not None:
            rows = [r for r in rows if r["alpha"] == args.alpha]
        _emit(args, render_rows(rows, ["N", "alpha", "vertex_set", "coords"]), rows)
        return 0
    if args.what == "edge":
        rows = edge_table(N, scaleoid_table=(kind == "scaleoid"), ring=ring)
        if args.edge:
            rows = [r for r in rows if r["edge"] == args.edge]
        _emit(args, render_rows(rows, ["N", "edge", "formula", "outputs"]), rows)
        return 0
    raise UsageError("--what must be vertex or edge")


_CONSTRUCTIONS = ("pg", "sa", "gsy", "gfull", "scaleoid", "tangent", "goverline")


def cmd_check(args) -> int:
    ring = ring_from_spec(args.ring)
    n = args.n or 2
    kind = args.construction
    if kind == "pg":
        pres = pair_groupoid(n, args.vdim, ring)
    elif kind == "sa":
        pres = scaled_action(n, args.vdim, ring)
    elif kind == "gsy":
        t = _parse_scalars(ring, args.t, n) if args.t else [ring.one()] * n
        pres = gsy(n, t, args.vdim, ring)
        if args.s:
            from .checks import check_morphism
            from .constructions import gsy_scalar_action

            s = _parse_scalars(ring, args.s, n)
            src, dst, maps = gsy_scalar_action(n, s, t, args.vdim, ring)
            reports = check_morphism(src, dst, maps, seed=args.seed,
                                     samples=args.samples)
            reports += check_presentation(pres, seed=args.seed,
                                          samples=args.samples)
            payload = [r.to_json() for r in reports]
            if args.format == "json":
                print(json.dumps({"construction": pres.name,
                                  "scalar_action": [ring.fmt(x) for x in s],
                                  "reports": payload}, indent=2, sort_keys=True))
            else:
                bad = first_failure(reports)
                print(f"{pres.name} with Phi_s: "
                      f"{'all pass' if bad is None else 'FAILURES'}")
                if bad is not None:
                    print(f"first failure: {bad.law} at {bad.location}")
            return 0 if reports_ok(reports) else 1
    elif kind == "gfull":
        pres = gfull(n, args.vdim, ring)
    elif kind == "scaleoid":
        pres = scaleoid(n, ring)
    elif kind == "tangent":
        pres = tangent(n, args.vdim, ring)
    elif kind == "goverline":
        pres = g_overline(n, args.vdim, ring)
    else:
        raise UsageError(f"--construction must be one of {_CONSTRUCTIONS}")
    reports = check_presentation(pres, seed=args.seed, samples=args.samples)
    payload = [r.to_json() for r in reports]
    if args.format == "json":
        print(json.dumps({"construction": pres.name, "reports": payload},
                         indent=2, sort_keys=True))
    else:
        bad = first_failure(reports)
        print(f"{pres.name}: {len(reports)} laws checked, "
              f"{'all pass' if bad is None else 'FAILURES'}")
        if bad is not None:
            print(f"first failure: {bad.law} at {bad.location}")
            print(json.dumps(bad.witness, indent=2, sort_keys=True))
    return 0 if reports_ok(reports) else 1


def cmd_eval(args) -> int:
    ring = ring_from_spec(args.ring)
    f = parse(_read_expr(args), ring)
    n = args.order
    p = f.in_arity
    point = _parse_scalars(ring, args.point, p)
    t = _parse_scalars(ring, args.t, n)
    if n == 1 and args.mode == "closed":
        args.mode = "iterated"  # the factorizer itself is exact at any t
    subsets = [frozenset()]
    full = list(range(1, n + 1))
    from itertools import combinations

    for k in range(1, n + 1):
        for c in combinations(full, k):
            subsets.append(frozenset(c))
    subsets.sort(key=lambda s: (len(s), tuple(sorted(s))))
    vvals = _parse_scalars(ring, args.v) if args.v else []
    if len(vvals) != (len(subsets) - 1) * p:
        raise UsageError(f"--v needs {(len(subsets) - 1) * p} values "
                         f"(all v_beta, beta nonempty, in (length, lex) order)")
    v_by = {frozenset(): list(point)}
    for idx, s in enumerate(s for s in subsets if s):
        v_by[s] = vvals[idx * p:(idx + 1) * p]

    if args.mode == "closed":
        vals = sym_slope_closed(f, n, t, v_by)
    else:
        m = sym_slope_iterated(f, n)
        pt = {}
        for s, vec in v_by.items():
            for c, x in enumerate(vec):
                pt[vlab(s, c)] = x
        for i, tv in enumerate(t):
            pt[tlab({i + 1})] = tv
        vals = [m.component(l).eval([pt[x] for x in m.in_labels])
                for l in m.out_labels]
    text = ", ".join(_fmt_scalar(ring, x, args.digits) for x in vals)
    _emit(args, text, {"value": [ring.fmt(x) for x in vals]})
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cubicalc",
                                 description="exact cubic difference calculus")
    sub = ap.add_subparsers(dest="verb", required=True)

    def common(p):
        p.add_argument("--ring", default="rational",
                       help="rational or mod:<m>")
        p.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("slope", help="first order difference factorizer")
    p.add_argument("--expr")
    p.add_argument("--file")
    common(p)
    p.set_defaults(func=cmd_slope)

    p = sub.add_parser("derive", help="full cubic vertex map of a map")
    p.add_argument("--expr")
    p.add_argument("--file")
    p.add_argument("--n", type=int)
    p.add_argument("--N", help="comma list of directions, e.g. 1,3")
    p.add_argument("--alpha", help="vertex as digit string, e.g. 12 (0 = bottom)")
    common(p)
    p.set_defaults(func=cmd_derive)

    p = sub.add_parser("table", help="vertex / edge tables of G^N and G^N 0")
    p.add_argument("--construction", default="gfull")
    p.add_argument("--N", help="comma list of directions")
    p.add_argument("--what", choices=("vertex", "edge"), default="vertex")
    p.add_argument("--alpha")
    p.add_argument("--edge", help='edge as "beta>alpha", e.g. "2>12"')
    common(p)
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("check", help="run the axiom suite on a construction")
    p.add_argument("--construction", choices=_CONSTRUCTIONS, required=True)
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--t", help="comma list of scales for gsy")
    p.add_argument("--s", help="scalars: also verify the action morphism "
                               "Phi_s for gsy")
    p.add_argument("--vdim", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=30)
    common(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("eval", help="evaluate difference quotients exactly")
    p.add_argument("--expr")
    p.add_argument("--file")
    p.add_argument("--order", type=int, default=1)
    p.add_argument("--point", required=True, help="v_0 (comma list)")
    p.add_argument("--v", help="v_beta values, (length, lex) order")
    p.add_argument("--t", required=True, help="comma list of scales")
    p.add_argument("--mode", choices=("closed", "iterated"), default="closed")
    p.add_argument("--digits", type=int,
                   help="render decimals with this many digits (display only)")
    common(p)
    p.set_defaults(func=cmd_eval)
    return ap


def run(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
        return args.func(args)
    except (UsageError, ParseError, RingError, PolyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SamplingError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except BrokenPipeError:
        return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
