"""Command-line front end.

Exit codes: 0 success, 2 invalid input, 3 input not LNE where LNE is
required, 4 internal certificate failure.
"""

from __future__ import annotations

import argparse
import json
import math
import random
import sys
from fractions import Fraction
from typing import List, Optional

from . import conemaps, fuzz, linktopo
from .germ import GermError, PolygonalGerm, parse_germ, write_germ
from .metric import component_edge_exponents, is_lne, tord
from .puiseux import format_series
from .reduce import (
    ClearanceFailed,
    NoEpsilonFound,
    NotLNEInput,
    PipelineStuck,
    classify_connected,
    format_trace,
)

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_NOT_LNE = 3
EXIT_CERT_FAILURE = 4

CERT_ERRORS = (ClearanceFailed, NoEpsilonFound, PipelineStuck)


def _load(path: str, truncation: Fraction) -> PolygonalGerm:
    with open(path) as fh:
        return parse_germ(fh.read(), truncation)


def _pick_t(g: PolygonalGerm, args) -> float:
    if args.tmax is not None:
        return args.tmax
    return g.t_grid(0)[0]


def cmd_validate(args) -> int:
    g = _load(args.germ, args.truncation)
    n = sum(len(c.vertices) for c in g.components)
    print(f"ok: {len(g.components)} component(s), {n} vertex arc(s)")
    print(f"cone opening a = {g.cone_opening}")
    print(f"certified t_max = {g.t_grid(0)[0]:g}")
    return EXIT_OK


def cmd_invariants(args) -> int:
    g = _load(args.germ, args.truncation)
    verdict = is_lne(g, grid_depth=args.grid_depth)
    report = {"components": [], "lne": verdict.status}
    if verdict.witness is not None:
        report["lne_witness"] = {k: str(v) for k, v in verdict.witness.items()}
    for ci, comp in enumerate(g.components):
        exps = component_edge_exponents(comp)
        tords = []
        n = len(comp.vertices)
        for i in range(n):
            for j in range(i + 1, n):
                tv = tord(comp.vertices[i], comp.vertices[j])
                tords.append({"pair": [i, j], "tord": str(tv.exponent)})
        report["components"].append(
            {
                "index": ci,
                "closed": comp.closed,
                "edge_exponents": [str(e) for e in exps],
                "tord_table": tords,
            }
        )
    print(json.dumps(report, indent=2 if args.json else None, sort_keys=True))
    return EXIT_OK


def _classify(args):
    g = _load(args.germ, args.truncation)
    form, trace = classify_connected(g)
    return g, form, trace


def cmd_classify(args) -> int:
    _, form, _ = _classify(args)
    print(str(form))
    return EXIT_OK


def cmd_reduce(args) -> int:
    g, form, trace = _classify(args)
    text = format_trace(trace)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    if args.svg:
        from .render import render_reduction

        t = _pick_t(g, args)
        germs = [g] + [mv.germ_after for mv in trace.moves]
        labels = ["initial"] + [
            f"{k}: {mv.kind} at vertex {mv.vertex}"
            for k, mv in enumerate(trace.moves)
        ]
        for path in render_reduction(germs, t, args.svg, labels):
            print("wrote", path)
    return EXIT_OK


def cmd_compare(args) -> int:
    g1 = _load(args.germ, args.truncation)
    g2 = _load(args.germ2, args.truncation)
    verdict = linktopo.decide_equivalence(g1, g2)
    print(verdict.status)
    if verdict.witness:
        print("witness:", verdict.witness)
    return EXIT_OK


def cmd_tree(args) -> int:
    g = _load(args.germ, args.truncation)
    if all(c.closed for c in g.components):
        T = linktopo.extended_tree(g)
    else:
        T = linktopo._region_tree(linktopo.arrangement(g), with_slits=True)
    for v in range(T.size):
        print(f"vertex {v}: label={T.labels[v]} neighbors={sorted(T.adjacency[v])}")
    print("canonical:", linktopo.canonical_code(T))
    return EXIT_OK


def cmd_verify_map(args) -> int:
    g = _load(args.germ, args.truncation)
    gamma = g.components[0].vertices[0 if args.arc is None else args.arc]
    model = conemaps.ConeModel(conemaps.enlarged_opening(g.cone_opening, gamma))
    a = float(model.a)

    def sampler(t: float, rng: random.Random):
        r = a * t * math.sqrt(rng.random())
        phi = rng.uniform(0.0, 2.0 * math.pi)
        return (r * math.cos(phi), r * math.sin(phi), t)

    if args.map == "translate":
        def transform(p):
            return conemaps.translate_along_arc(p, gamma, model, "forward")
    elif args.map == "dilate":
        from .puiseux import PuiseuxSeries

        f = PuiseuxSeries.constant(Fraction(args.factor).limit_denominator(10**6))

        def transform(p):
            return conemaps.dilate_by_function(p, f, model, "forward")
    else:
        raise SystemExit(f"unknown map kind {args.map!r}")

    grid = [2.0 ** (-k) for k in range(5, 5 + args.grid_depth + 1)]
    report = conemaps.verify_bilipschitz(transform, sampler, grid, seed=args.seed)
    print("verdict:", report.verdict)
    print("global ratio range: [%g, %g]" % (report.global_min, report.global_max))
    for t, lo, hi in report.per_t:
        print("t=%g  min=%g  max=%g" % (t, lo, hi))
    return EXIT_OK


def cmd_render(args) -> int:
    from .render import render_report

    g = _load(args.germ, args.truncation)
    t = _pick_t(g, args)
    for path in render_report(g, t, args.svg or "."):
        print("wrote", path)
    return EXIT_OK


def cmd_fuzz(args) -> int:
    cases = fuzz.sample_cases(
        args.seed, n_closed=args.closed, n_open=args.open, n_pinch=args.pinch
    )
    print("kind\ttag\texpected\tresult")
    for case in cases:
        if case.kind == "pinch":
            v = is_lne(case.germ)
            print(f"{case.kind}\t{case.seed_tag}\tNotLNE\t{v.status}")
            continue
        form, _ = classify_connected(case.germ)
        expected = f"{case.expected_form}({case.expected_exponent})"
        print(f"{case.kind}\t{case.seed_tag}\t{expected}\t{form}")
        if args.dump_dir:
            import os

            os.makedirs(args.dump_dir, exist_ok=True)
            stem = case.seed_tag.replace("/", "_").replace("=", "")
            with open(f"{args.dump_dir}/{stem}.germ", "w") as fh:
                fh.write(write_germ(case.germ))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tmax", type=float, default=None)
    common.add_argument("--grid-depth", type=int, default=15)
    common.add_argument("--truncation", type=Fraction, default=Fraction(12))
    common.add_argument("--svg", metavar="DIR", default=None)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--json", action="store_true")

    p = argparse.ArgumentParser(prog="lipgerm")
    sub = p.add_subparsers(dest="command", required=True)

    for name, fn, extra in (
        ("validate", cmd_validate, ()),
        ("invariants", cmd_invariants, ()),
        ("classify", cmd_classify, ()),
        ("reduce", cmd_reduce, ("output",)),
        ("tree", cmd_tree, ()),
        ("render", cmd_render, ()),
    ):
        sp = sub.add_parser(name, parents=[common])
        sp.add_argument("germ")
        if "output" in extra:
            sp.add_argument("-o", "--output", default=None)
        sp.set_defaults(func=fn)

    sp = sub.add_parser("compare", parents=[common])
    sp.add_argument("germ")
    sp.add_argument("germ2")
    sp.set_defaults(func=cmd_compare)

    sp = sub.add_parser("verify-map", parents=[common])
    sp.add_argument("germ")
    sp.add_argument("--map", choices=("translate", "dilate"), default="translate")
    sp.add_argument("--factor", type=float, default=1.5)
    sp.add_argument("--arc", type=int, default=None)
    sp.set_defaults(func=cmd_verify_map)

    sp = sub.add_parser("fuzz", parents=[common])
    sp.add_argument("--closed", type=int, default=5)
    sp.add_argument("--open", type=int, default=5)
    sp.add_argument("--pinch", type=int, default=2)
    sp.add_argument("--dump-dir", default=None)
    sp.set_defaults(func=cmd_fuzz)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except GermError as exc:
        print(f"invalid germ: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (NotLNEInput, linktopo.NotLNEInput) as exc:
        print(f"not LNE: {exc}", file=sys.stderr)
        return EXIT_NOT_LNE
    except CERT_ERRORS as exc:
        print(f"certificate failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_CERT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
