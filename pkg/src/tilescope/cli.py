"""``tilescope`` command line.

Exit codes: 0 success, 1 verification failure, 2 usage error (bad flags,
unreadable files, broken preconditions), 3 hypothesis violation (JSON
diagnostics on stderr).
"""

from __future__ import annotations

import argparse
import json
import sys
from itertools import combinations
from pathlib import Path
from typing import Any, Sequence

from . import constructions as cons
from .errors import HypothesisError, PreconditionError, SolverExhaustedError, TilescopeError
from .graph import ColoredGraph, enumerate_cliques, from_mask
from .io import dumps, export_dot, graph_from_json, graph_to_json, to_jsonable
from .structure import (build_chain, bowtie_violations, check_bowtie, classify_triple,
                        find_few_color_set, find_monochromatic_set)
from .templates import boost_discrepancy, find_templates
from .tilings import enumerate_tilings, find_tiling, sample_tilings
from .verify import SUITES, certify_discrepancy, run_suite


class UsageError(Exception):
    pass


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tilescope", description="Discrepancy of K_r-tilings in edge-colored graphs.")
    sub = p.add_subparsers(dest="cmd", required=True)

    c = sub.add_parser("construct", help="build a zero-discrepancy construction")
    c.add_argument("--r", type=int, required=True)
    c.add_argument("--q", type=int, required=True)
    c.add_argument("--preset", choices=sorted(cons.PRESETS), required=True)
    g = c.add_mutually_exclusive_group(required=True)
    g.add_argument("--n", type=int)
    g.add_argument("--min-n", type=int, dest="min_n", metavar="FLOOR")
    c.add_argument("--out", type=Path)
    c.add_argument("--sidecar", type=Path)
    c.add_argument("--format", choices=("json", "dot"), default="json")

    t = sub.add_parser("tilings", help="find, enumerate or sample K_r-tilings")
    _graph_args(t)
    m = t.add_mutually_exclusive_group(required=True)
    m.add_argument("--find", action="store_true")
    m.add_argument("--enumerate", action="store_true")
    m.add_argument("--sample", type=int, metavar="N")
    t.add_argument("--limit", type=int)
    t.add_argument("--seed", type=int, default=0)
    t.add_argument("--format", choices=("json", "table", "dot"), default="json")

    tp = sub.add_parser("templates", help="list K_r-templates")
    _graph_args(tp)
    tp.add_argument("--limit", type=int)
    tp.add_argument("--format", choices=("json", "table", "dot"), default="json")

    b = sub.add_parser("boost", help="two-tiling discrepancy boost")
    _graph_args(b)

    cf = sub.add_parser("certify", help="tiling with a certified color share")
    _graph_args(cf)

    a = sub.add_parser("analyze", help="structural analysis with witnesses")
    _graph_args(a)
    am = a.add_mutually_exclusive_group(required=True)
    am.add_argument("--few-color-set", action="store_true", dest="few")
    am.add_argument("--mono-set", action="store_true", dest="mono")
    am.add_argument("--chain", nargs=5, metavar=("V", "K", "X", "U", "W"),
                    help="K as a comma-separated vertex list")
    am.add_argument("--triples", action="store_true")
    am.add_argument("--bowties", action="store_true")
    a.add_argument("--limit", type=int, default=1000)

    v = sub.add_parser("verify", help="run verification suites")
    v.add_argument("--suite", choices=SUITES + ("all",), required=True)
    v.add_argument("--r", type=int)
    v.add_argument("--q", type=int)
    v.add_argument("--n", type=int)
    v.add_argument("--seed", type=int, default=1)
    v.add_argument("--format", choices=("json", "table"), default="json")

    th = sub.add_parser("thresholds", help="threshold table")
    th.add_argument("--r", type=int, action="append")
    th.add_argument("--q-max", type=int, default=13, dest="q_max")
    th.add_argument("--format", choices=("json", "table"), default="json")
    return p


def _graph_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--graph", type=Path, required=True)
    p.add_argument("--r", type=int, default=3)


def _load(path: Path) -> ColoredGraph:
    try:
        text = path.read_text()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror or e}") from None
    return graph_from_json(text)


def _emit(obj: Any) -> None:
    sys.stdout.write(dumps(obj) + "\n")


def _construct(args) -> int:
    p = cons.preset(args.preset, args.r, args.q)
    n = args.n if args.n is not None else cons.minimal_admissible_n(p, args.min_n)
    cg = cons.build(p, n)
    text = graph_to_json(cg.graph) + "\n"
    side = {"r": args.r, "q": args.q, "preset": args.preset, "variant": p.variant, "n": n,
            "parts": cg.parts, "y_parts": cg.y_parts,
            "g_map": [[i, j, c] for (i, j), c in sorted(cg.g_map.items())],
            "alphas": [cons.fraction_str(a) for a in p.alphas],
            "predicted_counts": list(cons.expected_color_counts(p, n)),
            "min_degree": cg.min_degree}
    if args.format == "dot":
        text = export_dot(cg.graph, parts=cg.parts)
    if args.out is not None:
        args.out.write_text(text)
        sidecar = args.sidecar or args.out.with_suffix(".sidecar.json")
    else:
        sys.stdout.write(text)
        sidecar = args.sidecar
    if sidecar is not None:
        sidecar.write_text(dumps(side) + "\n")
    return 0


def _tiling_json(g: ColoredGraph, t) -> dict[str, Any]:
    from .graph import discrepancy

    prof = t.profile(g)
    return {"blocks": t, "profile": list(prof), "discrepancy": discrepancy(prof)}


def _tilings(args) -> int:
    g = _load(args.graph)
    if args.find:
        t = find_tiling(g, args.r)
        ts = [] if t is None else [t]
    elif args.enumerate:
        ts = list(enumerate_tilings(g, args.r, args.limit))
    else:
        ts = sample_tilings(g, args.r, args.sample, args.seed)
    if args.format == "dot":
        sys.stdout.write(export_dot(g, tiling=ts[0] if ts else None))
    elif args.format == "table":
        for t in ts:
            d = _tiling_json(g, t)
            print(f"{[list(b) for b in t.blocks]}  profile={d['profile']}  disc={d['discrepancy']}")
        print(f"{len(ts)} tiling(s)")
    else:
        _emit({"count": len(ts), "tilings": [_tiling_json(g, t) for t in ts]})
    return 0


def _templates(args) -> int:
    g = _load(args.graph)
    ts = list(find_templates(g, args.r, args.limit))
    if args.format == "dot":
        sys.stdout.write(export_dot(g, template=ts[0] if ts else None))
    elif args.format == "table":
        for t in ts:
            print(f"center={list(t.center)} cycle={list(t.cycle)}")
        print(f"{len(ts)} template(s)")
    else:
        _emit({"count": len(ts), "templates": ts})
    return 0


def _boost(args) -> int:
    g = _load(args.graph)
    b = boost_discrepancy(g, args.r)
    if b is None:
        _emit({"boost": None})
    else:
        _emit({"boost": {"tiling": _tiling_json(g, b.tiling), "color": b.color, "margin": b.margin,
                         "copies": b.copies, "switching": b.switching}})
    return 0


def _certify(args) -> int:
    g = _load(args.graph)
    c = certify_discrepancy(g, args.r)
    _emit({"label": c.label, "path": c.path, "tiling": _tiling_json(g, c.tiling), "color": c.color,
           "fraction": c.fraction, "bound": c.bound, "U": c.U, "diagnostics": c.diagnostics})
    return 0


def _analyze(args) -> int:
    g, r = _load(args.graph), args.r
    if args.few or args.mono:
        res = find_few_color_set(g, r) if args.few else find_monochromatic_set(g, r)
        _emit({"U": res.U, "size": len(res.U), "colors": res.colors, "case": res.case,
               "vertex": res.vertex, "clique": res.clique, "steps": res.steps, "parts": res.parts})
        return 0
    if args.chain:
        try:
            v, x, u, w = (int(s) for s in (args.chain[0], *args.chain[2:]))
            K = [int(s) for s in args.chain[1].split(",") if s]
        except ValueError:
            raise UsageError("--chain expects V K X U W with K comma-separated") from None
        ch = build_chain(g, v, K, x, u, w)
        _emit({"v": v, "anchor": ch.anchor, "target": ch.target, "m": ch.m, "cliques": ch.cliques,
               "violations": ch.violations(g, K)})
        return 0
    if args.triples:
        counts = {"Excellent": 0, "Good": 0, "Neither": 0}
        examples = []
        seen = 0
        for v in range(g.n):
            Ks = list(enumerate_cliques(g, r, from_mask(g.adj(v))))
            for K1, K2 in combinations(Ks, 2):
                if len(set(K1) & set(K2)) != r - 2:
                    continue
                tc = classify_triple(g, r, v, K1, K2)
                counts[tc.verdict] += 1
                if tc.verdict == "Neither" and len(examples) < 10:
                    examples.append({"v": v, "K1": K1, "K2": K2, "witness": tc.witness})
                seen += 1
                if seen >= args.limit:
                    break
            if seen >= args.limit:
                break
        _emit({"triples": seen, "verdicts": counts, "neither_examples": examples,
               "truncated": seen >= args.limit})
        return 0
    out = []
    for center, b in bowtie_violations(g, r, limit=args.limit):
        chk = check_bowtie(g, r, center, b)
        out.append({"center": center, "bowtie": b, "left": chk.left, "right": chk.right,
                    "witness": chk.witness})
    _emit({"violations": len(out), "details": out})
    return 0


def _verify(args) -> int:
    rep = run_suite(args.suite, args.r, args.q, args.n, args.seed)
    if args.format == "table":
        print(rep.table())
    else:
        _emit(rep.to_json())
    return 0 if rep.passed else 1


def _thresholds(args) -> int:
    rows = []
    for r in args.r or [3, 4]:
        for q in range(2, args.q_max + 1):
            t = cons.threshold(r, q)
            rows.append({"r": r, "q": q, "threshold": t, "regime": cons.threshold_regime(r, q)})
    if args.format == "table":
        print(f"{'r':>3} {'q':>3} {'threshold':>10}  regime")
        for row in rows:
            t = row["threshold"]
            print(f"{row['r']:>3} {row['q']:>3} {cons.fraction_str(t) if t is not None else '-':>10}  {row['regime']}")
    else:
        _emit({"rows": rows})
    return 0


COMMANDS = {"construct": _construct, "tilings": _tilings, "templates": _templates, "boost": _boost,
            "certify": _certify, "analyze": _analyze, "verify": _verify, "thresholds": _thresholds}


def main(argv: Sequence[str] | None = None) -> int:
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return COMMANDS[args.cmd](args)
    except HypothesisError as e:
        sys.stderr.write(json.dumps(to_jsonable(e.to_json()), sort_keys=True) + "\n")
        return 3
    except (UsageError, PreconditionError) as e:
        sys.stderr.write(f"tilescope: error: {e}\n")
        return 2
    except SolverExhaustedError as e:
        sys.stderr.write(f"tilescope: {e}\n")
        return 1
    except TilescopeError as e:
        sys.stderr.write(f"tilescope: {e}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
