"""Acceptance criteria 1-9, one test each.

Every test prints exactly one line ``PASS criterion k: ...`` or
``FAIL criterion k: ...`` before asserting, so ``pytest -s`` (or the
captured output in ``-v`` runs) shows a compact scoreboard.
Tolerances are exact: all comparisons are on integers or Fractions.
"""

from __future__ import annotations

import json
import random
from collections import Counter
from fractions import Fraction
from itertools import combinations

import numpy as np

from helpers import (SCOREBOARD, brute_common_neighbors, brute_discrepancy, brute_min_degree, brute_tilings,
                     colors_in, complete_tiling_count, degree_ok, mono_dense, random_dense, recolor,
                     star_dense)
from tilescope import constructions as cons
from tilescope.cli import main
from tilescope.graph import complete_graph, enumerate_cliques
from tilescope.io import dumps, graph_from_json, graph_to_json
from tilescope.structure import (bowtie_violations, build_chain, check_bowtie,
                                 find_few_color_set, find_monochromatic_set)
from tilescope.templates import (blowup, canonical_tilings, check_template, find_templates,
                                 has_template)
from tilescope.tilings import (enumerate_tilings, find_tiling, minimize_crossing, sample_tilings,
                               x_induced_edges)
from tilescope.verify import (random_template_graph, run_suite, verify_extremal_bound,
                              verify_threshold_table, verify_zero_discrepancy)


def report(k: int, ok: bool, detail: str) -> None:
    line = f"{'PASS' if ok else 'FAIL'} criterion {k}: {detail}"
    print(line)
    SCOREBOARD.append(line)
    assert ok, detail


def color_counts(g, blocks):
    c = Counter(g.color(a, b) for blk in blocks for a, b in combinations(blk, 2))
    return [c[i] for i in range(1, g.q + 1)]


# ---------------------------------------------------------------- 1

def test_criterion_1_zero_discrepancy_constructions():
    bad = []
    sizes = []
    for r, q, name, n in [(3, 6, "mid", 12), (3, 3, "small", 12), (3, 2, "small", 12)]:
        p = cons.preset(name, r, q)
        cg = cons.build(p, n)
        expected = list(cons.expected_color_counts(p, n))
        ts = list(enumerate_tilings(cg.graph, r))
        oracle = brute_tilings(cg.graph, r)
        if sorted(t.blocks for t in ts) != oracle:
            bad.append(f"{name}({r},{q}) enumeration differs from the brute-force oracle")
        for t in ts:
            prof = color_counts(cg.graph, t.blocks)
            if prof != expected or brute_discrepancy(prof) != 0:
                bad.append(f"{name}({r},{q}) tiling {t.blocks} has profile {prof}")
                break
        sizes.append(f"{name}({r},{q},n={n}): {len(ts)} tilings, profile {expected}")
        if not ts:
            bad.append(f"{name}({r},{q}) has no tilings")
    report(1, not bad, "; ".join(bad or sizes))


# ---------------------------------------------------------------- 2

KNOWN_THRESHOLDS = {(3, 7): Fraction(5, 7), (3, 8): Fraction(11, 16), (3, 9): Fraction(2, 3),
                    (4, 11): Fraction(17, 22), (4, 13): Fraction(3, 4)}


def test_criterion_2_threshold_table():
    bad, seen = [], []
    for (r, q), value in KNOWN_THRESHOLDS.items():
        t = cons.threshold(r, q)
        if t != value:
            bad.append(f"threshold({r},{q}) = {t}, expected {value}")
        # the discrepancy-0 preset for these q is the large-q one
        p = cons.preset_large_q(r, q)
        n = cons.minimal_admissible_n(p)
        cg = cons.build(p, n)
        ratio = Fraction(brute_min_degree(cg.graph), n)
        seen.append(f"({r},{q}) n={n} delta/n={ratio}")
        if ratio != value:
            bad.append(f"preset ({r},{q}) at n={n} has delta/n = {ratio}, expected {value}")
    cg = cons.build(cons.preset_large_q(3, 7), 42)
    ts = sample_tilings(cg.graph, 3, 200, seed=2024)
    discs = {brute_discrepancy(color_counts(cg.graph, t.blocks)) for t in ts}
    if len(ts) != 200 or discs != {0}:
        bad.append(f"(3,7,n=42) sampled discrepancies {sorted(discs)} over {len(ts)} tilings")
    report(2, not bad, "; ".join(bad + seen) + ("" if bad else "; 200 samples at (3,7,42) all 0"))


# ---------------------------------------------------------------- 3

def test_criterion_3_extremal_tiling_bound():
    bad = []
    for n in (6, 9):
        rep = verify_extremal_bound(n, 3)
        if not rep.passed:
            bad.append(f"n={n}: {rep.summary}")
        ts = brute_tilings(complete_graph(n), 3)
        if len(ts) != complete_tiling_count(n, 3):
            bad.append(f"n={n}: oracle found {len(ts)} tilings")
        e = (n // 3) * 3
        for s in range(n + 1):
            for X in combinations(range(n), s):
                xs = set(X)
                counts = [sum(1 for blk in t for a, b in combinations(blk, 2) if a in xs and b in xs)
                          for t in ts]
                m = min(counts)
                if 3 * s > 2 * n and m * n < (2 * s - n) * e:
                    bad.append(f"n={n} X={X}: fraction {Fraction(m, e)} below {Fraction(2 * s - n, n)}")
                mc = x_induced_edges(minimize_crossing(n, 3, X), X)
                if mc != m:
                    bad.append(f"n={n} X={X}: minimize_crossing gives {mc}, exhaustive {m}")
                if s == n - 1 and Fraction(mc, e) != Fraction(2 * s, n) - 1:
                    bad.append(f"n={n} X={X}: no equality at |X| = n-1")
    report(3, not bad, "; ".join(bad[:5]) or "n=6 (10 tilings), n=9 (280 tilings): bound, equality and minimizer")


# ---------------------------------------------------------------- 4

def test_criterion_4_template_two_tilings():
    bad, made = [], Counter()
    rng = np.random.default_rng(44)
    for r in (4, 5):
        for L in (4, 6):
            while made[(r, L)] < 100:
                g, t = random_template_graph(r, L, 3, rng)
                cols = [g.color(t.cycle[i], t.cycle[(i + 1) % L]) for i in range(L)]
                if Counter(cols[0::2]) == Counter(cols[1::2]):
                    continue
                check_template(g, t, r)
                made[(r, L)] += 1
                b = blowup(g, t)
                t1, t2 = canonical_tilings(b, r)
                for tt in (t1, t2):
                    verts = sorted(v for blk in tt.blocks for v in blk)
                    if verts != list(range(b.graph.n)) or not all(
                            b.graph.has_edge(x, y) for blk in tt.blocks for x, y in combinations(blk, 2)):
                        bad.append(f"r={r} L={L}: invalid tiling {tt.blocks}")
                if color_counts(b.graph, t1.blocks) == color_counts(b.graph, t2.blocks):
                    bad.append(f"r={r} L={L}: equal profiles for template {t}")
    report(4, not bad, "; ".join(bad[:5]) or f"{dict((f'r={r},L={L}', c) for (r, L), c in made.items())} all differ")


# ---------------------------------------------------------------- 5

def literal_bowtie_violations(g):
    """All (center, v, e1, e2) with unequal side multisets, straight from the definition."""
    out = []
    for c in range(g.n):
        H = [u for u in range(g.n) if g.has_edge(c, u)]
        for v in H:
            nv = [u for u in H if u != v and g.has_edge(u, v)]
            wings = [(x, y) for x, y in combinations(nv, 2) if g.has_edge(x, y)]
            for (x1, y1), (x2, y2) in combinations(wings, 2):
                if len({x1, y1, x2, y2}) < 4:
                    continue
                left = sorted((g.color(v, x1), g.color(v, y1), g.color(x2, y2)))
                right = sorted((g.color(v, x2), g.color(v, y2), g.color(x1, y1)))
                if left != right:
                    out.append((c, v, (x1, y1), (x2, y2)))
    return out


def bowtie_corpus(seed: int, size: int):
    rng = random.Random(seed)
    R = Fraction(2, 3)
    for i in range(size):
        n = 12 + i % 7
        kind = i % 4
        if kind == 0:
            g = random_dense(rng, n, R, 3, 3)
        elif kind == 1:
            g = mono_dense(rng, n, R, 3, q=3, color=1 + i % 3)
        elif kind == 2:
            g = star_dense(rng, n, R, 3, 1 + i % 3, 4)
        else:
            g = recolor(rng, mono_dense(rng, n, R, 3, q=3), 1 + i % 3)
        yield kind, g


def test_criterion_5_bowtie_contrapositive():
    from tilescope.structure import Bowtie

    bad, stats = [], Counter()
    for kind, g in bowtie_corpus(55, 56):
        assert degree_ok(g, Fraction(2, 3), 3)
        viol = literal_bowtie_violations(g)
        fast = next(iter(bowtie_violations(g, 3)), None)
        if bool(viol) != (fast is not None):
            bad.append(f"grouped scan disagrees with the literal scan on a kind-{kind} graph")
        stats["graphs"] += 1
        if not viol:
            continue
        stats["with-violations"] += 1
        temps = list(find_templates(g, 3, 1))
        if not temps:
            bad.append(f"kind-{kind} graph with {len(viol)} violations has no template")
            continue
        c, v, (x1, y1), (x2, y2) = viol[0]
        chk = check_bowtie(g, 3, (c,), Bowtie(v, x1, y1, x2, y2))
        if chk.holds or chk.witness is None:
            bad.append(f"check_bowtie gives no witness for {viol[0]}")
        else:
            check_template(g, chk.witness, 3)
    ok = not bad and stats["graphs"] >= 50
    report(5, ok, "; ".join(bad[:5]) or f"{stats['graphs']} graphs, {stats['with-violations']} with "
           "violations, each with a template and a checked witness")


# ---------------------------------------------------------------- 6

def test_criterion_6_chain_postconditions():
    rng = random.Random(66)
    bad, lengths = [], []
    done = 0
    while done < 100:
        n = rng.randint(9, 20)
        g = random_dense(rng, n, Fraction(2, 3), 2, 3, tries=400)
        v = rng.randrange(n)
        Nv = set(brute_common_neighbors(g, [v]))
        Ks = list(enumerate_cliques(g, 3, sorted(Nv)))
        edges = [(a, b) for a, b in combinations(sorted(Nv), 2) if g.has_edge(a, b)]
        if not Ks or not edges:
            continue
        K = rng.choice(Ks)
        x = rng.choice(K)
        u, w = rng.choice(edges)
        ch = build_chain(g, v, K, x, u, w)
        cl = [tuple(c) for c in ch.cliques]
        m = len(cl)
        ok = (tuple(sorted(cl[0])) == tuple(sorted(K))
              and all(len(set(c)) == 3 and set(c) <= Nv for c in cl)
              and all(g.has_edge(a, b) for c in cl for a, b in combinations(c, 2))
              and all(len(set(a) & set(b)) == 1 for a, b in zip(cl, cl[1:]))
              and all(x in c for c in cl[:max(m - 2, 0)])
              and {u, w} <= set(cl[-1]) and m <= n
              and not ch.violations(g, K))
        if not ok:
            bad.append(f"n={n} v={v} K={K} x={x} uw={(u, w)}: {cl}")
        lengths.append(m)
        done += 1
    report(6, not bad, "; ".join(bad[:3]) or f"100 chains valid, m in [{min(lengths)}, {max(lengths)}]")


# ---------------------------------------------------------------- 7

def hs_corpus(rng):
    for r, n in [(3, 6), (3, 9), (3, 12), (3, 15), (4, 8), (4, 12)]:
        R = Fraction(r - 1, r)
        for tries in (0, 50, 200, 1000, 5000):
            for _ in range(3):
                yield r, random_dense(rng, n, R, 0, 2, tries=tries)
        from tilescope.graph import complete_multipartite

        yield r, complete_multipartite([n // r] * r)[0]


def test_criterion_7_hajnal_szemeredi():
    rng = random.Random(77)
    bad, count, tight = [], 0, 0
    for r, g in hs_corpus(rng):
        assert brute_min_degree(g) * r >= (r - 1) * g.n
        t = find_tiling(g, r)
        if t is None or sorted(v for b in t.blocks for v in b) != list(range(g.n)) or not all(
                g.has_edge(a, b) for blk in t.blocks for a, b in combinations(blk, 2)):
            bad.append(f"r={r} n={g.n}: no valid tiling found")
        count += 1
    for r, n in [(3, 6), (3, 9), (3, 12), (3, 15), (4, 8), (4, 12)]:
        g, _ = cons.tightness_example(n, r)
        if brute_min_degree(g) * r != (r - 1) * n - r:
            bad.append(f"tightness graph (n={n}, r={r}) has the wrong minimum degree")
        if find_tiling(g, r) is not None:
            bad.append(f"tightness graph (n={n}, r={r}) has a tiling")
        if n <= 12 and brute_tilings(g, r):
            bad.append(f"oracle finds a tiling in the tightness graph (n={n}, r={r})")
        tight += 1
    report(7, not bad, "; ".join(bad[:5]) or f"{count} dense graphs tiled, {tight} tightness graphs absent")


# ---------------------------------------------------------------- 8

def few_color_corpus(rng):
    R = Fraction(2, 3)
    for i, n in enumerate(range(12, 25)):
        yield mono_dense(rng, n, R, 3, q=3, color=1 + i % 3, tries=300)
        yield star_dense(rng, n, R, 3, 1 + i % 3, 4, tries=300)


def mono_corpus(rng):
    R = Fraction(3, 4)
    for i, n in enumerate((16, 20, 24, 16, 20, 24)):
        if i % 2:
            yield star_dense(rng, n, R, 3, 1 + i % 3, 4, tries=300)
        else:
            yield mono_dense(rng, n, R, 3, q=3, color=1 + i % 3, tries=300)


def test_criterion_8_few_color_sets():
    rng = random.Random(88)
    bad, cases = [], Counter()
    for g in few_color_corpus(rng):
        assert degree_ok(g, Fraction(2, 3), 3) and not has_template(g, 3)
        res = find_few_color_set(g, 3)
        cols = colors_in(g, res.U)
        if len(res.U) < brute_min_degree(g) or len(cols) > 3 or set(res.colors) != cols:
            bad.append(f"n={g.n}: |U|={len(res.U)} with colors {sorted(cols)}")
        cases[res.case] += 1
    for g in mono_corpus(rng):
        assert degree_ok(g, Fraction(3, 4), 3) and not has_template(g, 3)
        res = find_monochromatic_set(g, 3)
        cols = colors_in(g, res.U)
        if len(res.U) < brute_min_degree(g) or len(cols) != 1:
            bad.append(f"mono n={g.n}: |U|={len(res.U)} with colors {sorted(cols)}")
        cases["mono:" + res.case] += 1
    report(8, not bad, "; ".join(bad[:5]) or f"cases {dict(sorted(cases.items()))}")


# ---------------------------------------------------------------- 9

def test_criterion_9_round_trip_and_determinism(tmp_path, capsys, monkeypatch):
    bad = []
    rng = random.Random(99)
    graphs = [random_dense(rng, n, Fraction(1, 2), 0, 5) for n in (3, 7, 12)]
    graphs += [cons.build(cons.preset("mid", 3, 6), 12).graph, complete_graph(4, 2, 2)]
    for g in graphs:
        text = graph_to_json(g)
        back = graph_from_json(text)
        if back != g or graph_to_json(back) != text:
            bad.append(f"graph n={g.n} does not round-trip")
    rep = run_suite("template", r=4, seed=3)
    if dumps(json.loads(dumps(rep.to_json()))) != dumps(rep.to_json()):
        bad.append("report JSON does not round-trip")
    if dumps(run_suite("template", r=4, seed=3).to_json()) != dumps(rep.to_json()):
        bad.append("template suite differs between runs")
    a = verify_zero_discrepancy("large", 3, 7, 42, mode="sample", count=30, seed=5)
    b = verify_zero_discrepancy("large", 3, 7, 42, mode="sample", count=30, seed=5)
    if dumps(a.to_json()) != dumps(b.to_json()):
        bad.append("sampled zero-discrepancy reports differ")
    rows = [(3, 7), (3, 9), (4, 13)]
    monkeypatch.setenv("TILESCOPE_THREADS", "1")
    serial = dumps(verify_threshold_table(rows, seed=4).to_json())
    monkeypatch.setenv("TILESCOPE_THREADS", "3")
    parallel = dumps(verify_threshold_table(rows, seed=4).to_json())
    if serial != parallel:
        bad.append("threshold table depends on TILESCOPE_THREADS")
    outs = []
    for _ in range(2):
        main(["construct", "--r", "3", "--q", "7", "--preset", "large", "--min-n", "0"])
        outs.append(capsys.readouterr().out)
    if outs[0] != outs[1] or graph_to_json(graph_from_json(outs[0])) != outs[0].strip():
        bad.append("construct output is not stable")
    path = tmp_path / "g.json"
    path.write_text(outs[0])
    runs = []
    for _ in range(2):
        main(["tilings", "--graph", str(path), "--sample", "5", "--seed", "9"])
        runs.append(capsys.readouterr().out)
    if runs[0] != runs[1]:
        bad.append("tilings --sample output differs between runs")
    report(9, not bad, "; ".join(bad) or "graphs, reports and CLI output byte-identical across runs")
