"""Brute-force oracles, lemma suites, and the discrepancy certificate.

Every suite compares a closed form against an independent computation
(enumeration or seeded sampling of tilings, exhaustive subset scans) and
records how the observation was made.  Sampling replaces enumeration only
above ``ENUMERATION_CUTOFF``; a report whose method is ``"sampled"`` was
never verified exhaustively.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Any, Callable, Iterable, Sequence

import numpy as np

from .constructions import (ConstructedGraph, build, expected_color_counts, fraction_str,
                            minimal_admissible_n, preset, tightness_example, threshold,
                            threshold_regime)
from .errors import HypothesisError, PreconditionError, TilescopeError
from .graph import ColoredGraph, build_graph, colors_of, complete_graph, discrepancy, min_degree, to_mask
from .structure import find_few_color_set, find_monochromatic_set, meets_degree
from .templates import Template, blowup, boost_discrepancy, canonical_tilings, check_template
from .tilings import (Tiling, enumerate_tilings, find_tiling, induced_fraction_bound,
                      minimize_crossing, sample_tilings, x_induced_edges)

ENUMERATION_CUTOFF = {3: 14, 4: 12}


def _cutoff(r: int) -> int:
    return ENUMERATION_CUTOFF.get(r, 12)


def threads() -> int:
    env = os.environ.get("TILESCOPE_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise PreconditionError(f"TILESCOPE_THREADS must be an integer, got {env!r}") from None
    return os.cpu_count() or 1


def _pmap(fn: Callable, items: Sequence) -> list:
    """Order-preserving map, in worker processes when allowed."""
    workers = min(threads(), len(items))
    if workers <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, items))


@dataclass(frozen=True)
class Case:
    instance: dict[str, Any]
    expected: Any
    observed: Any
    passed: bool
    rule: str = "eq"


@dataclass(frozen=True)
class VerificationReport:
    suite: str
    cases: tuple[Case, ...]
    method: str
    notes: dict[str, Any] = field(default_factory=dict, hash=False)

    @property
    def summary(self) -> dict[str, int]:
        p = sum(1 for c in self.cases if c.passed)
        return {"total": len(self.cases), "passed": p, "failed": len(self.cases) - p}

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.cases)

    def to_json(self) -> dict[str, Any]:
        from .io import to_jsonable

        return to_jsonable({"suite": self.suite, "method": self.method, "summary": self.summary,
                            "passed": self.passed, "notes": self.notes,
                            "cases": [{"instance": c.instance, "expected": c.expected,
                                       "observed": c.observed, "rule": c.rule, "passed": c.passed}
                                      for c in self.cases]})

    def table(self) -> str:
        from .io import dumps

        lines = [f"suite {self.suite} ({self.method}): {self.summary['passed']}/{self.summary['total']} passed"]
        for c in self.cases:
            mark = "PASS" if c.passed else "FAIL"
            lines.append(f"  {mark} {dumps(c.instance)} observed {dumps(c.observed)} "
                         f"{'>=' if c.rule == 'ge' else '=='} expected {dumps(c.expected)}")
        return "\n".join(lines)


def _case(instance, expected, observed, rule="eq") -> Case:
    ok = observed >= expected if rule == "ge" else observed == expected
    return Case(instance, expected, observed, bool(ok), rule)


def merge(suite: str, reports: Iterable[VerificationReport]) -> VerificationReport:
    reports = list(reports)
    methods = sorted({r.method for r in reports})
    cases = tuple(Case({"suite": r.suite, **c.instance}, c.expected, c.observed, c.passed, c.rule)
                  for r in reports for c in r.cases)
    return VerificationReport(suite, cases, "+".join(methods) or "none")


# ---------------------------------------------------------------- zero discrepancy

def _tilings(g: ColoredGraph, r: int, mode: str, count: int, seed: int) -> tuple[list[Tiling], str]:
    if mode == "auto":
        mode = "enumerate" if g.n <= _cutoff(r) else "sample"
    if mode == "enumerate":
        return list(enumerate_tilings(g, r)), "exhaustive"
    if mode == "sample":
        return sample_tilings(g, r, count, seed), "sampled"
    raise PreconditionError(f"mode must be enumerate, sample or auto, not {mode!r}")


def _construction_report(suite: str, cg: ConstructedGraph, mode: str, count: int, seed: int,
                         label: dict[str, Any]) -> VerificationReport:
    p = cg.params
    exp = list(expected_color_counts(p, cg.n))
    ts, method = _tilings(cg.graph, p.r, mode, count, seed)
    profiles = sorted({tuple(t.profile(cg.graph)) for t in ts})
    if suite == "zero-disc":
        expected = {"discrepancies": [0], "profiles": [exp]}
        observed = {"discrepancies": sorted({discrepancy(pr) for pr in profiles}),
                    "profiles": [list(pr) for pr in profiles]}
    else:
        expected = {"profiles": [exp]}
        observed = {"profiles": [list(pr) for pr in profiles]}
    case = Case(label, expected, observed, bool(ts) and expected == observed)
    notes = {"tilings": len(ts), "distinct": len({t.blocks for t in ts})}
    if method == "sampled":
        notes.update(count=count, seed=seed)
    return VerificationReport(suite, (case,), method, notes)


def verify_zero_discrepancy(preset_name: str, r: int, q: int, n: int, mode: str = "auto",
                            count: int = 200, seed: int = 1) -> VerificationReport:
    """Every tiling of the preset construction has discrepancy 0."""
    cg = build(preset(preset_name, r, q), n)
    label = {"preset": preset_name, "r": r, "q": q, "n": n}
    return _construction_report("zero-disc", cg, mode, count, seed, label)


def verify_edge_counting(cg: ConstructedGraph, mode: str = "auto", count: int = 200,
                         seed: int = 1) -> VerificationReport:
    """Each tiling's color profile equals the closed-form edge counts."""
    p = cg.params
    label = {"variant": p.variant, "r": p.r, "q": p.q, "n": cg.n,
             "alphas": [fraction_str(a) for a in p.alphas]}
    return _construction_report("edge-count", cg, mode, count, seed, label)


# ---------------------------------------------------------------- extremal bound

def tiling_matrix(tilings: Sequence[Tiling], n: int) -> np.ndarray:
    """(tilings, blocks, n) 0/1 incidence array."""
    if not tilings:
        return np.zeros((0, 0, n), dtype=np.int64)
    B = np.zeros((len(tilings), len(tilings[0].blocks), n), dtype=np.int64)
    for i, t in enumerate(tilings):
        for j, b in enumerate(t.blocks):
            B[i, j, list(b)] = 1
    return B


def min_induced_edges(B: np.ndarray, Xs: Sequence[Sequence[int]]) -> np.ndarray:
    """For each X, the fewest X-induced edges over all tilings in B."""
    n = B.shape[2]
    M = np.zeros((len(Xs), n), dtype=np.int64)
    for i, X in enumerate(Xs):
        M[i, list(X)] = 1
    k = np.einsum("tbn,xn->xtb", B, M)
    return (k * (k - 1) // 2).sum(axis=2).min(axis=1)


def verify_extremal_bound(n: int, r: int) -> VerificationReport:
    """Induced-fraction lower bound and the swap minimizer, against all tilings of K_n."""
    if r < 2 or n % r:
        raise PreconditionError(f"r={r} does not divide n={n}")
    ts = list(enumerate_tilings(complete_graph(n), r))
    e = (n // r) * comb(r, 2)
    Xs = [X for s in range(n + 1) if r * s > (r - 1) * n for X in combinations(range(n), s)]
    mins = min_induced_edges(tiling_matrix(ts, n), Xs)
    cases = []
    for X, m in zip(Xs, mins):
        m = int(m)
        inst = {"n": n, "r": r, "X": list(X)}
        cases.append(_case({**inst, "check": "bound"}, induced_fraction_bound(n, r, X),
                           Fraction(m, e), rule="ge"))
        t = minimize_crossing(n, r, X)
        xs = set(X)
        loads = sorted({sum(1 for v in b if v in xs) for b in t.blocks})
        cases.append(_case({**inst, "check": "minimizer"}, m, x_induced_edges(t, X)))
        cases.append(_case({**inst, "check": "levels"}, True, loads[-1] - loads[0] <= 1))
    return VerificationReport("extremal", tuple(cases), "exhaustive", {"tilings": len(ts)})


# ---------------------------------------------------------------- template lemma

def random_template_graph(r: int, L: int, q: int, rng: np.random.Generator,
                          chords: float = 0.3) -> tuple[ColoredGraph, Template]:
    """Center clique 0..r-3, cycle r-2..r+L-3, random colors; may be balanced."""
    c = r - 2
    cyc = tuple(range(c, c + L))
    col = lambda: int(rng.integers(1, q + 1))
    edges = [(a, b, col()) for a, b in combinations(range(c), 2)]
    edges += [(z, w, col()) for z in range(c) for w in cyc]
    edges += [(cyc[i], cyc[(i + 1) % L], col()) for i in range(L)]
    for i, j in combinations(range(L), 2):
        if (j - i) % L not in (1, L - 1) and rng.random() < chords:
            edges.append((cyc[i], cyc[j], col()))
    return build_graph(c + L, q, edges), Template(tuple(range(c)), cyc)


def verify_template_lemma(r: int, trials: int, seed: int, lengths: Sequence[int] = (4, 6),
                          q: int = 3) -> VerificationReport:
    """canonical_tilings of random templates always have different profiles."""
    if r < 3:
        raise PreconditionError("templates need r >= 3")
    rng = np.random.default_rng(seed)
    cases, rejected = [], 0
    for i in range(trials):
        L = lengths[i % len(lengths)]
        while True:
            g, t = random_template_graph(r, L, q, rng)
            try:
                check_template(g, t, r)
                break
            except PreconditionError:
                rejected += 1
        b = blowup(g, t)
        t1, t2 = canonical_tilings(b, r)
        p1, p2 = list(t1.profile(b.graph)), list(t2.profile(b.graph))
        cases.append(_case({"trial": i, "r": r, "L": L, "profiles": [p1, p2]}, True, p1 != p2))
    return VerificationReport("template", tuple(cases), "random",
                              {"seed": seed, "rejected_balanced": rejected, "q": q})


# ---------------------------------------------------------------- certificate

@dataclass(frozen=True)
class Certificate:
    tiling: Tiling
    color: int
    fraction: Fraction
    path: str
    label: str = "finite-instance"
    U: tuple[int, ...] | None = None
    bound: Fraction | None = None
    diagnostics: tuple[str, ...] = ()


class CertificateError(TilescopeError):
    def __init__(self, message: str, diagnostics: Sequence[str]):
        super().__init__(message)
        self.diagnostics = tuple(diagnostics)


def _share(g: ColoredGraph, t: Tiling, c: int) -> Fraction:
    e = len(t.edges())
    return Fraction(t.profile(g)[c - 1], e)


def certify_discrepancy(g: ColoredGraph, r: int, q: int | None = None) -> Certificate:
    """A tiling and a color with a certified share of its edges.

    Tries, in order: the template boost; a monochromatic or few-color set U
    combined with the induced-fraction bound; plain pigeonhole (share >= 1/q)
    on any tiling.
    """
    if q is not None and q != g.q:
        raise PreconditionError(f"graph has q={g.q}, not {q}")
    if r < 3 or g.n % r:
        raise PreconditionError(f"need r >= 3 and r | n (n={g.n}, r={r})")
    diag: list[str] = []
    try:
        b = boost_discrepancy(g, r)
    except TilescopeError as e:
        b = None
        diag.append(f"boost failed: {e}")
    if b is not None and b.margin > 0:
        return Certificate(b.tiling, b.color, _share(g, b.tiling, b.color), "boost",
                           diagnostics=(f"copies={b.copies}", f"margin={b.margin}"))
    diag.append("boost: no switching blow-up with a tileable residual")

    t = find_tiling(g, r)
    if t is None:
        raise CertificateError("no K_r-tiling exists", diag)
    found = None
    if meets_degree(g, Fraction(r, r + 1), 3):
        finder, name = find_monochromatic_set, "mono-set"
    elif meets_degree(g, Fraction(r - 1, r), 3):
        finder, name = find_few_color_set, "few-color-set"
    else:
        finder = None
        diag.append("degree below (r-1)n/r + 3: no structural path")
    if finder is not None:
        try:
            found = finder(g, r)
        except HypothesisError as e:
            diag.append(f"{name} failed at {e.step}: {e.message}")
    if found is not None:
        U = found.U
        um = to_mask(U)
        counts = [0] * g.q
        for u, v in t.edges():
            if (um >> u) & 1 and (um >> v) & 1:
                counts[g.color(u, v) - 1] += 1
        c = max(range(g.q), key=lambda i: (counts[i], -i)) + 1
        frac = _share(g, t, c)
        bound = (Fraction(2 * len(U), g.n) - 1) / max(len(found.colors), 1)
        if frac < bound:
            raise HypothesisError("certificate", f"share {frac} below the bound {bound}",
                                  {"U": U, "color": c})
        return Certificate(t, c, frac, name, U=U, bound=bound, diagnostics=tuple(diag))
    prof = t.profile(g)
    c = max(range(g.q), key=lambda i: (prof[i], -i)) + 1
    return Certificate(t, c, _share(g, t, c), "pigeonhole", bound=Fraction(1, g.q),
                       diagnostics=tuple(diag))


# ---------------------------------------------------------------- threshold table

DEFAULT_ROWS = tuple([(3, q) for q in range(2, 11)] + [(4, q) for q in range(2, 14)])


def _threshold_row(args: tuple[int, int, int, int]) -> Case:
    r, q, samples, seed = args
    t = threshold(r, q)
    regime = threshold_regime(r, q)
    inst = {"r": r, "q": q, "regime": regime}
    if t is None:
        return Case(inst, None, None, True)
    if regime == "existence":
        n = 4 * r
        g, _ = tightness_example(n, r)
        obs = {"delta_ratio": Fraction(min_degree(g) + 1, n), "tiling": find_tiling(g, r) is not None}
        return _case({**inst, "n": n, "witness": "tightness"}, {"delta_ratio": t, "tiling": False}, obs)
    p = preset(regime, r, q)
    n = minimal_admissible_n(p)
    cg = build(p, n)
    ts = sample_tilings(cg.graph, r, samples, seed)
    obs = {"delta_ratio": Fraction(cg.min_degree, n),
           "discrepancies": sorted({discrepancy(x.profile(cg.graph)) for x in ts})}
    return _case({**inst, "n": n, "witness": regime, "samples": samples, "seed": seed},
                 {"delta_ratio": t, "discrepancies": [0]}, obs)


def verify_threshold_table(rows: Sequence[tuple[int, int]] | None = None, samples: int = 5,
                           seed: int = 1) -> VerificationReport:
    """Threshold values against the minimum degree of the witnessing construction.

    Rows in the ``existence`` regime are witnessed by the tightness graph:
    its minimum degree is (r-1)n/r - 1 (recorded as (delta+1)/n) and it has
    no tiling at all.
    """
    rows = list(rows or DEFAULT_ROWS)
    cases = _pmap(_threshold_row, [(r, q, samples, seed) for r, q in rows])
    return VerificationReport("threshold", tuple(cases), "sampled", {"samples": samples, "seed": seed})


# ---------------------------------------------------------------- suites

SUITES = ("zero-disc", "edge-count", "extremal", "template", "threshold")

DEFAULT_ZERO = {3: [("mid", 6, 12), ("small", 3, 12), ("small", 2, 12), ("large", 9, 18)],
                4: [("mid", 10, 20), ("small", 2, 20)]}


def run_suite(name: str, r: int | None = None, q: int | None = None, n: int | None = None,
              seed: int = 1) -> VerificationReport:
    """Run a named suite with CLI-style defaults."""
    if name == "all":
        return merge("all", [run_suite(s, r, q, n, seed) for s in SUITES])
    rs = [r] if r is not None else [3, 4]
    if name in ("zero-disc", "edge-count"):
        reps = []
        for rr in rs:
            rows = DEFAULT_ZERO.get(rr, [])
            if q is not None:
                reg = threshold_regime(rr, q)
                reg = reg if reg in ("small", "mid", "large") else "large"
                pn = preset(reg, rr, q)
                rows = [(reg, q, n or minimal_admissible_n(pn))]
            for pname, qq, nn in rows:
                if name == "zero-disc":
                    reps.append(verify_zero_discrepancy(pname, rr, qq, nn, seed=seed))
                else:
                    reps.append(verify_edge_counting(build(preset(pname, rr, qq), nn), seed=seed))
        return merge(name, reps)
    if name == "extremal":
        reps = []
        for rr in rs:
            ns = [n] if n is not None else ([6, 9] if rr == 3 else [8] if rr == 4 else [rr])
            reps.extend(verify_extremal_bound(nn, rr) for nn in ns)
        return merge(name, reps)
    if name == "template":
        return merge(name, [verify_template_lemma(rr, 100, seed) for rr in rs])
    if name == "threshold":
        rows = [(rr, qq) for rr, qq in DEFAULT_ROWS if rr in rs and (q is None or qq == q)]
        if not rows and q is not None:
            rows = [(rr, q) for rr in rs]
        return verify_threshold_table(rows, seed=seed)
    raise PreconditionError(f"unknown suite {name!r}; choose from {SUITES + ('all',)}")
