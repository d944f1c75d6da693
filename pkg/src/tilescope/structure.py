"""Structural algorithms for dense template-free colorings.

Everything here follows a constructive argument step by step and returns
the objects it builds (bowtie witnesses, clique chains, triple verdicts,
few-color sets) so that each step can be checked independently.  Whenever
a step that the degree and template-freeness hypotheses guarantee cannot
be carried out, a ``HypothesisError`` naming the step is raised instead of
returning a wrong answer.

Ties are always broken towards the lowest vertex index (lexicographic
order on vertex sets).
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import ceil, comb
from typing import Iterator, NamedTuple, Sequence

from .errors import HypothesisError, PreconditionError
from .graph import (ColoredGraph, VertexSet, bits, clique_edges, clique_profile, colors_of,
                    common_neighborhood_mask, enumerate_cliques, from_mask, min_degree, to_mask)
from .templates import Template, canonical_cycle, cycle_colors, is_balanced_cycle


class CommonNeighborError(HypothesisError):
    """A common neighbor promised by the degree hypothesis does not exist."""


# ---------------------------------------------------------------- degrees

class DegreeBound(NamedTuple):
    observed: int
    bound: int


def meets_degree(g: ColoredGraph, ratio: Fraction, C: int = 0) -> bool:
    """delta(g) >= ratio * n + C, compared exactly."""
    ratio = Fraction(ratio)
    return ratio.denominator * min_degree(g) >= ratio.numerator * g.n + ratio.denominator * C


def _check_clique(g: ColoredGraph, K: Sequence[int], what: str = "K") -> VertexSet:
    K = tuple(K)
    if any(not 0 <= v < g.n for v in K):
        raise PreconditionError(f"{what} has a vertex out of range")
    if len(set(K)) != len(K):
        raise PreconditionError(f"{what} has repeated vertices")
    if not g.is_clique(K):
        raise PreconditionError(f"{what} = {sorted(K)} is not a clique")
    return tuple(sorted(K))


def neighborhood_degree_bound(g: ColoredGraph, K: Sequence[int], r: int, C: int) -> DegreeBound:
    """Minimum degree inside N(K) and the bound ceil((r-t-1)|N(K)|/(r-t)) + C.

    When delta(g) >= (r-1)n/r + C the observed value is at least the bound.
    """
    K = _check_clique(g, K)
    t = len(K)
    if t > r - 1:
        raise PreconditionError(f"need |K| <= r-1, got |K|={t}, r={r}")
    nk = common_neighborhood_mask(g, K)
    sub, _ = g.induced(bits(nk))
    size = nk.bit_count()
    return DegreeBound(min_degree(sub), ceil(Fraction((r - t - 1) * size, r - t)) + C)


# ---------------------------------------------------------------- bowties

@dataclass(frozen=True)
class Bowtie:
    v: int
    x1: int
    y1: int
    x2: int
    y2: int

    @property
    def vertices(self) -> VertexSet:
        return (self.v, self.x1, self.y1, self.x2, self.y2)

    def validate(self, g: ColoredGraph) -> None:
        if len(set(self.vertices)) != 5:
            raise PreconditionError("bowtie needs five distinct vertices")
        for a, b in ((self.x1, self.y1), (self.x2, self.y2)):
            if not g.is_clique((self.v, a, b)):
                raise PreconditionError(f"{{{self.v},{a},{b}}} is not a triangle")

    def sides(self, g: ColoredGraph) -> tuple[tuple[int, ...], tuple[int, ...]]:
        """(f(x1y1), f(vx2), f(vy2)) and (f(x2y2), f(vx1), f(vy1)), sorted."""
        c = g.color
        left = (c(self.x1, self.y1), c(self.v, self.x2), c(self.v, self.y2))
        right = (c(self.x2, self.y2), c(self.v, self.x1), c(self.v, self.y1))
        return tuple(sorted(left)), tuple(sorted(right))


@dataclass(frozen=True)
class BowtieCheck:
    holds: bool
    left: tuple[int, ...]
    right: tuple[int, ...]
    witness: Template | None = None


def _center_mask(g: ColoredGraph, r: int, center: Sequence[int]) -> tuple[VertexSet, int]:
    center = _check_clique(g, center, "center")
    if len(center) != r - 2:
        raise PreconditionError(f"center must have r-2 = {r - 2} vertices")
    return center, common_neighborhood_mask(g, center)


def iter_bowties(g: ColoredGraph, mask: int | None = None) -> Iterator[Bowtie]:
    """Every bowtie inside the vertex mask, each once (wings ordered)."""
    H = g.full_mask if mask is None else mask
    for v in bits(H):
        nv = H & g.adj(v)
        wings = [(x, y) for x in bits(nv) for y in bits(nv & g.adj(x) & ~((2 << x) - 1))]
        for (x1, y1), (x2, y2) in combinations(wings, 2):
            if len({x1, y1, x2, y2}) == 4:
                yield Bowtie(v, x1, y1, x2, y2)


def _bowtie_witness(g: ColoredGraph, center: VertexSet, H: int, b: Bowtie) -> Template | None:
    """The unbalanced cycle forced by a violated bowtie, via helpers w_x, w_y."""
    avoid = to_mask(b.vertices)
    for wx in bits(H & g.adj(b.x1) & g.adj(b.x2) & ~avoid):
        for wy in bits(H & g.adj(b.y1) & g.adj(b.y2) & ~avoid & ~(1 << wx)):
            for cyc in ((b.v, b.x1, wx, b.x2), (b.v, b.y1, wy, b.y2),
                        (wx, b.x2, b.y2, wy, b.y1, b.x1)):
                if not is_balanced_cycle(cycle_colors(g, cyc)):
                    return Template(center, canonical_cycle(cyc))
    return None


def check_bowtie(g: ColoredGraph, r: int, center: Sequence[int], b: Bowtie) -> BowtieCheck:
    center, H = _center_mask(g, r, center)
    b.validate(g)
    if any(not (H >> x) & 1 for x in b.vertices):
        raise PreconditionError("bowtie is not inside the common neighborhood of the center")
    left, right = b.sides(g)
    if left == right:
        return BowtieCheck(True, left, right)
    return BowtieCheck(False, left, right, _bowtie_witness(g, center, H, b))


@dataclass(frozen=True)
class ItemCheck:
    item: str
    passed: bool
    detail: str


def bowtie_consequences(g: ColoredGraph, center: Sequence[int], b: Bowtie) -> list[ItemCheck]:
    """Apply items (a)-(c) to wing 1 and check their conclusions on wing 2."""
    r = len(tuple(center)) + 2
    res = check_bowtie(g, r, center, b)
    if not res.holds:
        raise PreconditionError(f"bowtie equation fails: {res.left} != {res.right}")
    c = g.color
    v1 = (c(b.v, b.x1), c(b.v, b.y1))
    v2 = (c(b.v, b.x2), c(b.v, b.y2))
    e1, e2 = c(b.x1, b.y1), c(b.x2, b.y2)
    out = []
    if len({v1[0], v1[1], e1}) == 3:
        ok = sorted(v1) == sorted(v2) and e1 == e2
        out.append(ItemCheck("a", ok, f"v-edges {sorted(v2)} vs {sorted(v1)}, wing {e2} vs {e1}"))
    if v1[0] == v1[1] != e1:
        ok = v2[0] == v2[1] == v1[0] and e1 == e2
        out.append(ItemCheck("b", ok, f"v-edges {list(v2)} vs {v1[0]}, wing {e2} vs {e1}"))
    S = Counter((v1[0], v1[1], e1))
    if len(S) == 2:
        single = next(col for col, m in S.items() if m == 1)
        ok = single in (v2[0], v2[1], e2)
        out.append(ItemCheck("c", ok, f"color {single} in {sorted((v2[0], v2[1], e2))}"))
    return out


def _edge_sig(g: ColoredGraph, v: int, x: int, y: int) -> tuple:
    c = Counter((g.color(x, y),))
    c.subtract((g.color(v, x), g.color(v, y)))
    return tuple(sorted((col, m) for col, m in c.items() if m))


def bowtie_violations(g: ColoredGraph, r: int, limit: int | None = None) -> Iterator[tuple[VertexSet, Bowtie]]:
    """(center, bowtie) pairs whose equation fails.

    The equation for wings e1, e2 at v says sig(e1) = sig(e2) where
    sig(xy) = f(xy) - f(vx) - f(vy) as a signed multiset, so edges of
    N(v) are grouped by signature and only mixed disjoint pairs are
    reported.  Each (center, v) yields at most one violation.
    """
    if r < 3:
        raise PreconditionError("bowties need r >= 3")
    count = 0
    for K in enumerate_cliques(g, r - 2):
        H = common_neighborhood_mask(g, K)
        for v in bits(H):
            nv = H & g.adj(v)
            groups: dict[tuple, list[tuple[int, int]]] = {}
            for x in bits(nv):
                for y in bits(nv & g.adj(x) & ~((2 << x) - 1)):
                    groups.setdefault(_edge_sig(g, v, x, y), []).append((x, y))
            if len(groups) < 2:
                continue
            found = _mixed_disjoint(list(groups.values()))
            if found is not None:
                (x1, y1), (x2, y2) = sorted(found)
                yield K, Bowtie(v, x1, y1, x2, y2)
                count += 1
                if limit is not None and count >= limit:
                    return


def _mixed_disjoint(groups: list[list[tuple[int, int]]]):
    for i, j in combinations(range(len(groups)), 2):
        for e in groups[i]:
            for f in groups[j]:
                if len({*e, *f}) == 4:
                    return e, f
    return None


# ---------------------------------------------------------------- chains

@dataclass(frozen=True)
class ChainResult:
    v: int
    cliques: tuple[VertexSet, ...]
    anchor: int
    target: tuple[int, int]

    @property
    def m(self) -> int:
        return len(self.cliques)

    def violations(self, g: ColoredGraph, K: Sequence[int] | None = None) -> list[str]:
        """Broken invariants (empty means the chain is valid)."""
        out = []
        cl = self.cliques
        if not cl:
            return ["empty chain"]
        s = len(cl[0])
        nv = g.adj(self.v)
        if K is not None and tuple(sorted(K)) != cl[0]:
            out.append("first clique differs from the input")
        for i, Ki in enumerate(cl):
            if len(Ki) != s or len(set(Ki)) != s or not g.is_clique(Ki):
                out.append(f"K_{i + 1} is not an {s}-clique")
            if to_mask(Ki) & ~nv:
                out.append(f"K_{i + 1} is not inside N(v)")
        for i in range(len(cl) - 1):
            if len(set(cl[i]) & set(cl[i + 1])) != s - 2:
                out.append(f"|K_{i + 1} & K_{i + 2}| != {s - 2}")
        for i in range(max(len(cl) - 2, 0)):
            if self.anchor not in cl[i]:
                out.append(f"anchor missing from K_{i + 1}")
        u, w = self.target
        if u not in cl[-1] or w not in cl[-1]:
            out.append("target edge not in the last clique")
        if len(cl) > g.n:
            out.append(f"chain length {len(cl)} exceeds n={g.n}")
        return out


def _cn(g: ColoredGraph, dom: int, S: Sequence[int], step: str, exclude: int = 0) -> int:
    m = dom & ~exclude
    for s in S:
        m &= g.adj(s)
    if not m:
        raise CommonNeighborError(step, f"no common neighbor of {sorted(S)} in the current domain",
                                  {"vertices": list(S), "domain": from_mask(dom)})
    return (m & -m).bit_length() - 1


def _chain_aux(g: ColoredGraph, dom: int, X: list[int], Y: list[int]) -> list[list[int]]:
    # (p)-cliques X -> Y with consecutive overlaps >= p-1; needs y_i ~ x_j for j >= i+2
    p = len(X)
    if p == 1:
        return [[X[0]], [Y[0]]]
    xp = X[-1]
    z = _cn(g, dom, Y[:p - 1] + [xp], "chain-aux")
    M = Y[:p - 1] + [z]
    sub = _chain_aux(g, dom & g.adj(xp), X[:p - 1], Y[:p - 2] + [z])
    return [L + [xp] for L in sub] + [M, list(Y)]


def _chain_to_edge(g: ColoredGraph, dom: int, L: list[int], u: int, w: int) -> list[list[int]]:
    # L's last vertex is the anchor; it stays in all but the last two cliques
    s = len(L)
    ys: list[int] = []
    for i in range(1, s - 1):
        ys.append(_cn(g, dom, [u, w] + ys + L[i + 1:], "chain-to-edge"))
    M = ys + [u, w]
    y_last = _cn(g, dom, [u] + ys + [L[-1]], "chain-to-edge")
    N = ys + [y_last, u]
    sub = _chain_aux(g, dom & g.adj(L[-1]), L[:-1], ys + [y_last])
    return [l + [L[-1]] for l in sub] + [N, M]


def build_chain(g: ColoredGraph, v: int, K: Sequence[int], x: int, u: int, w: int,
                check_degree: bool = True) -> ChainResult:
    """Chain of |K|-cliques in N(v) from K to one containing the edge uw.

    Consecutive cliques share exactly |K|-2 vertices and the anchor x lies
    in all but the last two.  With ``check_degree`` the hypothesis
    delta >= (s-1)n/s + 2 (s = |K|) is a precondition; without it a
    missing common neighbor raises ``CommonNeighborError``.
    """
    K = _check_clique(g, K)
    s = len(K)
    if s < 3:
        raise PreconditionError("K must have at least 3 vertices")
    if not 0 <= v < g.n or to_mask(K) & ~g.adj(v):
        raise PreconditionError("K must lie in N(v)")
    if x not in K:
        raise PreconditionError("anchor x must be in K")
    if not g.has_edge(u, w):
        raise PreconditionError(f"{{{u},{w}}} is not an edge")
    if not (g.has_edge(v, u) and g.has_edge(v, w)):
        raise PreconditionError("u and w must be neighbors of v")
    if check_degree and not meets_degree(g, Fraction(s - 1, s), 2):
        raise PreconditionError(f"need delta >= {s - 1}n/{s} + 2")
    if u in K and w in K:
        return ChainResult(v, (K,), x, (u, w))
    y = min(set(K) - {x, u, w})
    dom = g.adj(v) & ~(1 << y)
    L0 = [k for k in K if k not in (x, y)] + [x]
    raw = [tuple(sorted(L)) for L in _chain_to_edge(g, dom, L0, u, w)]
    Ls = [raw[0]]
    for L in raw[1:]:
        if L != Ls[-1]:
            Ls.append(L)
    out = [K]
    for i in range(1, len(Ls)):
        excl = to_mask(out[-1]) | (to_mask(Ls[i + 1]) if i + 1 < len(Ls) else 0)
        z = _cn(g, g.adj(v), Ls[i], "chain-extend", exclude=excl)
        out.append(tuple(sorted(Ls[i] + (z,))))
    res = ChainResult(v, tuple(out), x, (u, w))
    bad = res.violations(g, K)
    if bad:
        raise HypothesisError("chain", "; ".join(bad), {"chain": res.cliques})
    return res


# ---------------------------------------------------------------- triples

def centered_color(g: ColoredGraph, v: int, K: Sequence[int]) -> int | None:
    """Main color of (v, K) if all v-K edges share one color, else None."""
    cols = {g.color(v, k) for k in K}
    return cols.pop() if len(cols) == 1 else None


def isolated_vertices(g: ColoredGraph, K: Sequence[int], c: int) -> VertexSet:
    """Vertices of K touching no c-colored edge inside K."""
    return tuple(t for t in sorted(K) if all(g.color(t, k) != c for k in K if k != t))


def monochromatic_vertices(g: ColoredGraph, M: Sequence[int]) -> VertexSet:
    return tuple(x for x in sorted(M) if len({g.color(x, y) for y in M if y != x}) == 1)


@dataclass(frozen=True)
class TripleClass:
    verdict: str
    labels: dict[str, object] = field(hash=False)
    profiles: tuple[tuple[int, ...], tuple[int, ...]]
    witness: dict[str, object] = field(hash=False)
    main_color: int | None = None


def _setting(g: ColoredGraph, r: int, v: int, K1: Sequence[int], K2: Sequence[int]):
    K1 = _check_clique(g, K1, "K1")
    K2 = _check_clique(g, K2, "K2")
    if len(K1) != r or len(K2) != r:
        raise PreconditionError(f"K1 and K2 must be {r}-cliques")
    if not 0 <= v < g.n or (to_mask(K1) | to_mask(K2)) & ~g.adj(v):
        raise PreconditionError("K1 and K2 must lie in N(v)")
    zs = tuple(sorted(set(K1) & set(K2)))
    if len(zs) != r - 2:
        raise PreconditionError(f"|K1 & K2| must be r-2 = {r - 2}, got {len(zs)}")
    x1, y1 = sorted(set(K1) - set(zs))
    x2, y2 = sorted(set(K2) - set(zs))
    return K1, K2, {"x1": x1, "y1": y1, "x2": x2, "y2": y2, "zs": zs}


def classify_triple(g: ColoredGraph, r: int, v: int, K1: Sequence[int], K2: Sequence[int]) -> TripleClass:
    K1, K2, lab = _setting(g, r, v, K1, K2)
    p1, p2 = clique_profile(g, K1), clique_profile(g, K2)
    c1 = centered_color(g, v, K1)
    if p1 != p2:
        c = next(i + 1 for i in range(g.q) if p1[i] != p2[i])
        return TripleClass("Neither", lab, (tuple(p1), tuple(p2)),
                           {"color": c, "count_K1": p1[c - 1], "count_K2": p2[c - 1]}, c1)
    if c1 is not None and all(g.color(v, k) == c1 for k in K2):
        return TripleClass("Excellent", lab, (tuple(p1), tuple(p2)), {"profile": tuple(p1)}, c1)
    return TripleClass("Good", lab, (tuple(p1), tuple(p2)), {"profile": tuple(p1)}, c1)


@dataclass(frozen=True)
class TransferReport:
    verdict: str
    main_color: int
    checks: tuple[ItemCheck, ...]
    branch: str

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def check_transfer_lemmas(g: ColoredGraph, r: int, v: int, K1: Sequence[int],
                          K2: Sequence[int]) -> TransferReport:
    """Check the color-transfer consequences for a centered (v, K1)."""
    tc = classify_triple(g, r, v, K1, K2)
    c1 = tc.main_color
    if c1 is None:
        raise PreconditionError("(v, K1) is not centered")
    lab = tc.labels
    x1, y1, x2, y2, zs = lab["x1"], lab["y1"], lab["x2"], lab["y2"], lab["zs"]
    col = g.color
    c2 = col(x2, y2)
    checks: list[ItemCheck] = []
    branch = "excellent"
    if tc.verdict != "Excellent":
        checks.append(ItemCheck("1", col(x1, y1) == c1, f"f(x1y1)={col(x1, y1)}, main color {c1}"))
        checks.append(ItemCheck("2", c2 != c1, f"f(x2y2)={c2}"))
        ok3 = all(c1 in (col(z, x1), col(z, y1)) and c2 in (col(z, x2), col(z, y2)) for z in zs)
        checks.append(ItemCheck("3", ok3, "each z touches c1 toward K1 and c2 toward K2"))
        M2 = K2 + (v,)
        monos = monochromatic_vertices(g, M2)
        if not monos:
            branch = "no-mono-vertex"
            checks.append(ItemCheck("4", True, "K2+v has no monochromatic vertex"))
        else:
            w = monos[0]
            branch = f"w={'x2' if w == x2 else 'y2' if w == y2 else w}"
            ok4 = (len(monos) == 1 and w in (x2, y2)
                   and all(col(w, k) == c2 for k in M2 if k != w)
                   and all(col(v, k) == c1 for k in K2 if k != w))
            checks.append(ItemCheck("4", ok4, f"monochromatic vertices {list(monos)}"))
    extra = colors_of(g, K2) - colors_of(g, K1) - {c2}
    checks.append(ItemCheck("except-c2", not extra, f"colors of K2 missing from K1: {sorted(extra)}"))
    if tc.verdict == "Excellent":
        iso1 = isolated_vertices(g, K1, c1)
        iso2 = set(isolated_vertices(g, K2, c1))
        for t in zs:
            if t in iso1:
                checks.append(ItemCheck("isolated", t in iso2, f"t={t}"))
    return TransferReport(tc.verdict, c1, tuple(checks), branch)


# ---------------------------------------------------------------- K_{r+2}

@dataclass(frozen=True)
class CliqueClass:
    kind: str
    center: int | None = None
    c: int | None = None
    c2: int | None = None
    template: Template | None = None


def classify_r2clique(g: ColoredGraph, M: Sequence[int]) -> CliqueClass:
    """Monochromatic, TwoColoredStar(center, c, c') or Other (with a template)."""
    M = _check_clique(g, M, "M")
    if len(M) < 5:
        raise PreconditionError("M must be an (r+2)-clique with r >= 3")
    cols = colors_of(g, M)
    if len(cols) == 1:
        return CliqueClass("Monochromatic", c=next(iter(cols)))
    for v in M:
        star = {g.color(v, k) for k in M if k != v}
        rest = colors_of(g, [k for k in M if k != v])
        if len(star) == 1 and len(rest) == 1 and star != rest:
            return CliqueClass("TwoColoredStar", v, next(iter(star)), next(iter(rest)))
    return CliqueClass("Other", template=_template_in_clique(g, M))


def _template_in_clique(g: ColoredGraph, M: VertexSet) -> Template | None:
    # any four vertices of M see the other r-2 as a common clique
    for quad in combinations(M, 4):
        a, b, c, d = quad
        center = tuple(k for k in M if k not in quad)
        for cyc in ((a, b, c, d), (a, b, d, c), (a, c, b, d)):
            if not is_balanced_cycle(cycle_colors(g, cyc)):
                return Template(center, canonical_cycle(cyc))
    return None


# ---------------------------------------------------------------- rich subclique

def _repeated_vertex(g: ColoredGraph, M: VertexSet) -> int | None:
    counts = Counter(g.color(a, b) for a, b in clique_edges(M))
    for v in M:
        if any(counts[g.color(v, k)] > 1 for k in M if k != v):
            return v
    return None


def rich_subclique(g: ColoredGraph, M: Sequence[int], r: int) -> VertexSet:
    """An r-subclique of the (r+1)-clique M with >= C(r-1,2)+2 colors."""
    M = _check_clique(g, M, "M")
    if r < 3 or len(M) != r + 1:
        raise PreconditionError(f"M must be an (r+1)-clique with r >= 3")
    if len(colors_of(g, M)) < comb(r, 2) + 1:
        raise PreconditionError(f"M needs at least C(r,2)+1 = {comb(r, 2) + 1} colors")
    return _rich(g, M, r)


def _rich(g: ColoredGraph, M: VertexSet, r: int) -> VertexSet:
    need = comb(r - 1, 2) + 2
    if r == 3:
        for T in combinations(M, 3):
            if len(colors_of(g, T)) == 3:
                return T
        raise HypothesisError("rich-subclique", "no rainbow triangle", {"M": M})
    v = _repeated_vertex(g, M)
    if v is None:
        return M[:r]
    K = tuple(k for k in M if k != v)
    if len(colors_of(g, K)) >= need:
        return K
    L = _rich(g, K, r - 1)
    return tuple(sorted(L + (v,)))


# ---------------------------------------------------------------- few-color sets

@dataclass(frozen=True)
class ColorSet:
    U: VertexSet
    colors: frozenset[int]
    case: str
    vertex: int | None = None
    clique: VertexSet | None = None
    steps: tuple[str, ...] = ()
    parts: tuple[VertexSet, ...] | None = None


def extract_U_from_clique(g: ColoredGraph, r: int, K: Sequence[int]) -> ColorSet:
    """U = vertices with >= r neighbors in the (r+1)-clique K."""
    K = _check_clique(g, K)
    if len(K) != r + 1:
        raise PreconditionError(f"K must be an (r+1)-clique, got {len(K)} vertices")
    if monochromatic_vertices(g, K):
        raise PreconditionError(f"K has a monochromatic vertex {monochromatic_vertices(g, K)[0]}")
    kcols = colors_of(g, K)
    if len(kcols) > comb(r, 2):
        raise PreconditionError(f"K has {len(kcols)} > C(r,2) colors")
    if common_neighborhood_mask(g, K):
        raise PreconditionError("K extends to an (r+2)-clique")
    if not meets_degree(g, Fraction(r - 1, r)):
        raise PreconditionError(f"need delta >= {r - 1}n/{r}")
    parts = []
    for i, xi in enumerate(K):
        others = [x for x in K if x != xi]
        parts.append(tuple(u for u in range(g.n)
                           if u not in others and all(g.has_edge(u, x) for x in others)))
    U = tuple(sorted(u for p in parts for u in p))
    steps = []
    col = g.color
    for i, Ui in enumerate(parts):
        for u in Ui:
            for j, xj in enumerate(K):
                if j != i and col(u, xj) != col(K[i], xj):
                    raise HypothesisError("clique-vertex-copy", f"f({u},{xj}) != f({K[i]},{xj})",
                                          {"K": K, "u": u})
        for a, b in combinations(Ui, 2):
            if g.has_edge(a, b):
                raise HypothesisError("parts-independent", f"edge {a}-{b} inside U_{i + 1}",
                                      {"K": K, "edge": (a, b)})
    for i, j in combinations(range(len(K)), 2):
        for a in parts[i]:
            for b in bits(g.adj(a) & to_mask(parts[j])):
                if col(a, b) != col(K[i], K[j]):
                    raise HypothesisError("cross-colors", f"f({a},{b}) != f(x_{i + 1}x_{j + 1})",
                                          {"K": K, "edge": (a, b)})
    steps.append("partition colors copied from K")
    d = min_degree(g)
    if len(U) < (r + 1) * d - (r - 1) * g.n or len(U) < d:
        raise HypothesisError("counting", f"|U|={len(U)} below the counting bound", {"K": K})
    ucols = colors_of(g, U)
    if not ucols <= kcols:
        raise HypothesisError("final-scan", "U has colors outside K", {"K": K})
    return ColorSet(U, ucols, "no-mono-vertex-clique", None, K, tuple(steps), tuple(parts))


def _edges_in(g: ColoredGraph, mask: int) -> Iterator[tuple[int, int]]:
    for a in bits(mask):
        for b in bits(g.adj(a) & mask & ~((2 << a) - 1)):
            yield a, b


def _fail(step: str, msg: str, **witness) -> HypothesisError:
    return HypothesisError(step, msg, witness)


def _very_simple(g: ColoredGraph, r: int, v: int, K: VertexSet) -> None:
    # main color of (v, K) absent inside K: every triple along every chain is excellent
    c1 = centered_color(g, v, K)
    for u, w in _edges_in(g, g.adj(v)):
        ch = build_chain(g, v, K, K[0], u, w, check_degree=False)
        for A, B in zip(ch.cliques, ch.cliques[1:]):
            if classify_triple(g, r, v, A, B).verdict != "Excellent":
                raise _fail("very-simple-transfer", "chain triple is not excellent",
                            v=v, K=K, main_color=c1, K_i=A, K_next=B)
        if g.color(u, w) not in colors_of(g, K):
            raise _fail("very-simple-transfer", f"color of {u}-{w} not in K", v=v, K=K)


def _many_colors(g: ColoredGraph, r: int, v: int, K: VertexSet) -> None:
    K_cols = colors_of(g, K)
    for u, w in _edges_in(g, g.adj(v)):
        ch = build_chain(g, v, K, K[0], u, w, check_degree=False)
        for A, B in zip(ch.cliques, ch.cliques[1:]):
            tc = classify_triple(g, r, v, A, B)
            lab = tc.labels
            if not any(len(colors_of(g, (z, lab["x1"], lab["y1"]))) == 3 for z in lab["zs"]):
                raise _fail("many-colors-rainbow", "no rainbow z x1 y1 triangle", v=v, K_i=A, K_next=B)
            if tc.verdict == "Neither":
                raise _fail("many-colors-good", "triple with a rainbow triangle is not good",
                            v=v, K_i=A, K_next=B, comparison=tc.witness)
        if g.color(u, w) not in K_cols:
            raise _fail("many-colors-transfer", f"color of {u}-{w} not in K", v=v, K=K)


def _select_centered(g: ColoredGraph, r: int) -> tuple[int, VertexSet, int, str]:
    best, first = None, None
    for v in range(g.n):
        for K in enumerate_cliques(g, r, from_mask(g.adj(v))):
            c = centered_color(g, v, K)
            if c is None:
                continue
            if first is None:
                first = (v, K, c)
            if isolated_vertices(g, K, c):
                key = (clique_profile(g, K)[c - 1], v, K)
                if best is None or key < best[0]:
                    best = (key, v, K, c)
    if best is not None:
        return best[1], best[2], best[3], "rule-a"
    if first is None:
        raise _fail("centered-clique", "no centered (r+1)-clique exists")
    return first + ("rule-b",)


def _mono_vertex(g: ColoredGraph, r: int, v: int, K: VertexSet, c1: int) -> list[str]:
    iso = isolated_vertices(g, K, c1)
    t = iso[0] if iso else K[0]
    steps = [f"t={t} ({'isolated' if iso else 'no isolated vertex'})"]
    K_cols = colors_of(g, K)
    p0 = clique_profile(g, K)
    branches = set()
    for u, w in _edges_in(g, g.adj(v)):
        ch = build_chain(g, v, K, t, u, w, check_degree=False)
        cl = ch.cliques
        for i in range(len(cl) - 2):
            A, B = cl[i], cl[i + 1]
            if classify_triple(g, r, v, A, B).verdict != "Excellent":
                raise _fail("mono-vertex-claim1", "non-excellent triple before the last step",
                            v=v, K=K, t=t, K_i=A, K_next=B)
            # the anchor only has to stay isolated up to K_{m-2}
            if iso and i + 1 <= len(cl) - 3 and t not in isolated_vertices(g, B, c1):
                raise _fail("mono-vertex-claim1", "isolated anchor stopped being isolated",
                            v=v, K_next=B, t=t)
            if clique_profile(g, B) != p0:
                raise _fail("mono-vertex-claim1", "profile changed along the chain", v=v, K_next=B)
        if len(cl) >= 2:
            A, B = cl[-2], cl[-1]
            rep = check_transfer_lemmas(g, r, v, A, B)
            branches.add(rep.branch)
            if not rep.passed:
                raise _fail("mono-vertex-claim2", "transfer consequences fail on the last step",
                            v=v, K_i=A, K_next=B)
            if not colors_of(g, B) <= colors_of(g, A):
                raise _fail("mono-vertex-claim2", "last clique has a color missing before it",
                            v=v, K_i=A, K_next=B)
        if g.color(u, w) not in K_cols:
            raise _fail("mono-vertex-transfer", f"color of {u}-{w} not in K", v=v, K=K)
    steps.append("last-step branches: " + ",".join(sorted(branches) or ["none"]))
    return steps


def _final(g: ColoredGraph, U: VertexSet, limit: int, res: ColorSet) -> ColorSet:
    cols = colors_of(g, U)
    if len(cols) > limit or len(U) < min_degree(g):
        raise _fail("final-scan", f"U has {len(cols)} colors and {len(U)} vertices", U=U)
    return res


def _first_nonmono_r2(g: ColoredGraph, r: int):
    for M in enumerate_cliques(g, r + 2):
        if len(colors_of(g, M)) > 1:
            return M
    return None


def _star_case(g: ColoredGraph, r: int, M: VertexSet, step: str) -> tuple[int, VertexSet, CliqueClass]:
    cls = classify_r2clique(g, M)
    if cls.kind != "TwoColoredStar":
        raise _fail(step, "(r+2)-clique is neither monochromatic nor a 2-colored star",
                    M=M, template=None if cls.template is None else
                    {"center": cls.template.center, "cycle": cls.template.cycle})
    v = cls.center
    K = tuple(k for k in M if k != v)[:r]
    _very_simple(g, r, v, K)
    return v, K, cls


def find_few_color_set(g: ColoredGraph, r: int) -> ColorSet:
    """U with |U| >= delta and at most C(r,2) colors inside G[U]."""
    if r < 3:
        raise PreconditionError("need r >= 3")
    if not meets_degree(g, Fraction(r - 1, r), 3):
        raise PreconditionError(f"need delta >= {r - 1}n/{r} + 3")
    limit = comb(r, 2)
    M = _first_nonmono_r2(g, r)
    if M is not None:
        v, K, cls = _star_case(g, r, M, "kr2-classify")
        U = g.neighbors(v)
        return _final(g, U, limit, ColorSet(U, colors_of(g, U), "two-colored-star", v, K,
                                            (f"star center {v} in {M}", "chains: all excellent")))
    rich = None
    for M in enumerate_cliques(g, r + 1):
        ncol = len(colors_of(g, M))
        if ncol <= limit and not monochromatic_vertices(g, M):
            res = extract_U_from_clique(g, r, M)
            return _final(g, res.U, limit, res)
        if ncol > limit and rich is None:
            rich = M
    if rich is not None:
        K = rich_subclique(g, rich, r)
        v = next(k for k in rich if k not in K)
        _many_colors(g, r, v, K)
        U = g.neighbors(v)
        return _final(g, U, limit, ColorSet(U, colors_of(g, U), "many-colors", v, K,
                                            (f"rich (r+1)-clique {rich}", "chains: all good")))
    v, K, c1, rule = _select_centered(g, r)
    steps = [f"centered clique by {rule}"] + _mono_vertex(g, r, v, K, c1)
    U = g.neighbors(v)
    return _final(g, U, limit, ColorSet(U, colors_of(g, U), "monochromatic-vertex", v, K, tuple(steps)))


def find_monochromatic_set(g: ColoredGraph, r: int) -> ColorSet:
    """U with |U| >= delta whose edges all share one color."""
    if r < 3:
        raise PreconditionError("need r >= 3")
    if not meets_degree(g, Fraction(r, r + 1), 3):
        raise PreconditionError(f"need delta >= {r}n/{r + 1} + 3")
    M = _first_nonmono_r2(g, r)
    if M is not None:
        v, K, cls = _star_case(g, r, M, "kr2-classify")
        U = g.neighbors(v)
        return _final(g, U, 1, ColorSet(U, colors_of(g, U), "two-colored-star", v, K,
                                        (f"star center {v} in {M}, color {cls.c2}",)))
    M = next(iter(enumerate_cliques(g, r + 2)), None)
    if M is None:
        raise _fail("kr2-exists", "no (r+2)-clique although the degree forces one")
    v, K = M[0], M[1:]
    c = next(iter(colors_of(g, M)))
    for u, w in _edges_in(g, g.adj(v)):
        ch = build_chain(g, v, K, K[0], u, w, check_degree=False)
        for Ki in ch.cliques:
            if colors_of(g, Ki + (v,)) != {c}:
                raise _fail("mono-chain", f"clique {Ki}+v is not monochromatic in {c}", v=v, K_i=Ki)
    U = g.neighbors(v)
    return _final(g, U, 1, ColorSet(U, colors_of(g, U), "all-monochromatic", v, M,
                                    (f"monochromatic (r+2)-clique {M}", "chains: all monochromatic")))
