"""K_r-templates, their blow-ups F+, and the two-tiling discrepancy boost.

A template is an (r-2)-clique ``center`` together with a 4- or 6-cycle in
the common neighborhood of the center whose odd-position and even-position
edge colors differ as multisets (an unbalanced cycle).

Detection per center runs a fast signature test first (see
``_unbalanced_witness``); only centers that pass it are searched cycle by
cycle, so template-free graphs are rejected quickly.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from itertools import combinations
from typing import Iterator, Sequence

from .errors import PreconditionError
from .graph import (ColoredGraph, VertexSet, bits, build_graph, common_neighborhood_mask,
                    discrepancy, enumerate_cliques, to_mask)
from .tilings import Tiling, check_tiling, find_tiling


def is_balanced_cycle(colors: Sequence[int]) -> bool:
    if len(colors) % 2:
        raise PreconditionError(f"cycle length {len(colors)} is odd")
    if len(colors) not in (4, 6):
        raise PreconditionError(f"cycle length {len(colors)} is not 4 or 6")
    return Counter(colors[0::2]) == Counter(colors[1::2])


def cycle_colors(g: ColoredGraph, cycle: Sequence[int]) -> tuple[int, ...]:
    L = len(cycle)
    return tuple(g.color(cycle[i], cycle[(i + 1) % L]) for i in range(L))


def canonical_cycle(cycle: Sequence[int]) -> tuple[int, ...]:
    """Lexicographically least rotation/reflection."""
    L = len(cycle)
    seqs = []
    for seq in (list(cycle), list(reversed(cycle))):
        for i in range(L):
            seqs.append(tuple(seq[i:] + seq[:i]))
    return min(seqs)


@dataclass(frozen=True)
class Template:
    center: VertexSet
    cycle: tuple[int, ...]

    @property
    def k(self) -> int:
        return len(self.cycle) // 2

    @property
    def vertices(self) -> VertexSet:
        return tuple(sorted(self.center + self.cycle))


def check_template(g: ColoredGraph, t: Template, r: int) -> None:
    if len(t.center) != r - 2:
        raise PreconditionError(f"center must have r-2 = {r - 2} vertices")
    if len(t.cycle) not in (4, 6) or len(set(t.cycle)) != len(t.cycle):
        raise PreconditionError("cycle must have 4 or 6 distinct vertices")
    if set(t.center) & set(t.cycle):
        raise PreconditionError("center and cycle overlap")
    if not g.is_clique(t.center):
        raise PreconditionError("center is not a clique")
    nk = common_neighborhood_mask(g, t.center)
    if any(not (nk >> w) & 1 for w in t.cycle):
        raise PreconditionError("cycle is not inside the common neighborhood of the center")
    L = len(t.cycle)
    if any(not g.has_edge(t.cycle[i], t.cycle[(i + 1) % L]) for i in range(L)):
        raise PreconditionError("cycle edges missing")
    if is_balanced_cycle(cycle_colors(g, t.cycle)):
        raise PreconditionError("cycle is balanced: not a template")


def _sig(plus: Sequence[int], minus: Sequence[int]) -> tuple:
    c = Counter(plus)
    c.subtract(minus)
    return tuple(sorted((col, m) for col, m in c.items() if m))


def _unbalanced_witness(g: ColoredGraph, H: int) -> tuple[int, ...] | None:
    """Some unbalanced 4- or 6-cycle inside the vertex mask H, or None.

    Splitting a cycle at two antipodal vertices u, w gives two u-w paths;
    the cycle is balanced exactly when the paths have the same signed
    color signature, so it is enough to look for two internally disjoint
    u-w paths with different signatures.
    """
    col = g.color
    verts = list(bits(H))
    for u, w in combinations(verts, 2):
        # length 2 paths u-a-w
        seen = {}
        for a in bits(H & g.adj(u) & g.adj(w)):
            s = _sig([col(u, a)], [col(a, w)])
            for s2, a2 in seen.items():
                if s2 != s:
                    return (u, a2, w, a)
            seen.setdefault(s, a)
    for u, w in combinations(verts, 2):
        groups: dict[tuple, list[tuple[int, int]]] = {}
        inner = H & ~(1 << u) & ~(1 << w)
        for a in bits(inner & g.adj(u)):
            cua = col(u, a)
            for b in bits(inner & g.adj(a) & g.adj(w)):
                s = _sig([cua, col(b, w)], [col(a, b)])
                groups.setdefault(s, []).append((a, b))
        if len(groups) < 2:
            continue
        keys = list(groups)
        for i, j in combinations(range(len(keys)), 2):
            for a, b in groups[keys[i]]:
                for a2, b2 in groups[keys[j]]:
                    if len({a, b, a2, b2}) == 4:
                        return (u, a, b, w, b2, a2)
    return None


def _cycles(g: ColoredGraph, H: int, L: int) -> Iterator[tuple[int, ...]]:
    """Canonical L-cycles in H: smallest vertex first, then smaller neighbor."""
    for s in bits(H):
        higher = H & ~((2 << s) - 1)
        last_ok = g.adj(s)
        path = [s]

        def extend(cur: int, used: int) -> Iterator[tuple[int, ...]]:
            if len(path) == L:
                if path[1] < path[-1]:
                    yield tuple(path)
                return
            cand = g.adj(cur) & higher & ~used
            if len(path) == L - 1:
                cand &= last_ok
            for x in bits(cand):
                path.append(x)
                yield from extend(x, used | (1 << x))
                path.pop()

        yield from extend(s, 1 << s)


def centers(g: ColoredGraph, r: int) -> Iterator[VertexSet]:
    if r < 3:
        raise PreconditionError("templates need r >= 3")
    return enumerate_cliques(g, r - 2)


def find_templates(g: ColoredGraph, r: int, limit: int | None = None) -> Iterator[Template]:
    """Templates in canonical order: center, then 4- before 6-cycles, then cycle."""
    count = 0
    for K in centers(g, r):
        H = common_neighborhood_mask(g, K)
        if _unbalanced_witness(g, H) is None:
            continue
        for L in (4, 6):
            for cyc in _cycles(g, H, L):
                if not is_balanced_cycle(cycle_colors(g, cyc)):
                    yield Template(K, cyc)
                    count += 1
                    if limit is not None and count >= limit:
                        return


def has_template(g: ColoredGraph, r: int) -> bool:
    return any(_unbalanced_witness(g, common_neighborhood_mask(g, K)) is not None
               for K in centers(g, r))


@dataclass(frozen=True)
class Blowup:
    graph: ColoredGraph
    center_copies: tuple[VertexSet, ...]   # Z_1..Z_k
    cycle_vertices: tuple[int, ...]        # u_1..u_2k
    origin: tuple[int, ...]                # blow-up vertex -> template vertex
    template: Template

    @property
    def r(self) -> int:
        return len(self.center_copies[0]) + 2


def blowup(g: ColoredGraph, t: Template) -> Blowup:
    r = len(t.center) + 2
    check_template(g, t, r)
    k, c = t.k, len(t.center)
    origin = [t.center[i] for j in range(k) for i in range(c)] + list(t.cycle)
    Z = tuple(tuple(range(j * c, (j + 1) * c)) for j in range(k))
    U = tuple(range(k * c, k * c + 2 * k))
    edges = []
    for j, j2 in ((a, b) for a in range(k) for b in range(k)):
        for i, i2 in combinations(range(c), 2):
            edges.append((Z[j][i], Z[j2][i2], g.color(t.center[i], t.center[i2])))
    for j in range(k):
        for i in range(c):
            for l, w in enumerate(t.cycle):
                edges.append((Z[j][i], U[l], g.color(t.center[i], w)))
    L = 2 * k
    for l in range(L):
        edges.append((U[l], U[(l + 1) % L], g.color(t.cycle[l], t.cycle[(l + 1) % L])))
    bg = build_graph(k * c + L, g.q, edges)
    return Blowup(bg, Z, U, tuple(origin), t)


def check_blowup(b: Blowup) -> None:
    k = len(b.cycle_vertices) // 2
    c = len(b.center_copies[0]) if b.center_copies else 0
    if len(b.center_copies) != k or any(len(z) != c for z in b.center_copies):
        raise PreconditionError("blow-up must have k center copies of equal size")
    if b.graph.n != c * k + 2 * k:
        raise PreconditionError("blow-up has the wrong number of vertices")
    for i in range(c):
        cls = [z[i] for z in b.center_copies]
        if any(b.graph.has_edge(x, y) for x, y in combinations(cls, 2)):
            raise PreconditionError("a blown-up center vertex is not independent")
    U = b.cycle_vertices
    if is_balanced_cycle(cycle_colors(b.graph, U)):
        raise PreconditionError("cycle is balanced: not a template")


def canonical_tilings(b: Blowup, r: int) -> tuple[Tiling, Tiling]:
    """T1 = {Z_j + u_{2j-1}u_{2j}}, T2 = {Z_j + u_{2j}u_{2j+1}} (indices mod 2k)."""
    check_blowup(b)
    if b.r != r:
        raise PreconditionError(f"blow-up was built for r={b.r}, not {r}")
    U, k = b.cycle_vertices, len(b.center_copies)
    t1 = Tiling.of(b.center_copies[j] + (U[2 * j], U[2 * j + 1]) for j in range(k))
    t2 = Tiling.of(b.center_copies[j] + (U[2 * j + 1], U[(2 * j + 2) % (2 * k)]) for j in range(k))
    check_tiling(b.graph, t1, r)
    check_tiling(b.graph, t2, r)
    return t1, t2


@dataclass(frozen=True)
class EmbeddedBlowup:
    template: Template
    blowup: Blowup
    vertex_map: tuple[int, ...]   # blow-up vertex -> host vertex

    def image(self, t: Tiling) -> Tiling:
        return Tiling.of(tuple(self.vertex_map[v] for v in b) for b in t.blocks)


def check_embedding(g: ColoredGraph, b: Blowup, vmap: Sequence[int]) -> None:
    if len(set(vmap)) != len(vmap) or len(vmap) != b.graph.n:
        raise PreconditionError("embedding is not injective")
    for u, v, c in b.graph.edges():
        if not g.has_edge(vmap[u], vmap[v]) or g.color(vmap[u], vmap[v]) != c:
            raise PreconditionError(f"edge {(u, v)} is not preserved")


EMBED_TRIES = 2000


def _embed(g: ColoredGraph, t: Template, used: int) -> tuple[int, ...] | None:
    """Clone each center vertex k-1 times among unused vertices."""
    k, C = t.k, t.center
    c = len(C)
    blocked = used | to_mask(t.center) | to_mask(t.cycle)
    pools = []
    for i, ci in enumerate(C):
        pool = []
        for z in bits(g.full_mask & ~blocked):
            if all(g.has_edge(z, w) and g.color(z, w) == g.color(ci, w) for w in t.cycle) and \
               all(g.has_edge(z, C[j]) and g.color(z, C[j]) == g.color(ci, C[j]) for j in range(c) if j != i):
                pool.append(z)
        if len(pool) < k - 1:
            return None
        pools.append(pool)

    chosen: list[tuple[int, ...]] = []

    def fits(i: int, z: int, taken: set) -> bool:
        if z in taken:
            return False
        for j, clones in enumerate(chosen):
            for z2 in clones + (C[j],):
                if not g.has_edge(z, z2) or g.color(z, z2) != g.color(C[i], C[j]):
                    return False
        return True

    def pick(i: int, taken: set) -> bool:
        if i == c:
            return True
        for combo in combinations(pools[i], k - 1):
            if any(not fits(i, z, taken) for z in combo):
                continue
            chosen.append(combo)
            if pick(i + 1, taken | set(combo)):
                return True
            chosen.pop()
        return False

    if not pick(0, set()):
        return None
    vmap = []
    for j in range(k):
        for i in range(c):
            vmap.append(C[i] if j == 0 else chosen[i][j - 1])
    return tuple(vmap) + t.cycle


def greedy_disjoint_blowups(g: ColoredGraph, r: int) -> list[EmbeddedBlowup]:
    """Vertex-disjoint family of embedded F+ copies, greedy in template order.

    Each center is tried once, on the vertices not used so far; at most
    EMBED_TRIES of its unbalanced cycles are tried before moving on, which
    keeps dense graphs with very many templates tractable.
    """
    out: list[EmbeddedBlowup] = []
    used = 0
    for K in centers(g, r):
        if to_mask(K) & used:
            continue
        H = common_neighborhood_mask(g, K) & ~used
        if _unbalanced_witness(g, H) is None:
            continue
        tries = 0
        for L in (4, 6):
            for cyc in _cycles(g, H, L):
                if is_balanced_cycle(cycle_colors(g, cyc)):
                    continue
                t = Template(K, cyc)
                vmap = _embed(g, t, used)
                tries += 1
                if vmap is not None:
                    b = blowup(g, t)
                    check_embedding(g, b, vmap)
                    out.append(EmbeddedBlowup(t, b, vmap))
                    used |= to_mask(vmap)
                    break
                if tries >= EMBED_TRIES:
                    break
            else:
                continue
            break
    return out


@dataclass(frozen=True)
class BoostResult:
    tiling: Tiling          # the assembled tiling with larger discrepancy
    color: int              # majority color over the blow-ups
    margin: int             # #color(high) - #color(low)
    high: Tiling            # assembly raising #color
    low: Tiling             # flipped assembly
    copies: int             # number of embedded blow-ups
    switching: int          # copies whose two tilings differ in ``color``


def boost_discrepancy(g: ColoredGraph, r: int) -> BoostResult | None:
    if g.n % r:
        raise PreconditionError(f"r={r} does not divide n={g.n}")
    emb = greedy_disjoint_blowups(g, r)
    if not emb:
        return None
    covered = 0
    for e in emb:
        covered |= to_mask(e.vertex_map)
    rest = [v for v in range(g.n) if not (covered >> v) & 1]
    sub, back = g.induced(rest)
    t0 = find_tiling(sub, r)
    if t0 is None:
        return None
    base = [tuple(back[v] for v in blk) for blk in t0.blocks]

    pairs = []
    for e in emb:
        t1, t2 = (e.image(t) for t in canonical_tilings(e.blowup, r))
        pairs.append((t1, t2, [a - b for a, b in zip(t1.profile(g), t2.profile(g))]))
    votes = [sum(1 for _, _, d in pairs if d[c]) for c in range(g.q)]
    c = max(range(g.q), key=lambda i: (votes[i], -i))

    high, low = list(base), list(base)
    margin = 0
    for t1, t2, d in pairs:
        if d[c] == 0:
            high.extend(t1.blocks)
            low.extend(t1.blocks)
            continue
        more, fewer = (t1, t2) if d[c] > 0 else (t2, t1)
        high.extend(more.blocks)
        low.extend(fewer.blocks)
        margin += abs(d[c])
    th, tl = Tiling.of(high), Tiling.of(low)
    check_tiling(g, th, r)
    check_tiling(g, tl, r)
    best = th if discrepancy(th.profile(g)) >= discrepancy(tl.profile(g)) else tl
    return BoostResult(best, c + 1, margin, th, tl, len(emb), votes[c])
