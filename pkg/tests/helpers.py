"""Independent brute-force oracles and corpus generators shared by the tests.

Nothing here calls the solver, the clique enumerator, or the template
detector of the package; the oracles work from ``itertools`` only.
"""

from __future__ import annotations

import random
from collections import Counter
from fractions import Fraction
from itertools import combinations, permutations
from math import factorial

from tilescope.graph import ColoredGraph, build_graph

# PASS/FAIL lines from the acceptance tests, echoed in the terminal summary
SCOREBOARD: list[str] = []


def brute_cliques(g: ColoredGraph, size: int, within=None):
    vs = range(g.n) if within is None else sorted(within)
    return [c for c in combinations(vs, size)
            if all(g.has_edge(a, b) for a, b in combinations(c, 2))]


def brute_common_neighbors(g: ColoredGraph, K):
    return [v for v in range(g.n) if v not in K and all(g.has_edge(v, k) for k in K)]


def brute_min_degree(g: ColoredGraph) -> int:
    return min(sum(1 for u in range(g.n) if g.has_edge(u, v)) for v in range(g.n)) if g.n else 0


def brute_tilings(g: ColoredGraph, r: int):
    """All K_r-tilings as sorted tuples of sorted blocks (plain recursion)."""
    out = []

    def rec(rest, acc):
        if not rest:
            out.append(tuple(sorted(acc)))
            return
        v = rest[0]
        for others in combinations(rest[1:], r - 1):
            b = (v,) + others
            if all(g.has_edge(a, c) for a, c in combinations(b, 2)):
                rec([x for x in rest if x not in b], acc + [b])

    if g.n % r == 0:
        rec(list(range(g.n)), [])
    return sorted(set(out))


def complete_tiling_count(n: int, r: int) -> int:
    k = n // r
    return factorial(n) // (factorial(r) ** k * factorial(k))


def brute_discrepancy(counts) -> int:
    """Largest t with some color on at least (e + t)/q edges."""
    q, e = len(counts), sum(counts)
    t = -e
    while any(q * c >= e + t + 1 for c in counts):
        t += 1
    return t


def balanced(colors) -> bool:
    return Counter(colors[0::2]) == Counter(colors[1::2])


def brute_templates(g: ColoredGraph, r: int):
    """Set of (center, canonical cycle) over all unbalanced 4-/6-cycles."""
    found = set()
    for K in brute_cliques(g, r - 2):
        H = brute_common_neighbors(g, K)
        for L in (4, 6):
            for cyc in permutations(H, L):
                if cyc[0] != min(cyc) or cyc[1] > cyc[-1]:
                    continue
                if not all(g.has_edge(cyc[i], cyc[(i + 1) % L]) for i in range(L)):
                    continue
                cols = [g.color(cyc[i], cyc[(i + 1) % L]) for i in range(L)]
                if not balanced(cols):
                    found.add((tuple(K), cyc))
    return found


def colors_in(g: ColoredGraph, U) -> set:
    return {g.color(a, b) for a, b in combinations(sorted(U), 2) if g.has_edge(a, b)}


def degree_ok(g: ColoredGraph, ratio: Fraction, C: int) -> bool:
    return brute_min_degree(g) >= ratio * g.n + C


def thin(rng: random.Random, n: int, colors: dict, ratio: Fraction, C: int, tries: int) -> dict:
    """Delete random edges while the minimum degree stays >= ratio*n + C."""
    deg = Counter()
    for u, v in colors:
        deg[u] += 1
        deg[v] += 1
    keys = sorted(colors)
    for _ in range(tries):
        u, v = rng.choice(keys)
        if (u, v) not in colors:
            continue
        if deg[u] - 1 >= ratio * n + C and deg[v] - 1 >= ratio * n + C:
            del colors[(u, v)]
            deg[u] -= 1
            deg[v] -= 1
    return colors


def mono_dense(rng: random.Random, n: int, ratio: Fraction, C: int, q: int = 2, color: int = 1,
               tries: int = 60) -> ColoredGraph:
    cols = {(u, v): color for u, v in combinations(range(n), 2)}
    return ColoredGraph(n, q, thin(rng, n, cols, ratio, C, tries))


def star_dense(rng: random.Random, n: int, ratio: Fraction, C: int, stars: int, q: int,
               tries: int = 60) -> ColoredGraph:
    """Pairwise non-adjacent star vertices, each with its own color; base color 1.

    Every even cycle through a star vertex uses its color once on each side,
    so these colorings are template-free.
    """
    room = n - 1 - (ratio * n + C).__ceil__()
    S = rng.sample(range(n), max(1, min(stars, room + 1)))
    own = {s: 2 + i % (q - 1) for i, s in enumerate(S)}
    cols = {}
    for u, v in combinations(range(n), 2):
        if u in own and v in own:
            continue
        cols[(u, v)] = own.get(u, own.get(v, 1))
    return ColoredGraph(n, q, thin(rng, n, cols, ratio, C, tries))


def recolor(rng: random.Random, g: ColoredGraph, k: int) -> ColoredGraph:
    cols = g.color_map()
    for e in rng.sample(sorted(cols), k):
        cols[e] = rng.randint(1, g.q)
    return ColoredGraph(g.n, g.q, cols)


def random_dense(rng: random.Random, n: int, ratio: Fraction, C: int, q: int,
                 tries: int = 60) -> ColoredGraph:
    cols = {(u, v): rng.randint(1, q) for u, v in combinations(range(n), 2)}
    return ColoredGraph(n, q, thin(rng, n, cols, ratio, C, tries))


def from_edges(n: int, q: int, edges) -> ColoredGraph:
    return build_graph(n, q, edges)


try:
    from hypothesis import strategies as st
except ImportError:  # pragma: no cover
    st = None

if st is not None:
    @st.composite
    def colored_graphs(draw, min_n=0, max_n=9, max_q=4, density=None):
        n = draw(st.integers(min_n, max_n))
        q = draw(st.integers(1, max_q))
        p = density if density is not None else draw(st.sampled_from([0.3, 0.6, 0.9, 1.0]))
        seed = draw(st.integers(0, 2 ** 32 - 1))
        rng = random.Random(seed)
        edges = [(u, v, rng.randint(1, q)) for u, v in combinations(range(n), 2) if rng.random() < p]
        return build_graph(n, q, edges)
