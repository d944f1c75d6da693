"""Edge-colored simple graphs on vertices 0..n-1 with colors 1..q.

Adjacency is kept twice: as one int bitset per vertex (for fast
intersections) and as a dict from ``(u, v)`` with ``u < v`` to the color.
Vertex sets are passed around as sorted tuples.
"""

from __future__ import annotations

from itertools import combinations
from typing import Iterable, Iterator, Sequence

from .errors import PreconditionError

VertexSet = tuple[int, ...]
Edge = tuple[int, int]


def bits(mask: int) -> Iterator[int]:
    """Yield the indices of set bits in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def to_mask(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def from_mask(mask: int) -> VertexSet:
    return tuple(bits(mask))


def vset(vertices: Iterable[int]) -> VertexSet:
    """Sorted duplicate-free tuple."""
    return tuple(sorted(set(vertices)))


def _key(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


class ColoredGraph:
    """Immutable q-edge-colored simple graph."""

    __slots__ = ("_n", "_q", "_adj", "_color", "_full")

    def __init__(self, n: int, q: int, colors: dict[Edge, int]):
        # trusted constructor; use build_graph for validated input
        adj = [0] * n
        for (u, v) in colors:
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        object.__setattr__(self, "_n", n)
        object.__setattr__(self, "_q", q)
        object.__setattr__(self, "_adj", tuple(adj))
        object.__setattr__(self, "_color", dict(colors))
        object.__setattr__(self, "_full", (1 << n) - 1)

    def __setattr__(self, name, value):
        raise AttributeError("ColoredGraph is immutable")

    @property
    def n(self) -> int:
        return self._n

    @property
    def q(self) -> int:
        return self._q

    @property
    def full_mask(self) -> int:
        return self._full

    def adj(self, v: int) -> int:
        """Neighborhood of ``v`` as a bitset."""
        return self._adj[v]

    def has_edge(self, u: int, v: int) -> bool:
        return u != v and (self._adj[u] >> v) & 1 == 1

    def color(self, u: int, v: int) -> int:
        try:
            return self._color[_key(u, v)]
        except KeyError:
            raise PreconditionError(f"{{{u},{v}}} is not an edge") from None

    def degree(self, v: int) -> int:
        return self._adj[v].bit_count()

    def neighbors(self, v: int) -> VertexSet:
        return from_mask(self._adj[v])

    def edges(self) -> list[tuple[int, int, int]]:
        return [(u, v, c) for (u, v), c in sorted(self._color.items())]

    @property
    def num_edges(self) -> int:
        return len(self._color)

    def color_map(self) -> dict[Edge, int]:
        return dict(self._color)

    def is_clique(self, vertices: Sequence[int]) -> bool:
        m = to_mask(vertices)
        return all((self._adj[v] | (1 << v)) & m == m for v in vertices)

    def induced(self, vertices: Iterable[int]) -> tuple["ColoredGraph", VertexSet]:
        """Induced subgraph relabelled 0..k-1; returns (graph, new->old map)."""
        old = vset(vertices)
        index = {v: i for i, v in enumerate(old)}
        colors = {}
        for (u, v), c in self._color.items():
            if u in index and v in index:
                colors[(index[u], index[v])] = c
        return ColoredGraph(len(old), self._q, colors), old

    def __eq__(self, other) -> bool:
        if not isinstance(other, ColoredGraph):
            return NotImplemented
        return (self._n, self._q, self._color) == (other._n, other._q, other._color)

    def __hash__(self) -> int:
        return hash((self._n, self._q, tuple(sorted(self._color.items()))))

    def __repr__(self) -> str:
        return f"ColoredGraph(n={self._n}, q={self._q}, e={len(self._color)})"


class ColorProfile(tuple):
    """Per-color edge counts; index c-1 holds #c."""

    __slots__ = ()

    @property
    def q(self) -> int:
        return len(self)

    @property
    def total(self) -> int:
        return sum(self)


def build_graph(n: int, q: int, colored_edges: Iterable[Sequence[int]]) -> ColoredGraph:
    """Validated constructor. Identical duplicates collapse, conflicting ones raise."""
    if n < 0 or q < 1:
        raise PreconditionError(f"need n >= 0 and q >= 1, got n={n}, q={q}")
    colors: dict[Edge, int] = {}
    for item in colored_edges:
        u, v, c = (int(x) for x in item)
        if not (0 <= u < n and 0 <= v < n):
            raise PreconditionError(f"vertex out of range in edge {(u, v, c)}")
        if u == v:
            raise PreconditionError(f"self-loop at {u}")
        if not 1 <= c <= q:
            raise PreconditionError(f"color {c} outside 1..{q}")
        k = _key(u, v)
        old = colors.get(k)
        if old is not None and old != c:
            raise PreconditionError(f"conflicting colors {old} and {c} for pair {k}")
        colors[k] = c
    return ColoredGraph(n, q, colors)


def complete_graph(n: int, q: int = 1, color: int = 1) -> ColoredGraph:
    return build_graph(n, q, [(u, v, color) for u, v in combinations(range(n), 2)])


def complete_multipartite(sizes: Sequence[int], q: int = 1, color: int = 1) -> tuple[ColoredGraph, list[VertexSet]]:
    """Complete multipartite graph, parts laid out consecutively."""
    parts, start = [], 0
    for s in sizes:
        parts.append(tuple(range(start, start + s)))
        start += s
    edges = [(u, v, color) for i, j in combinations(range(len(parts)), 2)
             for u in parts[i] for v in parts[j]]
    return build_graph(start, q, edges), parts


def _check_vertices(g: ColoredGraph, vertices: Iterable[int]) -> None:
    for v in vertices:
        if not 0 <= v < g.n:
            raise PreconditionError(f"vertex {v} out of range 0..{g.n - 1}")


def common_neighborhood_mask(g: ColoredGraph, K: Iterable[int]) -> int:
    m = g.full_mask
    for v in K:
        m &= g.adj(v)
    return m


def common_neighborhood(g: ColoredGraph, K: Iterable[int]) -> VertexSet:
    """Vertices outside K adjacent to all of K; N(empty) = V."""
    K = tuple(K)
    _check_vertices(g, K)
    return from_mask(common_neighborhood_mask(g, K))


def _cliques(g: ColoredGraph, size: int, cand: int, prefix: tuple[int, ...]) -> Iterator[VertexSet]:
    if size == 0:
        yield prefix
        return
    while cand:
        if cand.bit_count() < size:
            return
        low = cand & -cand
        v = low.bit_length() - 1
        cand ^= low
        yield from _cliques(g, size - 1, cand & g.adj(v), prefix + (v,))


def cliques_in_mask(g: ColoredGraph, size: int, mask: int) -> Iterator[VertexSet]:
    """Cliques of the given size inside a bitset, lexicographic order."""
    return _cliques(g, size, mask, ())


def enumerate_cliques(g: ColoredGraph, size: int, within: Iterable[int] | None = None) -> Iterator[VertexSet]:
    if size < 1:
        raise PreconditionError("clique size must be >= 1")
    if within is None:
        mask = g.full_mask
    else:
        within = tuple(within)
        _check_vertices(g, within)
        mask = to_mask(within)
    return _cliques(g, size, mask, ())


def min_degree(g: ColoredGraph) -> int:
    if g.n == 0:
        return 0
    return min(g.degree(v) for v in range(g.n))


def profile(g: ColoredGraph, edges: Iterable[Sequence[int]]) -> ColorProfile:
    counts = [0] * g.q
    seen = set()
    for u, v in edges:
        k = _key(u, v)
        if k in seen:
            continue
        seen.add(k)
        counts[g.color(*k) - 1] += 1
    return ColorProfile(counts)


def clique_edges(K: Sequence[int]) -> list[Edge]:
    return list(combinations(sorted(K), 2))


def clique_profile(g: ColoredGraph, K: Sequence[int]) -> ColorProfile:
    return profile(g, clique_edges(K))


def colors_of(g: ColoredGraph, vertices: Iterable[int]) -> frozenset[int]:
    """Set of colors on edges induced by ``vertices``."""
    vs = vset(vertices)
    m = to_mask(vs)
    out = set()
    for u in vs:
        for v in bits(g.adj(u) & m & ~((2 << u) - 1)):
            out.add(g.color(u, v))
    return frozenset(out)


def discrepancy(p: Sequence[int]) -> int:
    """q * max count - total; 0 iff all counts are equal."""
    if len(p) == 0:
        return 0
    return len(p) * max(p) - sum(p)
