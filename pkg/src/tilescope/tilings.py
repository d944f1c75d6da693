"""K_r-tilings: exact-cover search, enumeration, sampling, and the swap minimizer.

The search branches on the first uncovered vertex (lowest index, or a
shuffled order when sampling) and tries every r-clique through it among the
uncovered vertices.  Two cheap necessary conditions prune a node:

* every uncovered vertex keeps at least r-1 uncovered neighbors;
* no independent set of uncovered vertices is larger than the number of
  blocks still to place (a block meets an independent set at most once).
  Independent sets are grown greedily from each vertex, which on complete
  multipartite graphs recovers every part exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import NoTilingError, PreconditionError, SolverExhaustedError
from .graph import (ColoredGraph, ColorProfile, VertexSet, bits, cliques_in_mask,
                    discrepancy, profile, to_mask)

RESTART_CAP = 10_000


@dataclass(frozen=True)
class Tiling:
    blocks: tuple[VertexSet, ...]

    @staticmethod
    def of(blocks: Iterable[Iterable[int]]) -> "Tiling":
        """Canonical form: sorted blocks, ordered by first element."""
        bs = [tuple(sorted(b)) for b in blocks]
        bs.sort()
        return Tiling(tuple(bs))

    def edges(self) -> list[tuple[int, int]]:
        return [e for b in self.blocks for e in combinations(b, 2)]

    def profile(self, g: ColoredGraph) -> ColorProfile:
        return profile(g, self.edges())

    def __len__(self) -> int:
        return len(self.blocks)

    def __iter__(self):
        return iter(self.blocks)


def check_tiling(g: ColoredGraph, t: Tiling, r: int | None = None) -> None:
    """Raise PreconditionError unless t is a K_r-tiling of g."""
    seen = 0
    sizes = {len(b) for b in t.blocks}
    if len(sizes) > 1 or (r is not None and sizes and sizes != {r}):
        raise PreconditionError(f"blocks have sizes {sorted(sizes)}")
    for b in t.blocks:
        m = to_mask(b)
        if m & seen:
            raise PreconditionError(f"block {b} overlaps an earlier block")
        seen |= m
        if not g.is_clique(b):
            raise PreconditionError(f"block {b} is not a clique")
    if seen != g.full_mask:
        raise PreconditionError("blocks do not cover every vertex")


def _require_divisible(g: ColoredGraph, r: int) -> None:
    if r < 1:
        raise PreconditionError("r must be positive")
    if g.n % r:
        raise PreconditionError(f"r={r} does not divide n={g.n}")


class _Budget(Exception):
    pass


class _Search:
    def __init__(self, g: ColoredGraph, r: int, order: Sequence[int] | None = None,
                 rng: np.random.Generator | None = None, budget: int | None = None):
        self.g, self.r = g, r
        self.order = list(order) if order is not None else list(range(g.n))
        self.rng = rng
        self.budget = budget
        self.nodes = 0

    def _feasible(self, unc: int) -> bool:
        g, r = self.g, self.r
        left = unc.bit_count() // r
        for u in bits(unc):
            if (g.adj(u) & unc).bit_count() < r - 1:
                return False
            cand = unc & ~g.adj(u) & ~(1 << u)
            size = 1
            while cand and size + cand.bit_count() > left:
                low = cand & -cand
                size += 1
                if size > left:
                    return False
                cand &= ~g.adj(low.bit_length() - 1) & ~low
        return True

    def run(self, unc: int, chosen: list[VertexSet]) -> Iterator[list[VertexSet]]:
        if unc == 0:
            yield list(chosen)
            return
        self.nodes += 1
        if self.budget is not None and self.nodes > self.budget:
            raise _Budget
        if not self._feasible(unc):
            return
        v = next(x for x in self.order if (unc >> x) & 1)
        rest = unc & ~(1 << v)
        cands = list(cliques_in_mask(self.g, self.r - 1, rest & self.g.adj(v)))
        if self.rng is not None:
            self.rng.shuffle(cands)
        for c in cands:
            block = tuple(sorted((v,) + c))
            chosen.append(block)
            yield from self.run(rest & ~to_mask(c), chosen)
            chosen.pop()


def enumerate_tilings(g: ColoredGraph, r: int, limit: int | None = None) -> Iterator[Tiling]:
    """All K_r-tilings in canonical order (lexicographic on block lists)."""
    _require_divisible(g, r)
    if limit is not None and limit <= 0:
        return
    count = 0
    for blocks in _Search(g, r).run(g.full_mask, []):
        # lowest-index branching already emits canonical block order
        yield Tiling(tuple(blocks))
        count += 1
        if limit is not None and count >= limit:
            return


def find_tiling(g: ColoredGraph, r: int) -> Tiling | None:
    for t in enumerate_tilings(g, r, limit=1):
        return t
    return None


def count_tilings(g: ColoredGraph, r: int) -> int:
    return sum(1 for _ in enumerate_tilings(g, r))


def _sample_one(g: ColoredGraph, r: int, rng: np.random.Generator, budget: int) -> Tiling:
    for _ in range(RESTART_CAP):
        order = [int(x) for x in rng.permutation(g.n)]
        search = _Search(g, r, order=order, rng=rng, budget=budget)
        try:
            for blocks in search.run(g.full_mask, []):
                return Tiling.of(blocks)
        except _Budget:
            continue
        raise NoTilingError("no K_r-tiling exists (search space exhausted)")
    raise SolverExhaustedError(f"no tiling found within {RESTART_CAP} restarts")


def sample_tilings(g: ColoredGraph, r: int, count: int, seed: int,
                   budget: int | None = None) -> list[Tiling]:
    """``count`` tilings from seeded randomized restarts; repeats allowed."""
    _require_divisible(g, r)
    if count < 0:
        raise PreconditionError("count must be non-negative")
    rng = np.random.default_rng(seed)
    if budget is None:
        budget = 50 * max(g.n, 1)
    return [_sample_one(g, r, rng, budget) for _ in range(count)]


def tiling_discrepancy(g: ColoredGraph, t: Tiling) -> int:
    check_tiling(g, t)
    return discrepancy(t.profile(g))


def x_induced_edges(t: Tiling, X: Iterable[int]) -> int:
    xm = to_mask(X)
    total = 0
    for b in t.blocks:
        k = (to_mask(b) & xm).bit_count()
        total += k * (k - 1) // 2
    return total


def induced_fraction(t: Tiling, X: Iterable[int]) -> Fraction:
    e = sum(len(b) * (len(b) - 1) // 2 for b in t.blocks)
    return Fraction(x_induced_edges(t, X), e) if e else Fraction(0)


def minimize_crossing(n: int, r: int, X: Iterable[int]) -> Tiling:
    """Swap descent on K_n until every block meets X in k or k+1 vertices.

    A move takes blocks K, K' with |K' & X| >= |K & X| + 2 and exchanges
    an X-vertex of K' with a non-X vertex of K; each move strictly lowers
    the number of X-induced edges.  Steepest pair first, lowest indices
    on ties.
    """
    if r < 1 or n % r:
        raise PreconditionError(f"r={r} does not divide n={n}")
    xs = set(X)
    if any(not 0 <= x < n for x in xs):
        raise PreconditionError("X must be a subset of 0..n-1")
    blocks = [list(range(i, i + r)) for i in range(0, n, r)]
    while True:
        loads = [sum(1 for v in b if v in xs) for b in blocks]
        hi = max(range(len(blocks)), key=lambda i: (loads[i], -i))
        lo = min(range(len(blocks)), key=lambda i: (loads[i], i))
        if loads[hi] - loads[lo] < 2:
            break
        x = min(v for v in blocks[hi] if v in xs)
        y = min(v for v in blocks[lo] if v not in xs)
        blocks[hi][blocks[hi].index(x)] = y
        blocks[lo][blocks[lo].index(y)] = x
    return Tiling.of(blocks)


def induced_fraction_bound(n: int, r: int, X: Iterable[int]) -> Fraction:
    """2|X|/n - 1, valid for every K_r-tiling of K_n when |X| > (r-1)n/r."""
    size = len(set(X))
    if r * size <= (r - 1) * n:
        raise PreconditionError(f"need |X| > (r-1)n/r, got |X|={size}, n={n}, r={r}")
    return Fraction(2 * size, n) - 1
