"""Complete (r+1)-partite colorings whose K_r-tilings all have discrepancy 0.

Two colorings share one vertex layout: parts V_1..V_r of size (1-alpha)n/r
and a last part V_{r+1} split into Y_1..Y_q with |Y_k| = alpha_k n.

* variant ``"C1"`` (q >= C(r,2)): edges between V_i and V_j get a distinct
  color per pair {i, j};
* variant ``"C2"`` (q <= C(r,2)): the pairs are grouped, a+1 pairs for each
  of the first b colors and a pairs for the rest, where C(r,2) = a*q + b.

In both, every edge touching Y_k has color k.  All arithmetic is exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb, lcm
from typing import Sequence

from .errors import PreconditionError
from .graph import ColoredGraph, ColorProfile, VertexSet, build_graph, min_degree

VARIANTS = ("C1", "C2")


@dataclass(frozen=True)
class ConstructionParams:
    r: int
    q: int
    alphas: tuple[Fraction, ...]
    variant: str

    def __post_init__(self):
        alphas = tuple(Fraction(a) for a in self.alphas)
        object.__setattr__(self, "alphas", alphas)
        if self.r < 3:
            raise PreconditionError(f"r must be >= 3, got {self.r}")
        if self.variant not in VARIANTS:
            raise PreconditionError(f"variant must be one of {VARIANTS}")
        if self.q < 1 or len(alphas) != self.q:
            raise PreconditionError("need q >= 1 and exactly q alphas")
        if any(a < 0 for a in alphas) or sum(alphas) > 1:
            raise PreconditionError("alphas must be non-negative with sum <= 1")
        pairs = comb(self.r, 2)
        if self.variant == "C1" and self.q < pairs:
            raise PreconditionError(f"C1 needs q >= C(r,2) = {pairs}")
        if self.variant == "C2" and self.q > pairs:
            raise PreconditionError(f"C2 needs q <= C(r,2) = {pairs}")

    @property
    def alpha(self) -> Fraction:
        return sum(self.alphas, Fraction(0))

    @property
    def ab(self) -> tuple[int, int]:
        """(a, b) with C(r,2) = a*q + b and 0 <= b < q."""
        return divmod(comb(self.r, 2), self.q)


@dataclass(frozen=True)
class ConstructedGraph:
    params: ConstructionParams
    n: int
    graph: ColoredGraph
    parts: tuple[VertexSet, ...]
    y_parts: tuple[VertexSet, ...]
    g_map: dict[tuple[int, int], int] = field(hash=False)

    @property
    def min_degree(self) -> int:
        return min_degree(self.graph)


def _admissible(p: ConstructionParams, n: int) -> bool:
    if n <= 0 or n % p.r:
        return False
    if any((a * n).denominator != 1 for a in p.alphas):
        return False
    return ((1 - p.alpha) * n / p.r).denominator == 1


def minimal_admissible_n(p: ConstructionParams, floor: int = 0) -> int:
    """Smallest admissible n strictly above ``floor``."""
    # everything divides this period, so admissibility is periodic in it
    period = lcm(p.r, *(a.denominator for a in p.alphas), ((1 - p.alpha) / p.r).denominator)
    n = max(floor, 0) + 1
    for cand in range(n, n + period + 1):
        if _admissible(p, cand):
            return cand
    raise AssertionError("unreachable: period is admissible")


def g_map(p: ConstructionParams) -> dict[tuple[int, int], int]:
    """Canonical g: lexicographic pairs of 1..r to colors."""
    pairs = list(combinations(range(1, p.r + 1), 2))
    if p.variant == "C1":
        return {pr: k for k, pr in enumerate(pairs, start=1)}
    a, b = p.ab
    out, cursor = {}, 0
    for k in range(1, p.q + 1):
        size = a + 1 if k <= b else a
        for pr in pairs[cursor:cursor + size]:
            out[pr] = k
        cursor += size
    return out


def build(p: ConstructionParams, n: int) -> ConstructedGraph:
    if not _admissible(p, n):
        raise PreconditionError(f"n={n} is not admissible for {p}")
    s = int((1 - p.alpha) * n / p.r)
    parts: list[VertexSet] = [tuple(range(i * s, (i + 1) * s)) for i in range(p.r)]
    start = p.r * s
    y_parts = []
    for a in p.alphas:
        size = int(a * n)
        y_parts.append(tuple(range(start, start + size)))
        start += size
    parts.append(tuple(v for y in y_parts for v in y))
    gm = g_map(p)
    edges = []
    for (i, j), c in gm.items():
        edges.extend((u, v, c) for u in parts[i - 1] for v in parts[j - 1])
    for k, y in enumerate(y_parts, start=1):
        edges.extend((u, v, k) for u in y for i in range(p.r) for v in parts[i])
    return ConstructedGraph(p, n, build_graph(n, p.q, edges), tuple(parts), tuple(y_parts), gm)


def preset_mid_q(r: int, q: int) -> ConstructionParams:
    """C(r,2) <= q <= C(r+1,2); min degree r n/(r+1)."""
    pairs = comb(r, 2)
    if not pairs <= q <= comb(r + 1, 2):
        raise PreconditionError(f"mid preset needs {pairs} <= q <= {comb(r + 1, 2)}")
    low = Fraction(1, 2 * q) - Fraction(1, r * (r + 1))
    alphas = [low if i <= pairs else Fraction(1, 2 * q) for i in range(1, q + 1)]
    return ConstructionParams(r, q, tuple(alphas), "C1")


def preset_large_q(r: int, q: int) -> ConstructionParams:
    """q >= C(r+1,2); min degree (1/2 + r(r-1)/(4q)) n."""
    pairs = comb(r, 2)
    if q < comb(r + 1, 2):
        raise PreconditionError(f"large preset needs q >= {comb(r + 1, 2)}")
    alphas = [Fraction(0) if i <= pairs else Fraction(1, 2 * q) for i in range(1, q + 1)]
    return ConstructionParams(r, q, tuple(alphas), "C1")


def small_q_condition(r: int, q: int) -> bool:
    a, b = divmod(comb(r, 2), q)
    return b == 0 or r + b >= q


def preset_small_q(r: int, q: int) -> ConstructionParams:
    """q <= C(r,2) with b = 0 or r + b >= q; min degree r n/(r+1)."""
    if not 1 <= q <= comb(r, 2):
        raise PreconditionError(f"small preset needs 1 <= q <= {comb(r, 2)}")
    a, b = divmod(comb(r, 2), q)
    if not small_q_condition(r, q):
        raise PreconditionError(f"small preset needs b = 0 or r + b >= q (b={b}, r+b={r + b}, q={q})")
    den = q * r * (r + 1)
    alphas = [Fraction(r + b - q, den) if i <= b else Fraction(r + b, den) for i in range(1, q + 1)]
    return ConstructionParams(r, q, tuple(alphas), "C2")


PRESETS = {"mid": preset_mid_q, "large": preset_large_q, "small": preset_small_q}


def preset(name: str, r: int, q: int) -> ConstructionParams:
    try:
        return PRESETS[name](r, q)
    except KeyError:
        raise PreconditionError(f"unknown preset {name!r}") from None


def expected_color_counts(p: ConstructionParams, n: int) -> ColorProfile:
    """Per-color counts shared by every K_r-tiling of build(p, n)."""
    if not _admissible(p, n):
        raise PreconditionError(f"n={n} is not admissible for {p}")
    base = Fraction(n, p.r) * (1 - 2 * p.alpha)
    pairs = comb(p.r, 2)
    if p.variant == "C1":
        mult = [1 if i <= pairs else 0 for i in range(1, p.q + 1)]
    else:
        a, b = p.ab
        mult = [a + 1 if i <= b else a for i in range(1, p.q + 1)]
    counts = []
    for m, ai in zip(mult, p.alphas):
        e = m * base + ai * n * (p.r - 1)
        if e.denominator != 1 or e < 0:
            raise PreconditionError(f"count {e} is not a non-negative integer for n={n}")
        counts.append(int(e))
    return ColorProfile(counts)


def predicted_min_degree(p: ConstructionParams, n: int) -> int:
    """n minus the largest part size."""
    s = (1 - p.alpha) * n / p.r
    return int(n - max(s, p.alpha * n))


def threshold(r: int, q: int) -> Fraction | None:
    """delta_{r,q} when its exact value is known, else None."""
    if r < 3 or q < 2:
        raise PreconditionError("threshold needs r >= 3 and q >= 2")
    if r == 3:
        if q <= 6:
            return Fraction(3, 4)
        if q == 7:
            return Fraction(5, 7)
        if q == 8:
            return Fraction(11, 16)
        return Fraction(2, 3)
    pairs, upper = comb(r, 2), comb(r + 1, 2)
    if q < pairs:
        return Fraction(r, r + 1) if small_q_condition(r, q) else None
    if q <= upper:
        return Fraction(r, r + 1)
    if q == upper + 1:
        return Fraction(r * r + 1, r * r + r + 2)
    return Fraction(r - 1, r)


def threshold_regime(r: int, q: int) -> str:
    """Which lower-bound object witnesses threshold(r, q).

    ``small``/``mid``/``large`` name the preset whose minimum degree equals
    the threshold; ``existence`` marks the (r-1)/r rows, where the lower
    bound is the graph with no K_r-tiling at all; ``open`` has no value.
    """
    t = threshold(r, q)
    if t is None:
        return "open"
    pairs, upper = comb(r, 2), comb(r + 1, 2)
    if q < pairs:
        return "small"
    if q <= upper:
        return "mid"
    if t == Fraction(r - 1, r) and Fraction(1, 2) + Fraction(r * (r - 1), 4 * q) != t:
        return "existence"
    return "large"


def tightness_example(n: int, r: int) -> tuple[ColoredGraph, list[VertexSet]]:
    """Complete r-partite graph with parts n/r-1, n/r+1, n/r, ..., n/r.

    Minimum degree (r-1)n/r - 1 and no K_r-tiling.
    """
    from .graph import complete_multipartite

    if n % r or n < r:
        raise PreconditionError("need r | n and n >= r")
    s = n // r
    sizes = [s - 1, s + 1] + [s] * (r - 2)
    return complete_multipartite(sizes)


def fraction_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def parse_fraction(s: str) -> Fraction:
    return Fraction(s)
