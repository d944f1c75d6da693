"""A wheel whose rim is colored 1,2,1,2 is a template.  Blowing it up gives
two triangle tilings with different color counts; several disjoint copies
combine into a tiling whose discrepancy grows with the number of copies."""

from itertools import combinations

from tilescope.graph import build_graph, discrepancy
from tilescope.templates import Template, blowup, boost_discrepancy, canonical_tilings

wheel = build_graph(5, 3, [(0, i, 1) for i in range(1, 5)] +
                    [(1, 2, 1), (2, 3, 2), (3, 4, 1), (1, 4, 2)])
b = blowup(wheel, Template((0,), (1, 2, 3, 4)))
t1, t2 = canonical_tilings(b, 3)
print("T1", t1.blocks, list(t1.profile(b.graph)))
print("T2", t2.blocks, list(t2.profile(b.graph)))

for copies in (1, 2, 4):
    n0 = b.graph.n
    edges = [(u + i * n0, v + i * n0, c) for i in range(copies) for u, v, c in b.graph.edges()]
    edges += [(u, v, 3) for u, v in combinations(range(copies * n0), 2) if u // n0 != v // n0]
    g = build_graph(copies * n0, 3, edges)
    res = boost_discrepancy(g, 3)
    print(f"{copies} copies: margin {res.margin} in color {res.color}, "
          f"discrepancy {discrepancy(res.high.profile(g))} vs {discrepancy(res.low.profile(g))}")
