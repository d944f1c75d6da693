"""Run the few-color-set argument on two template-free graphs and print the
case it took, the set U and its colors."""

from itertools import combinations

from tilescope import constructions as cons
from tilescope.graph import build_graph, min_degree
from tilescope.structure import find_few_color_set

# blow-up of K4 with its three perfect matchings in colors 1, 2, 3
s = 9
col = {(0, 1): 1, (2, 3): 1, (0, 2): 2, (1, 3): 2, (0, 3): 3, (1, 2): 3}
g = build_graph(4 * s, 3, [(u, v, col[(u // s, v // s)])
                           for u, v in combinations(range(4 * s), 2) if u // s != v // s])

for name, h in [("K4 blow-up", g), ("mid(3,6) at n=36", cons.build(cons.preset("mid", 3, 6), 36).graph)]:
    res = find_few_color_set(h, 3)
    print(f"{name}: delta={min_degree(h)}, case {res.case}, |U|={len(res.U)}, colors {sorted(res.colors)}")
    for step in res.steps:
        print("   ", step)
