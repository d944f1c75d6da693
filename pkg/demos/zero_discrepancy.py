"""Build the mid-q construction for r=3, q=6 and show that every triangle
tiling uses each color equally often, then check the threshold it witnesses."""

from tilescope import constructions as cons
from tilescope.graph import discrepancy
from tilescope.tilings import enumerate_tilings

p = cons.preset("mid", 3, 6)
n = cons.minimal_admissible_n(p)
cg = cons.build(p, n)
print(f"n={n}, parts {[len(x) for x in cg.parts]}, min degree {cg.min_degree} "
      f"(= {cons.fraction_str(cons.threshold(3, 6))} n)")

profiles = {tuple(t.profile(cg.graph)) for t in enumerate_tilings(cg.graph, 3)}
print("distinct tiling profiles:", profiles)
print("closed form:", tuple(cons.expected_color_counts(p, n)))
print("discrepancies:", {discrepancy(pr) for pr in profiles})
