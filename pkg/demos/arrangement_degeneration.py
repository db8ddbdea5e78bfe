"""A line arrangement degenerating, and the sphere bundle it defines.

Three forms a = x, b = y, c = y - x cut the circle into six arcs.  Sending
b to the zero form glues two of those arcs together.  The two oriented
matroids form a rank-2 matroid bundle over the two-element chain 0 < 1,
whose total space is a sphere bundle in the combinatorial sense but not a
circle bundle: it contains a 3-simplex over a 1-dimensional base.

Run:  python3 demos/arrangement_degeneration.py
"""

from matgrass.bundles import babson_check, fiber_audit, make_bundle, sphere_bundle
from matgrass.grassmann import RationalConfiguration, mu_point, weak_maps_to
from matgrass.om import SignVector
from matgrass.poset import chain_poset, order_complex

plane = [(1, 0), (0, 1)]
m1 = mu_point(RationalConfiguration("abc", [(1, 0), (0, 1), (-1, 1)]), plane)
m0 = mu_point(RationalConfiguration("abc", [(1, 0), (0, 0), (-1, 1)]), plane)

print("M1 covectors:", " ".join(str(x) for x in m1.sorted_covectors()))
print("M0 covectors:", " ".join(str(x) for x in m0.sorted_covectors()))
print("loops of M0:", m0.loops())

# The degeneration is a weak map M1 -> M0 (every covector of M0 sits below one
# of M1) and not the other way round.
print("M1 weak-maps to M0:", weak_maps_to(m1, m0))
print("M0 weak-maps to M1:", weak_maps_to(m0, m1))

xi = make_bundle(chain_poset(["0", "1"]), {"1": m1, "0": m0})
S = sphere_bundle(xi)
K = order_complex(S.poset)
print("\nsphere bundle total space: %d items, order complex f-vector %s" % (len(S.items), K.f_vector()))

# The 3-simplex: two covectors over 0 and two over 1, forming one chain.
sv = SignVector.parse
chain = [("0", sv("00+")), ("0", sv("-0+")), ("1", sv("-0+")), ("1", sv("-++"))]
ids = tuple(sorted(K.vertices.index(v) for v in chain))
print("contains", [f"({s}, {x})" for s, x in chain], ":", ids in K)

# The fibers are still spheres, and Babson's interval conditions hold.
for rep in fiber_audit(S):
    print(f"fiber over {rep.item}: reduced mod 2 Betti {rep.betti}, expected {rep.expected}")
print("Babson's criterion on the projection:", babson_check(S.projection).summary)
