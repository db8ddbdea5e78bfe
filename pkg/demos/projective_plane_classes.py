"""Characteristic classes of the tautological line over MacP(1,3).

MacP(1,3) is the poset of all rank-1 oriented matroids on three elements.  Its
order complex has the homology of the real projective plane, and the identity
assignment is a line bundle over it playing the part of the canonical line.
We compute its Stiefel-Whitney classes from Steenrod squares of the Thom
class, check orientability three ways, and take the sum with itself.

Run:  python3 demos/projective_plane_classes.py
"""

from matgrass.bundles import whitney_sum
from matgrass.charclass import (euler_class, orientation_lift, sw_classes, thom_class,
                                whitney_sum_check)
from matgrass.fixtures import identity_bundle
from matgrass.homology import betti_gf2, cup_product, integer_homology
from matgrass.poset import order_complex

for n in (2, 3):
    xi = identity_bundle(1, n)
    K = order_complex(xi.base)
    print(f"MacP(1,{n}): {len(xi.base)} items, mod 2 Betti {betti_gf2(K)}, "
          f"integer homology {integer_homology(K)}")

gamma = identity_bundle(1, 3)
T = thom_class(gamma)
w = sw_classes(T)
print("\nw(gamma) =", w.summary())
w1_squared = cup_product(w[1], w[1])
print("w1^2 nonzero:", any(w.base.cohomology(2).coordinates(w1_squared.bits)))

# Three independent views of orientability agree.
print("w1 = 0:", w.is_zero(1))
print("integral Thom class:", T.UZ is not None, "-", T.uz_note)
print("orientation lift:", orientation_lift(gamma) is not None)

# gamma + gamma: w = (1 + a)^2 = 1 + a^2, orientable, with nonzero Euler class
two = whitney_sum(gamma, gamma, relabel=True)
T2 = thom_class(two)
print("\nw(gamma + gamma) =", sw_classes(T2).summary())
print("Whitney formula holds:", whitney_sum_check(gamma, gamma).ok)
e = euler_class(T2)
print("Euler class of gamma + gamma is zero:", e.is_zero)
