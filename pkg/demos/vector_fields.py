"""Nonvanishing vector fields and what they force.

A field on a rank-k matroid bundle is an extra element added fiberwise,
independent everywhere and compatible with the weak maps.  Contracting it
leaves a rank k-1 quotient bundle, and the top class w_k must vanish.  Only
this characteristic-class shadow is checked; the splitting itself is not.

Run:  python3 demos/vector_fields.py
"""

from matgrass.charclass import stiefel_whitney
from matgrass.fixtures import LIFTS, bundle, lift
from matgrass.vecfields import obstruction_report, quotient_bundle, search_lift

for name in LIFTS:
    nu = lift(name)
    Q = quotient_bundle(nu)
    rep = obstruction_report(nu.bundle, nu)
    checks = ", ".join(f"{k}: {v}" for k, v in rep.checks.items())
    print(f"{name}: rank {rep.k}, {rep.l} field(s), quotient rank {Q.rank}; {checks}")

# The Moebius line has w1 != 0, so it cannot carry a nowhere-zero field.
# The exhaustive search over all extensions agrees.
mobius = bundle("mobius")
print("\nmobius: w =", stiefel_whitney(mobius).summary())
print("field found by exhaustive search:", search_lift(mobius, ["f"]) is not None)

# The sum of two Moebius lines is orientable and does carry one.
nu = search_lift(bundle("mobius2"), ["f"])
print("mobius + mobius: field found:", nu is not None,
      "- report ok:", obstruction_report(nu.bundle, nu).ok)
