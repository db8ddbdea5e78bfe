"""Executable combinatorial bundle theory: oriented matroids, MacPhersonians,
matroid bundles and their characteristic classes, checked by exact enumeration.
"""

__version__ = "0.1.0"

from .om import (AxiomReport, Chirotope, DomainError, InvalidOrientedMatroid, OrientedMatroid,
                 SignVector, compose, coordinate_om, rank_zero_om, verify_covector_axioms)
from .poset import (Poset, PosetMap, SimplicialComplex, barycentric, collapse_certificate,
                    connected_components, fiber_sub, lower_interval, order_complex,
                    upper_interval)
from .grassmann import (RationalConfiguration, enumerate_rank_k, gamma, is_strong_image,
                        macpherson, mu_point, upper_semicontinuity_sample, weak_maps_to)
from .homology import (ChainComplexGF2, Cochain, betti_gf2, cohomology_basis, cup_i,
                       cup_product, integer_homology, steenrod_square)
from .bundles import (BundleError, MatroidBundle, babson_check, constant_bundle, disk_bundle,
                      fiber_audit, make_bundle, pullback, sphere_bundle, whitney_sum)
from .charclass import (euler_class, orientation_lift, stiefel_whitney, sw_classes,
                        thom_class, whitney_sum_check)
from .vecfields import (VectorFieldLift, obstruction_report, quotient_bundle, search_lift,
                        stiefel_member)
