"""Modules over the dual numbers, the derived tensor product, and the Yoneda morphism."""
from ainfty.ainfinity import check_morphism, check_relations, induced_map_report
from ainfty.centr import centr, left_action_morphism, yoneda
from ainfty.fixtures import dual_numbers
from ainfty.modules import character_module, check_bimodule, derived_tensor, diagonal_bimodule, sharp_matches_chains

D = dual_numbers()

# k as a module where eps acts by zero, on both sides.
k_right = character_module(D, {"e": 1}, "right")
k_left = character_module(D, {"e": 1}, "left")
print("k is a right module:", check_bimodule(k_right, 4).passed)

# The bar construction computes Tor^D(k, k), which is one-dimensional in every degree.
sl = derived_tensor(k_right, k_left, 6)
print("k (x)^L_D k, degrees -5..0:", sl.homology_dims(range(-5, 1)))

# The diagonal bimodule gives back the Hochschild chain complex, matrix for matrix.
print("diagonal bimodule valid:", check_bimodule(diagonal_bimodule(D), 4).passed,
      " E-sharp equals chains:", sharp_matches_chains(D, 5))

# Centr(f_A) is again an A-infinity algebra; the Yoneda morphism maps D^op into it
# and is an isomorphism on H^0.
C = centr(left_action_morphism(D), 2)
print("Centr(f_D) at arity <= 3: dim", C.dim, "relations", check_relations(C, 3).passed)
Y = yoneda(D, 3)
print("Yoneda is a morphism:", check_morphism(Y, 3).passed)
print("on H^0:", induced_map_report(Y, (0, 0))["0"])
