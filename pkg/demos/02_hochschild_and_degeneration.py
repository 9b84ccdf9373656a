"""Hochschild homology, negative cyclic homology and the degeneration check.

Every number below comes from a finite truncation.  Each result says which
degrees are exact, meaning that no omitted word can reach them.
"""
from ainfty.exactlinalg import GF
from ainfty.fixtures import K, dual_numbers, quiver_a2
from ainfty.hochschild import degeneration_report, hh_homology, mod_p_probe, negative_cyclic

D = dual_numbers()
print("HH of the dual numbers (degree: dim, status)")
for deg, row in hh_homology(D, 6, window=(-5, 0)).items():
    print(f"  {deg:>3}: {row['dim']}  {row['status']}")

# Over k[u]/(u^n) the homology of the path algebra of A2 is free for every n,
# as it should be for a smooth and proper algebra.
print("\nA2 path algebra, flat for n = 1..4:",
      [row["flat"] for row in degeneration_report(quiver_a2(), 4, 6)["rows"]])

# The dual numbers are proper but not smooth, and flatness fails from n = 2 on.
r = negative_cyclic(D, 2, 5)
print("dual numbers, n = 2: flat =", r.flat, "obstructions in degrees", r.obstructions)

# The mod-p probe is experimental.  It compares Z/2-graded dimensions of
# H(C, b) and H(C, b + B) at two truncations.
probe = mod_p_probe(K(GF(3)))
for L, row in probe["truncations"].items():
    print(f"\nK over GF(3), L = {L}: b -> {row['b']}, b+B -> {row['b+B']}")
print("exact part stable:", probe["exact_part_stable"])
