"""Validating A-infinity structures and computing a minimal model.

Run with ``python3 demos/01_algebras_and_minimal_models.py``.
"""
from ainfty.ainfinity import check_morphism, check_relations, cohomology, minimal_model
from ainfty.fixtures import broken, contractible, dual_numbers, massey

# The dual numbers k[eps]/eps^2 form an ordinary associative algebra, so the
# relations hold at every arity we care to check.
D = dual_numbers()
print("dual numbers pass:", check_relations(D, 6).passed)

# A deliberately non-associative product is caught at arity 3 with a witness.
rep = check_relations(broken(), 6)
print("broken: passed =", rep.passed, "witness =", rep.witness)

# A contractible dg algebra has zero cohomology, so its minimal model is 0.
Z, _ = minimal_model(contractible())
print("minimal model of a contractible algebra has dimension", Z.dim)

# The Massey fixture is a dg algebra whose cohomology carries a nonzero triple
# product.  Homotopy transfer puts it into m3 of the minimal model.
A = massey()
H = cohomology(A)
M, f = minimal_model(A)
print("Massey: cohomology classes", list(zip(H.names, H.degrees)))
print("minimal model operations present:", sorted(M.ops))
print("m3 is nonzero:", not M.op(3).is_zero())
print("model relations:", check_relations(M, 5).passed, " f is a morphism:", check_morphism(f, 5).passed)
