"""One invocation per CLI command over the fixture corpus (shared by the CLI and determinism tests)."""
from pathlib import Path

FIX = Path(__file__).resolve().parent.parent / "fixtures"


def f(name: str) -> str:
    return str(FIX / f"{name}.json")


SUITE = [
    ["validate", f("massey"), "-L", "4"],
    ["validate", f("broken"), "-L", "4"],
    ["cohomology", f("contractible")],
    ["minimal-model", f("massey"), "-L", "4"],
    ["adjoin-unit", f("contractible")],
    ["opposite", f("dual_numbers")],
    ["morphism-check", f("morphism_dual_numbers_opposite")],
    ["module-check", f("module_dual_numbers_character")],
    ["derived-tensor", f("module_dual_numbers_character"), "-L", "5", "--window=-4:0"],
    ["hom-complex", f("K")],
    ["sharp", f("dual_numbers"), "-L", "4"],
    ["centr", f("K")],
    ["yoneda", f("dual_numbers")],
    ["hochschild", f("dual_numbers"), "-L", "5", "--window=-4:0"],
    ["hochschild", f("dual_numbers"), "--kind", "cochains", "-L", "3"],
    ["cyclic", f("quiver_a2"), "--u-order", "2", "-L", "4"],
    ["degeneration", f("quiver_a2"), "--u-order", "3", "-L", "4"],
    ["acyclicity", f("K"), "-L", "4"],
    ["modp-probe", f("K"), "--p", "3"],
    ["forms", "reduce", f("form_commutator")],
    ["forms", "dcycl", f("form_xy")],
    ["forms", "phi", f("form_one_form")],
    ["forms", "cartan", f("form_xy"), "--trials", "5"],
    ["darboux", f("form_omega_bent")],
    ["scalar-product", f("dual_numbers_frobenius")],
    ["repspace", f("form_omega_constant"), "--n", "2"],
    ["subcoalgebra", f("coalgebra_quiver_a2_path")],
]
