"""Exact computations with A∞-algebras, Hochschild/cyclic complexes and
non-commutative forms over QQ and GF(p)."""
from .exactlinalg import GF, QQ, Field, SparseMatrix
from .graded import GradedSpace, MultilinearMap
from .ainfinity import (AInftyAlgebra, AInftyMorphism, adjoin_unit, check_morphism, check_relations,
                        cohomology, compose_morphisms, minimal_model, opposite, weak_unit_check)

__all__ = ["GF", "QQ", "Field", "SparseMatrix", "GradedSpace", "MultilinearMap", "AInftyAlgebra",
           "AInftyMorphism", "adjoin_unit", "check_morphism", "check_relations", "cohomology",
           "compose_morphisms", "minimal_model", "opposite", "weak_unit_check"]
