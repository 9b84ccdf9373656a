import random

import pytest

from ainfty.ainfinity import (AInftyAlgebra, AInftyMorphism, UnsupportedFieldError, adjoin_unit, b_to_m, change_basis,
                              check_morphism, check_relations, check_strict_unit, cohomology, compose_morphisms,
                              find_strict_unit, induced_map_report, m_to_b, minimal_model, opposite, unital_rebase,
                              weak_unit_check)
from ainfty.exactlinalg import GF
from ainfty.fixtures import (CORPUS, K, broken, contractible, dual_numbers, exterior, massey, quiver_a2)

from oracles import perturb, stasheff_defects


def test_relations_examples():
    assert check_relations(dual_numbers()).passed
    assert check_relations(quiver_a2()).passed
    rep = check_relations(broken())
    assert not rep.passed and rep.first_failing_arity == 3 and rep.witness == ("a", "a", "a")


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_relations_agree_with_stasheff(name):
    A = CORPUS[name]()
    assert check_relations(A, 4).passed == (not stasheff_defects(A, 4))


def test_perturbations_agree_with_stasheff():
    rng = random.Random(3)
    for k in range(15):
        A = perturb(CORPUS[sorted(CORPUS)[k % len(CORPUS)]](), rng)
        assert check_relations(A, 4).passed == (not stasheff_defects(A, 4))


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_decalage_round_trip(name):
    A = CORPUS[name]()
    for n, b in A.ops.items():
        assert m_to_b(b_to_m(b, A.A), A.W) == b


def test_morphism_examples():
    D = dual_numbers()
    assert check_morphism(AInftyMorphism.identity(D)).passed
    zero = AInftyMorphism(D, D, {})
    assert check_morphism(zero).passed
    to_k = AInftyMorphism.from_linear(D, K(), {"e": {"1": 1}})
    assert check_morphism(to_k).passed
    bad = AInftyMorphism.from_linear(D, D, {"e": {"e": 2}, "eps": {"eps": 1}})
    rep = check_morphism(bad)
    assert not rep.passed and rep.witness is not None


def test_opposite():
    D = dual_numbers()
    Dop = opposite(D)
    assert check_relations(Dop).passed
    assert Dop.m(2)(1, 0) == {1: -1}           # m2op(eps, e) = -m2(e, eps)
    for make in CORPUS.values():
        A = make()
        assert opposite(opposite(A)).ops == A.ops
    iso = AInftyMorphism.from_linear(D, Dop, {"e": {"e": -1}, "eps": {"eps": -1}})
    assert check_morphism(iso).passed


def test_adjoin_unit():
    A = adjoin_unit(AInftyAlgebra.from_tables([], {}))
    assert A.dim == 1 and A.m(2)(0, 0) == {0: 1}
    C = adjoin_unit(contractible())
    assert C.dim == 3 and C.m(1)(0) == {1: 1} and check_relations(C).passed and check_strict_unit(C)
    D1 = adjoin_unit(dual_numbers())
    assert D1.dim == 3 and check_relations(D1).passed


def test_cohomology_examples():
    assert all(v == 0 for v in cohomology(contractible(), (-1, 2)).dims((-1, 2)).values())
    assert cohomology(dual_numbers()).dims() == {0: 2}
    assert cohomology(exterior()).dims() == {0: 1, 1: 1}
    with pytest.raises(ValueError):
        cohomology(dual_numbers(), (2, 1))


def test_weak_units():
    assert weak_unit_check(dual_numbers()).unit_names == {"e": "1"}
    zero_mult = AInftyAlgebra.from_tables([("z", 0)], {})
    assert not weak_unit_check(zero_mult).is_weakly_unital_on_window
    C1 = adjoin_unit(contractible())
    assert weak_unit_check(C1).unit_names == {"1": "1"}
    qa = weak_unit_check(quiver_a2())
    assert qa.is_weakly_unital_on_window and qa.unit_names == {"e1": "1", "e2": "1"}


def test_minimal_model_examples():
    D = dual_numbers()
    M, f = minimal_model(D)
    assert M.ops == D.ops and f.taylor == AInftyMorphism.identity(D).taylor
    Z, g = minimal_model(contractible())
    assert Z.dim == 0
    Mm, h = minimal_model(massey())
    assert 1 not in Mm.ops and not Mm.op(3).is_zero()
    assert check_relations(Mm).passed and check_morphism(h).passed
    assert not stasheff_defects(Mm, 4)
    assert all(v["iso"] for v in induced_map_report(h, (0, 3)).values())
    # stable under a second application
    M2, _ = minimal_model(Mm)
    assert M2.ops == Mm.ops


def test_minimal_model_needs_char_zero():
    with pytest.raises(UnsupportedFieldError):
        minimal_model(massey().with_field(GF(5)))


def test_compose_morphisms():
    D = dual_numbers()
    Mm, h = minimal_model(massey())
    ident = AInftyMorphism.identity(massey())
    assert compose_morphisms(ident, h).taylor == h.taylor
    to_k = AInftyMorphism.from_linear(D, K(), {"e": {"1": 1}})
    g = compose_morphisms(to_k, AInftyMorphism.identity(D))
    assert g.taylor == to_k.taylor
    assert check_morphism(compose_morphisms(h, AInftyMorphism.identity(Mm))).passed


def test_unit_search_and_rebase():
    QA = quiver_a2()
    u = find_strict_unit(QA)
    assert u == {0: 1, 1: 1}
    R = unital_rebase(QA)
    assert R.strict_unit is not None and check_strict_unit(R) and check_relations(R).passed
    assert find_strict_unit(contractible()) is None and unital_rebase(massey()) is None
    D = dual_numbers()
    assert unital_rebase(D) is D


def test_change_basis_is_an_isomorphism():
    D = dual_numbers()
    B = change_basis(D, [{0: 1, 1: 1}, {1: 2}], ["a", "b"])
    assert check_relations(B).passed
    assert cohomology(B).dims() == {0: 2}
