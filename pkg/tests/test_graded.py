import pytest
from hypothesis import given, strategies as st

from ainfty.fixtures import contractible, dual_numbers
from ainfty.graded import (DegreeError, GradedSpace, MultilinearMap, SpaceMismatchError, compose_at,
                           koszul_sign, permutation_sign)


def test_koszul_examples():
    assert koszul_sign([1], [1]) == -1
    assert koszul_sign([0], [1, 3, 5]) == 1
    assert koszul_sign([1, 1], [1]) == 1


def test_shift():
    V = GradedSpace(("e",), (0,))
    assert V.shift(1).degrees == (-1,)
    assert V.shift(0) == V
    assert GradedSpace(("xi",), (1,)).shift(1).degrees == (0,)
    W = GradedSpace(("a", "b"), (2, -1))
    assert W.shift(3).shift(-3) == W


def test_z2_degrees_normalised():
    V = GradedSpace(("a", "b"), (0, 1), "Z2")
    assert V.shift(1).degrees == (1, 0)


def test_degree_rule_enforced():
    V = GradedSpace(("a", "b"), (0, 1))
    with pytest.raises(DegreeError):
        MultilinearMap(V, V, 1, 0, {(0,): {1: 1}})


def test_compose_with_identity():
    A = dual_numbers()
    b2 = A.op(2)
    one = MultilinearMap.identity(A.W)
    for r in range(2):
        assert compose_at(b2, r, one) == b2


def test_contractible_differential_squares_to_zero():
    A = contractible()
    assert compose_at(A.op(1), 0, A.op(1)).is_zero()


def test_associativity_of_dual_numbers():
    A = dual_numbers()
    b2 = A.op(2)
    assert (compose_at(b2, 0, b2) + compose_at(b2, 1, b2)).is_zero()


def test_compose_space_mismatch():
    V = GradedSpace(("a",), (0,))
    W = GradedSpace(("b",), (0,))
    with pytest.raises(SpaceMismatchError):
        compose_at(MultilinearMap.identity(V), 0, MultilinearMap.identity(W))


@st.composite
def graded_map(draw, V, arity, degree):
    ent = {}
    for key in __import__("itertools").product(range(V.dim), repeat=arity):
        want = V.word_degree(key) + degree
        outs = [o for o in range(V.dim) if V.degrees[o] == want]
        if outs and draw(st.booleans()):
            ent[key] = {draw(st.sampled_from(outs)): draw(st.integers(-2, 2))}
    return MultilinearMap(V, V, arity, degree, ent)


V3 = GradedSpace(("p", "q", "r"), (0, 1, 1))


@given(graded_map(V3, 2, 1), graded_map(V3, 1, 1), graded_map(V3, 1, 0))
def test_compose_is_degree_correct_and_interchange(outer, f, g):
    # inserting f at slot 0 and g at slot 1 in either order differs by the mechanical sign
    one = compose_at(compose_at(outer, 0, f), 1, g)
    two = compose_at(compose_at(outer, 1, g), 0, f)
    assert one == two            # g has even degree, so no sign
    assert one.degree == outer.degree + f.degree + g.degree


@given(graded_map(V3, 2, 0), graded_map(V3, 1, 1), graded_map(V3, 1, 1))
def test_interchange_of_odd_operators(outer, f, g):
    one = compose_at(compose_at(outer, 0, f), 1, g)
    two = compose_at(compose_at(outer, 1, g), 0, f)
    assert one == two.scale(-1)


def test_permutation_sign_swap_of_odds():
    assert permutation_sign([1, 1], [1, 0]) == -1
    assert permutation_sign([0, 1], [1, 0]) == 1
