import random

import pytest
from hypothesis import given, settings, strategies as st

from ainfty.fixtures import CORPUS, dual_numbers, exterior
from ainfty.ncgeometry import (DegenerateFormError, FormDegreeError, NCSpace, NotClosedError, RepSpace,
                               Substitution, add, cartan_identities, cyclic_cartan_identities,
                               darboux_normalize, euler_primitive, lie_Q_from_algebra,
                               lie_Q_transpose_defects, random_vector_field, rep_space_transfer,
                               scalar_product_check, symplectic_check)

X, DX, Y, DY = (0, 0), (0, 1), (1, 0), (1, 1)
PLANE = NCSpace((0, 0), ("x", "y"))
SPACES = [PLANE, NCSpace((1, 1), ("a", "b")), NCSpace((0, 1), ("x", "xi")), NCSpace((0, 0, 1))]
OMEGA0 = {(DX, DY): 1}


def test_cyclic_reduction():
    assert PLANE.cyclic({(X, Y): 1, (Y, X): -1}) == {}
    assert PLANE.cyclic({(X, X, Y): 1, (X, Y, X): 1}) == {PLANE.cyclic_reduce_word((X, X, Y))[1]: 2}
    odd = NCSpace((1, 1))
    assert odd.cyclic({(X, X): 1}) == {}
    assert odd.cyclic({(X, Y): 1, (Y, X): 1}) == {}


def test_d_cycl_of_word():
    f = {(X, Y): 1}
    df = PLANE.d_cycl(f)
    assert df == PLANE.cyclic({(DX, Y): 1, (X, DY): 1})
    assert PLANE.d_cycl(df) == {}
    with pytest.raises(FormDegreeError):
        PLANE.d_cycl(OMEGA0)


def test_phi():
    # x dy -> [x, y]
    assert PLANE.phi({(X, DY): 1}) == {(X, Y): 1, (Y, X): -1}
    # exact forms are killed up to cyclic rotation
    assert PLANE.cyclic(PLANE.phi(PLANE.d_cycl({(X, X, Y): 1}))) == {}
    with pytest.raises(FormDegreeError):
        PLANE.phi({(X, Y): 1})


def _inputs(sp, seed):
    rng = random.Random(seed)
    f = sp.random_series(rng, 1, 3, 3, letters=(0, 1))
    v = random_vector_field(sp, rng, rng.choice([0, 1, -1]))
    w = random_vector_field(sp, rng, rng.choice([0, 1]))
    return rng, f, v, w


@settings(max_examples=60)
@given(st.sampled_from(SPACES), st.integers(0, 10 ** 6))
def test_cartan_calculus(sp, seed):
    _, f, v, w = _inputs(sp, seed)
    assert all(cartan_identities(sp, v, w, f).values())
    assert all(cyclic_cartan_identities(sp, v, w, f).values())


@settings(max_examples=60)
@given(st.sampled_from(SPACES), st.integers(0, 10 ** 6))
def test_d_cycl_and_phi(sp, seed):
    rng = random.Random(seed)
    g = sp.random_series(rng, 1, 4, 3)
    a = sp.cyclic(sp.random_series(rng, 1, 4, 3, letters=(0, 1)))
    a = {w: c for w, c in a.items() if sp.form_degree(w) == 1}
    assert sp.d_cycl(sp.d_cycl(g)) == {}
    assert sp.cyclic(sp.phi(sp.d_cycl(g))) == {}
    assert sp.d_cycl(sp.cyclic(sp.phi(a))) == {}


@pytest.mark.parametrize("name", [n for n in sorted(CORPUS) if n != "broken"])
def test_lie_Q(name):
    A = CORPUS[name]()
    Q = lie_Q_from_algebra(A)
    assert not Q.bracket(Q).comps
    assert lie_Q_transpose_defects(A, 3) == []


def test_lie_Q_of_broken_does_not_square_to_zero():
    Q = lie_Q_from_algebra(CORPUS["broken"]())
    assert Q.bracket(Q).comps


def test_symplectic_check():
    assert symplectic_check(PLANE, OMEGA0) == {"closed": True, "constant_part_nondegenerate": True,
                                               "degree": 2, "homogeneous": True}
    assert not symplectic_check(PLANE, add(PLANE.field, OMEGA0, {(X, DX, DY): 1}))["closed"]
    assert not symplectic_check(PLANE, {(X, DX, DY): 1})["constant_part_nondegenerate"]
    with pytest.raises(FormDegreeError):
        symplectic_check(PLANE, {(X, DY): 1})


def test_euler_primitive_is_a_primitive():
    rng = random.Random(5)
    for _ in range(10):
        g = PLANE.random_series(rng, 2, 4, 3, letters=(0, 1))
        g = {w: c for w, c in g.items() if PLANE.form_degree(w) == 1 and len(w) == 3}
        eta = PLANE.d_cycl(PLANE.cyclic(g))
        if eta:
            assert PLANE.d_cycl(euler_primitive(PLANE, eta)) == eta


def test_darboux_constant_form_is_fixed():
    r = darboux_normalize(PLANE, OMEGA0)
    assert r.steps == 0 and r.verified and r.inverse_verified and r.substitution.is_identity()


def test_darboux_single_step():
    omega = add(PLANE.field, OMEGA0, PLANE.d_cycl({(X, Y, DX): 1, (Y, Y, DX): 2}))
    # through order 3 one correction suffices; later orders pick up what x -> x - v creates
    r = darboux_normalize(PLANE, omega, 3)
    assert r.steps == 1 and r.verified and r.inverse_verified
    r6 = darboux_normalize(PLANE, omega, 6)
    assert r6.verified and r6.inverse_verified
    assert PLANE.truncate(PLANE.cyclic(r6.substitution.pullback(omega)), 6) == PLANE.cyclic(OMEGA0)


@pytest.mark.parametrize("seed", range(3))
def test_darboux_round_trip(seed):
    rng = random.Random(seed)
    higher = {i: PLANE.random_series(rng, 2, 3, 2) for i in range(2)}
    omega = PLANE.cyclic(Substitution(PLANE, higher, 6).pullback(OMEGA0))
    r = darboux_normalize(PLANE, omega, 6)
    assert r.verified and r.inverse_verified


def test_darboux_errors():
    with pytest.raises(DegenerateFormError):
        darboux_normalize(PLANE, {(X, DX, DY): 1})
    with pytest.raises(NotClosedError):
        darboux_normalize(PLANE, add(PLANE.field, OMEGA0, {(X, DX, DY): 1}))


def test_scalar_products():
    for A in (dual_numbers(paired=True), exterior(paired=True)):
        assert scalar_product_check(A).passed
    D = dual_numbers()
    e, eps = D.A.index("e"), D.A.index("eps")
    bad = scalar_product_check(D, {(e, e): 1, (eps, eps): 1}, 0)
    assert not bad.passed and bad.witnesses


def test_rep_space_trace():
    R = RepSpace(PLANE, 2)
    assert R.to_json(R.trace({(X, Y): 1})) == [[["x^11", "y^11"], "1"], [["x^12", "y^21"], "1"],
                                                [["x^21", "y^12"], "1"], [["x^22", "y^22"], "1"]]
    assert R.trace(PLANE.commutator({(X,): 1}, {(Y,): 1})) == {}
    assert len(RepSpace(PLANE, 1).trace({(X, Y): 1})) == 1


@pytest.mark.parametrize("n", [1, 2])
def test_rep_space_transfer_of_constant_form(n):
    r = rep_space_transfer(PLANE, OMEGA0, n)
    assert r.closed and r.nondegenerate and r.form_degree == 2 and r.terms == n * n


@settings(max_examples=30)
@given(st.sampled_from(SPACES), st.integers(0, 10 ** 6), st.sampled_from([1, 2]))
def test_rep_space_properties(sp, seed, n):
    rng = random.Random(seed)
    R = RepSpace(sp, n)
    f = sp.random_series(rng, 1, 3, 2, letters=(0, 1))
    g = sp.random_series(rng, 1, 3, 2, letters=(0, 1))
    assert R.trace(sp.commutator(f, g)) == {}
    assert R.d(R.trace(f)) == R.trace(sp.d(f))
    P, Q = R.matrix(f), R.matrix(g)
    assert R.matmul(P, Q) == R.matrix(sp.mul(f, g))
