from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from ainfty.exactlinalg import (GF, QQ, DimensionMismatchError, FieldMismatchError, NotAModuleError,
                                SparseMatrix, nilpotent_module_structure, rank, rank_kernel, solve)


def test_empty_matrix():
    assert rank_kernel(SparseMatrix(0, 0, {}, QQ)) == (0, [])


def test_identity_full_rank():
    assert rank_kernel(SparseMatrix.identity(2)) == (2, [])


def test_rank_one_kernel():
    r, ker = rank_kernel(SparseMatrix.from_dense([[1, 2], [2, 4]]))
    assert r == 1
    assert ker == [{0: Fraction(-2), 1: Fraction(1)}]


def test_solve_examples():
    assert solve(SparseMatrix.identity(2), {0: 3, 1: 5}) == {0: 3, 1: 5}
    assert solve(SparseMatrix.from_dense([[1, 1]]), {0: 2}) == {0: 2}
    assert solve(SparseMatrix.from_dense([[1], [1]]), {0: 1, 1: 2}) is None


def test_solve_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        solve(SparseMatrix.identity(2), {5: 1})


def test_field_mismatch():
    with pytest.raises(FieldMismatchError):
        SparseMatrix.identity(2, QQ) @ SparseMatrix.identity(2, GF(5))


def test_gf_arithmetic_is_canonical():
    F = GF(7)
    assert F("-1") == 6
    assert F(Fraction(1, 3)) == 5
    assert F.to_str(F(-3)) == "4"
    with pytest.raises(ValueError):
        GF(9)


@pytest.mark.parametrize("u,n,expect", [
    (SparseMatrix.zero(2, 2), 1, (2, 2, {1: 2}, True)),
    (SparseMatrix.from_dense([[0, 0], [1, 0]]), 2, (2, 1, {2: 1}, True)),
    (SparseMatrix.zero(1, 1), 2, (1, 1, {1: 1}, False)),
])
def test_nilpotent_examples(u, n, expect):
    r = nilpotent_module_structure(u, n)
    assert (r.dim, r.num_blocks, r.block_multiplicities, r.free_over_trunc) == expect


def test_not_a_module():
    with pytest.raises(NotAModuleError):
        nilpotent_module_structure(SparseMatrix.from_dense([[0, 0], [1, 0]]), 1)


small = st.integers(-3, 3)


@st.composite
def matrices(draw, p=None):
    r, c = draw(st.integers(0, 6)), draw(st.integers(0, 6))
    dense = [[draw(small) for _ in range(c)] for _ in range(r)]
    return dense, r, c


@given(matrices())
def test_rank_matches_sympy_over_q(data):
    dense, r, c = data
    M = SparseMatrix.from_dense(dense, QQ, ncols=c)
    expected = sympy.Matrix(r, c, [x for row in dense for x in row]).rank() if r and c else 0
    rk, ker = rank_kernel(M)
    assert rk == expected
    assert rk + len(ker) == c
    assert rank(M.transpose()) == rk
    for v in ker:
        assert not M.apply(v)


@given(matrices())
def test_rank_nullity_over_f7(data):
    dense, r, c = data
    F = GF(7)
    M = SparseMatrix.from_dense(dense, F, ncols=c)
    rk, ker = rank_kernel(M)
    assert rk + len(ker) == c
    assert rank(M.transpose()) == rk
    for v in ker:
        assert not M.apply(v)


@given(matrices(), st.lists(small, min_size=6, max_size=6))
def test_solve_reproduces_rhs(data, xs):
    dense, r, c = data
    M = SparseMatrix.from_dense(dense, QQ, ncols=c)
    x0 = {j: Fraction(xs[j]) for j in range(c) if xs[j]}
    rhs = M.apply(x0)
    x = solve(M, rhs)
    assert x is not None and M.apply(x) == rhs


@given(st.lists(st.integers(1, 4), min_size=0, max_size=4), st.integers(1, 4))
def test_block_profile_sums(blocks, n):
    blocks = [min(b, n) for b in blocks]
    dim = sum(blocks)
    ent, off = {}, 0
    for b in blocks:
        for k in range(b - 1):
            ent[(off + k + 1, off + k)] = 1
        off += b
    r = nilpotent_module_structure(SparseMatrix(dim, dim, ent, QQ), n)
    assert sum(s * m for s, m in r.block_multiplicities.items()) == dim
    assert r.free_over_trunc == all(b == n for b in blocks)
