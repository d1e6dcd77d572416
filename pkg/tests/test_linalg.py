import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import fm_feasible, gauss_rank
from symcone import linalg
from symcone.errors import DimensionMismatchError, SingularMatrixError
from symcone.linalg import Subspace

F = Fraction
small = st.integers(-4, 4)


def matrices(max_rows=5, max_cols=5):
    return st.integers(1, max_cols).flatmap(
        lambda c: st.lists(st.lists(small, min_size=c, max_size=c), min_size=1, max_size=max_rows)
        .map(lambda rows: (rows, c)))


def test_nullspace_examples():
    K = linalg.nullspace([[1, 1]])
    assert K.dim == 1 and K.basis == ((1, -1),)
    assert linalg.nullspace(linalg.identity(3)).dim == 0
    assert linalg.nullspace([[1, 2], [2, 4]]).dim == 1


def test_rank_examples():
    assert linalg.rank(linalg.identity(4)) == 4
    assert linalg.rank([[0, 0], [0, 0]]) == 0


def test_subspace_examples():
    assert Subspace.from_vectors([[1, 1]], 2).contains_vector([1, 1])
    S = Subspace.from_vectors([[1, 0], [0, 1]], 2)
    assert S.contains(Subspace.zero(2))
    assert S == Subspace.from_vectors([[1, 1], [1, -1]], 2)
    with pytest.raises(DimensionMismatchError):
        S.contains_vector([1, 2, 3])
    with pytest.raises(DimensionMismatchError):
        S.contains(Subspace.zero(3))


def test_subspace_coordinates_and_sum():
    S = Subspace.from_vectors([[1, 2, 0]], 3)
    T = Subspace.from_vectors([[0, 0, 1]], 3)
    U = S.sum(T)
    assert U.dim == 2
    assert U.coordinates([2, 4, 5]) == [2, 5]
    assert U.coordinates([1, 0, 0]) is None


def test_lp_examples():
    zero1 = Subspace.zero(1)
    assert linalg.lp_feasible([[1], [-1]], zero1) == [F(1, 2), F(1, 2)]
    assert linalg.lp_feasible([[2]], zero1) is None
    cert = linalg.lp_feasible([[1, 0], [0, 1]], Subspace.from_vectors([[1, 1]], 2))
    assert cert == [F(1, 2), F(1, 2)]
    assert linalg.lp_feasible([], zero1) is None


def test_determinant_and_inverse():
    A = [[2, 1, 0], [1, 3, 1], [0, 1, 4]]
    assert linalg.determinant(A) == 18
    Ai = linalg.inverse(A)
    assert linalg.matmul(A, Ai) == linalg.identity(3)
    with pytest.raises(SingularMatrixError):
        linalg.inverse([[1, 2], [2, 4]])


@given(matrices())
def test_nullspace_vectors_are_annihilated(data):
    A, c = data
    K = linalg.nullspace(A, c)
    for v in K.basis:
        for row in A:
            assert sum(F(a) * x for a, x in zip(row, v)) == 0
    assert linalg.rank(A, c) + K.dim == c


@given(matrices(6, 6))
def test_rank_matches_plain_gauss(data):
    A, _ = data
    assert linalg.rank(A) == gauss_rank(A)


@given(matrices())
def test_rref_is_canonical(data):
    A, c = data
    R, piv = linalg.rref(A, c)
    assert list(piv) == sorted(piv)
    for row, p in zip(R, piv):
        assert row[p] == 1
        assert all(r[p] == 0 for r in R if r is not row)
    rng = random.Random(len(A) * 31 + c)
    shuffled = [list(r) for r in A]
    rng.shuffle(shuffled)
    assert Subspace.from_vectors(shuffled, c) == Subspace.from_vectors(A, c)


@given(st.lists(st.lists(st.integers(-3, 3), min_size=6, max_size=6), min_size=1, max_size=6))
def test_sparse_nullspace_matches_dense(rows):
    sparse = [{j: x for j, x in enumerate(r) if x} for r in rows]
    assert linalg.sparse_nullspace(sparse, 6) == linalg.nullspace(rows, 6)


@given(st.lists(st.lists(small, min_size=3, max_size=3), min_size=1, max_size=3))
def test_annihilator_is_orthogonal(vectors):
    S = Subspace.from_vectors(vectors, 3)
    Y = linalg.annihilator(S)
    assert S.dim + Y.dim == 3
    for y in Y.basis:
        for b in S.basis:
            assert sum(a * x for a, x in zip(y, b)) == 0


def weight_systems():
    return st.integers(1, 3).flatmap(lambda d: st.tuples(
        st.lists(st.lists(st.integers(-3, 3), min_size=d, max_size=d), min_size=1, max_size=6),
        st.lists(st.lists(st.integers(-2, 2), min_size=d, max_size=d), max_size=2),
        st.just(d)))


@given(weight_systems())
def test_lp_agrees_with_fourier_motzkin(data):
    W, Lvecs, d = data
    L = Subspace.from_vectors(Lvecs, d)
    cert = linalg.lp_feasible(W, L)
    assert (cert is not None) == fm_feasible(W, Lvecs, d)
    if cert is not None:
        assert linalg.check_convex_certificate(W, L, cert)


def test_certificate_checker_rejects_bad_coefficients():
    L = Subspace.zero(1)
    assert not linalg.check_convex_certificate([[1], [-1]], L, [F(1), F(0)])
    assert not linalg.check_convex_certificate([[1], [-1]], L, [F(3, 2), F(-1, 2)])
    assert not linalg.check_convex_certificate([[1], [-1]], L, [F(1, 2)])
