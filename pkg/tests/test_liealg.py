import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import eye, gauss_rank, kron, unit
from symcone import linalg
from symcone.errors import DimensionMismatchError
from symcone.liealg import (
    GlElement,
    block,
    cartan_involution,
    commutator,
    gl_degree,
    gl_element,
    gl_homogeneous_components,
    group_element,
    kronecker,
    lie_element,
    structured_basis,
    twisted_action,
)
from symcone.poly import Polynomial, VariableSpace, mono_multidegree, multidegree, parse_polynomial
from symcone.sing import fe_basis
from symcone.stabilizer import LieSubspace

S21 = VariableSpace.matrices(2, 1)
DET2 = parse_polynomial("x[1,1,1]*x[1,2,2] - x[1,1,2]*x[1,2,1]", S21)


def rand_matrix(rng, n, lo=-3, hi=3):
    return [[Fraction(rng.randint(lo, hi)) for _ in range(n)] for _ in range(n)]


def rand_element(rng, space, density=0.3):
    N = space.size
    return GlElement(space, {(u, v): rng.randint(-3, 3) for u in range(N) for v in range(N)
                             if rng.random() < density})


def rand_poly(rng, space, deg, nterms=4):
    terms = {}
    for _ in range(nterms):
        mono = {}
        for _ in range(deg):
            v = rng.randrange(space.size)
            mono[v] = mono.get(v, 0) + 1
        terms[tuple(sorted(mono.items()))] = rng.choice([-3, -2, -1, 1, 2, 3])
    return Polynomial(space, terms)


def test_twisted_action_examples():
    E = GlElement.unit(S21, (0, 0, 0), (0, 0, 0))
    assert twisted_action(E, DET2) == parse_polynomial("x[1,1,1]*x[1,2,2]", S21)
    M = gl_element(S21, [[[1]], unit(2, 1, 0), eye(2)])
    assert twisted_action(M, DET2).is_zero()
    assert twisted_action(GlElement.identity(S21), DET2) == DET2.scale(2)
    with pytest.raises(DimensionMismatchError):
        twisted_action(GlElement.identity(VariableSpace.matrices(2, 2)), DET2)


def test_cartan_examples():
    g = VariableSpace.generic(2)
    assert cartan_involution(GlElement.unit(g, 0, 1)) == -GlElement.unit(g, 1, 0)
    assert cartan_involution(GlElement.identity(g)) == -GlElement.identity(g)


def test_kronecker_examples():
    assert kronecker([unit(2, 0, 0), unit(2, 0, 0)]) == unit(4, 0, 0)
    assert kronecker([eye(2), eye(2)]) == eye(4)
    for i, j, p, q in [(0, 1, 1, 0), (1, 1, 0, 1), (1, 0, 0, 0)]:
        assert kronecker([unit(2, i, j), unit(2, p, q)]) == unit(4, 2 * i + p, 2 * j + q)


def test_kronecker_matches_oracle_and_index_convention():
    rng = random.Random(3)
    A, B, C = rand_matrix(rng, 2), rand_matrix(rng, 3), rand_matrix(rng, 3)
    assert kronecker([A, B, C]) == kron(kron(A, B), C)
    space = VariableSpace.matrices(3, 2)
    g = gl_element(space, [unit(2, 1, 0), unit(3, 2, 0), unit(3, 1, 2)])
    assert g.entries == {(space.index(1, 2, 1), space.index(0, 0, 2)): 1}


@pytest.mark.parametrize("n,m,dim", [(1, 1, 1), (2, 1, 7), (2, 2, 10), (3, 3, 25)])
def test_structured_basis_rank(n, m, dim):
    basis = structured_basis(n, m)
    assert len(basis) == m * m + 2 * n * n - 2 == dim
    space = VariableSpace.matrices(n, m)
    gens = ([gl_element(space, [unit(m, p, q), eye(n), eye(n)]) for p in range(m) for q in range(m)]
            + [gl_element(space, [eye(m), unit(n, j, k), eye(n)]) for j in range(n) for k in range(n)]
            + [gl_element(space, [eye(m), eye(n), unit(n, j, k)]) for j in range(n) for k in range(n)])
    assert gauss_rank([g.flatten() for g in gens]) == dim
    assert linalg.rank([b.flatten() for b in basis]) == dim


def test_structured_span_closed():
    S = LieSubspace.from_elements(VariableSpace.matrices(2, 2), structured_basis(2, 2))
    assert S.is_closed_under_commutator()
    assert S.cartan_image() == S


def test_lie_element_in_structured_span():
    rng = random.Random(5)
    S = LieSubspace.from_elements(VariableSpace.matrices(2, 3), structured_basis(2, 3))
    M = lie_element(2, 3, rand_matrix(rng, 3), rand_matrix(rng, 2), rand_matrix(rng, 2))
    assert M in S


def test_group_element_formula():
    rng = random.Random(8)
    n, m = 2, 2
    P = [[2, 1], [1, 1]]
    Q = [[1, 2], [0, 1]]
    R = [[1, 0], [3, 1]]
    g = group_element(n, m, P, Q, R)
    X = [rand_matrix(rng, n) for _ in range(m)]
    flat = [x for M in X for row in M for x in row]
    got = g.apply(flat)
    Rinv = linalg.inverse(R)
    for i in range(m):
        Y = [[Fraction(0)] * n for _ in range(n)]
        for j in range(m):
            QXR = linalg.matmul(linalg.matmul(Q, X[j]), Rinv)
            for a in range(n):
                for b in range(n):
                    Y[a][b] += P[i][j] * QXR[a][b]
        assert got[i * n * n:(i + 1) * n * n] == [y for row in Y for y in row]


def test_gl_components_examples():
    space = VariableSpace.matrices(2, 2)
    D = gl_element(space, [unit(2, 0, 0), unit(2, 0, 1), eye(2)])
    assert list(gl_homogeneous_components(D)) == [(0, 0)]
    E = gl_element(space, [unit(2, 1, 0), eye(2), eye(2)])
    assert list(gl_homogeneous_components(E)) == [(-1, 1)]
    assert gl_degree(space, space.index(1, 0, 0), space.index(0, 0, 0)) == (-1, 1)
    assert block(E, 1, 0) == [[Fraction(int(r == c)) for c in range(4)] for r in range(4)]


seeds = st.integers(0, 10 ** 6)


@given(seeds)
def test_components_partition(seed):
    rng = random.Random(seed)
    space = VariableSpace.matrices(2, 2)
    M = rand_element(rng, space, 0.4)
    parts = gl_homogeneous_components(M)
    assert len(parts) <= 4
    total = GlElement.zero(space)
    for d, part in parts.items():
        total = total + part
        assert sum(d) == 0
    assert total == M


@given(seeds)
def test_derivation_law_and_linearity(seed):
    rng = random.Random(seed)
    space = VariableSpace.matrices(2, 1)
    M, N = rand_element(rng, space), rand_element(rng, space)
    f, g = rand_poly(rng, space, 2), rand_poly(rng, space, 1)
    assert twisted_action(M, f * g) == twisted_action(M, f) * g + f * twisted_action(M, g)
    assert twisted_action(M + N, f) == twisted_action(M, f) + twisted_action(N, f)
    assert twisted_action(M, f + f.scale(3)) == twisted_action(M, f).scale(4)


@given(seeds)
def test_theta_is_lie_map(seed):
    rng = random.Random(seed)
    space = VariableSpace.matrices(2, 1)
    M, N = rand_element(rng, space), rand_element(rng, space)
    assert cartan_involution(commutator(M, N)) == commutator(cartan_involution(M), cartan_involution(N))
    assert cartan_involution(cartan_involution(M)) == M


@given(seeds)
def test_grading_additivity(seed):
    rng = random.Random(seed)
    space = VariableSpace.matrices(2, 3)
    u, v = rng.randrange(space.size), rng.randrange(space.size)
    M = GlElement(space, {(u, v): rng.randint(1, 5)})
    d = gl_degree(space, u, v)
    f = rand_poly(rng, space, 2, 1)
    e = multidegree(f)
    out = twisted_action(M, f)
    for mono in out.terms:
        assert mono_multidegree(space, mono) == tuple(a + b for a, b in zip(e, d))


def test_fe_is_eigenvector_of_diagonal_torus():
    # the diagonal unit E_{ii} acts on f_e by e_i (counting the variables of X_i)
    n, m = 2, 3
    space = VariableSpace.matrices(n, m)
    for e, f in fe_basis(n, m):
        for i in range(m):
            M = gl_element(space, [unit(m, i, i), eye(n), eye(n)])
            assert twisted_action(M, f) == f.scale(e[i])
