"""SING_{n,m} and NSING_{n,m}: the f_e generators, symbolic determinant
identity testing, supports, coordinate subspaces, the 3x3 separating witness
and the blow-up rank probe.

Matrix, row and column indices are 0-based throughout; tensor factor
permutations are tuples ``sigma`` with ``sigma[k]`` the source factor of slot k
(so ``(0, 2, 1)`` is the simultaneous transpose).
"""

import random
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import permutations, product
from math import comb

from . import linalg
from .errors import DimensionMismatchError, GuardExceededError, ZeroPolynomialError
from .liealg import GlElement
from .poly import (
    Polynomial,
    PolynomialSpan,
    VariableSpace,
    evaluate,
    is_homogeneous,
)

SYMBOLIC_MAX_N = 6
BLOWUP_RANGE = 10 ** 6

ZERO = Fraction(0)
ONE = Fraction(1)


class Verdict(str, Enum):
    SINGULAR = "singular"
    NONSINGULAR = "nonsingular"


@dataclass(frozen=True)
class MatrixTuple:
    """An m-tuple of n x n rational matrices."""

    n: int
    m: int
    matrices: tuple

    def __post_init__(self):
        if len(self.matrices) != self.m:
            raise DimensionMismatchError(f"expected {self.m} matrices, got {len(self.matrices)}")
        for X in self.matrices:
            if len(X) != self.n or any(len(row) != self.n for row in X):
                raise DimensionMismatchError(f"matrices must be {self.n}x{self.n}")

    @classmethod
    def from_lists(cls, matrices):
        matrices = tuple(tuple(tuple(Fraction(x) for x in row) for row in X) for X in matrices)
        if not matrices:
            raise DimensionMismatchError("empty matrix tuple")
        return cls(len(matrices[0]), len(matrices), matrices)

    @classmethod
    def zero(cls, n, m):
        return cls(n, m, tuple(tuple((ZERO,) * n for _ in range(n)) for _ in range(m)))

    @classmethod
    def from_flat(cls, n, m, vec):
        it = iter(vec)
        return cls(n, m, tuple(
            tuple(tuple(Fraction(next(it)) for _ in range(n)) for _ in range(n))
            for _ in range(m)))

    @classmethod
    def from_entries(cls, n, m, entries):
        """Build from a ``{(i, j, k): value}`` map."""
        vec = [ZERO] * (m * n * n)
        for (i, j, k), x in entries.items():
            vec[(i * n + j) * n + k] = Fraction(x)
        return cls.from_flat(n, m, vec)

    @property
    def space(self):
        return VariableSpace.matrices(self.n, self.m)

    def flatten(self):
        return [x for X in self.matrices for row in X for x in row]

    def combination(self, coeffs):
        """sum_i coeffs[i] X_i as a list of rows."""
        n = self.n
        out = [[ZERO] * n for _ in range(n)]
        for c, X in zip(coeffs, self.matrices):
            if c:
                for j in range(n):
                    for k in range(n):
                        if X[j][k]:
                            out[j][k] += c * X[j][k]
        return out

    def apply(self, g):
        """Image under a linear map of Mat_n^m given as a GlElement."""
        return MatrixTuple.from_flat(self.n, self.m, g.apply(self.flatten()))


@dataclass(frozen=True)
class SupportSet:
    """Positions in [m] x [n] x [n] (``m`` set) or in [n] x [n] (``m`` is None)."""

    n: int
    members: frozenset
    m: int = None

    def __post_init__(self):
        for pos in self.members:
            if self.m is None:
                ok = len(pos) == 2 and all(0 <= a < self.n for a in pos)
            else:
                ok = (len(pos) == 3 and 0 <= pos[0] < self.m
                      and all(0 <= a < self.n for a in pos[1:]))
            if not ok:
                raise DimensionMismatchError(f"support position {pos} out of range")

    @classmethod
    def of(cls, n, members, m=None):
        return cls(n, frozenset(tuple(p) for p in members), m)

    def project(self):
        """pi_{2,3}: drop the matrix index."""
        if self.m is None:
            return self
        return SupportSet(self.n, frozenset((j, k) for _, j, k in self.members))

    def sorted(self):
        return sorted(self.members)

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.sorted())

    def __contains__(self, pos):
        return tuple(pos) in self.members


def permutation_sign(sigma):
    sign = 1
    for a in range(len(sigma)):
        for b in range(a + 1, len(sigma)):
            if sigma[a] > sigma[b]:
                sign = -sign
    return sign


def compositions(n, m):
    """All e in N^m with sum n, starting from (n, 0, ..., 0)."""
    if m == 1:
        return [(n,)]
    out = []
    for first in range(n, -1, -1):
        for rest in compositions(n - first, m - 1):
            out.append((first,) + rest)
    return out


def fe_polynomial(n, m, e):
    """f_e: sum over e-compatible p and sigma of sgn(sigma) prod_j x^{(p_j)}_{j sigma(j)}."""
    space = VariableSpace.matrices(n, m)
    if len(e) != m or sum(e) != n or min(e) < 0:
        raise ValueError(f"{e} is not a composition of {n} into {m} parts")
    placements = []
    for p in product(range(m), repeat=n):
        counts = [0] * m
        for i in p:
            counts[i] += 1
        if tuple(counts) == tuple(e):
            placements.append(p)
    terms = {}
    for sigma in permutations(range(n)):
        sgn = permutation_sign(sigma)
        for p in placements:
            mono = tuple(sorted((space.index(p[j], j, sigma[j]), 1) for j in range(n)))
            terms[mono] = terms.get(mono, 0) + sgn
    return Polynomial(space, terms)


def fe_basis(n, m):
    """[(e, f_e)] for all compositions e of n into m parts; C(n+m-1, m-1) entries."""
    basis = [(e, fe_polynomial(n, m, e)) for e in compositions(n, m)]
    assert len(basis) == comb(n + m - 1, m - 1)
    return basis


def polynomial_determinant(entries, space):
    """Determinant of a square matrix of Polynomials by memoised Laplace expansion."""
    n = len(entries)
    one = Polynomial.constant(space, 1)
    memo = {}

    def minor(row, mask):
        if row == n:
            return one
        got = memo.get(mask)
        if got is not None:
            return got
        total = Polynomial.zero(space)
        sign = 1
        for k in range(n):
            if mask >> k & 1:
                a = entries[row][k]
                if a:
                    sub = minor(row + 1, mask & ~(1 << k))
                    if sub:
                        total = total + (a * sub if sign > 0 else -(a * sub))
                sign = -sign
        memo[mask] = total
        return total

    return minor(0, (1 << n) - 1)


def det_of_combination(n, m, c):
    """det(sum_i c_i X_i) as a polynomial in the coordinates of Mat_n^m."""
    space = VariableSpace.matrices(n, m)
    c = [Fraction(x) for x in c]
    if len(c) != m:
        raise DimensionMismatchError(f"expected {m} coefficients")
    entries = [[Polynomial(space, {((space.index(i, j, k), 1),): c[i] for i in range(m)})
                for k in range(n)] for j in range(n)]
    return polynomial_determinant(entries, space)


def det_span_membership(n, m, c, span=None):
    span = span or PolynomialSpan([f for _, f in fe_basis(n, m)])
    return det_of_combination(n, m, c) in span


def symbolic_determinant(X):
    """det(sum_i t_i X_i) in Q[t_1, ..., t_m] (generic variable space of size m)."""
    if X.n > SYMBOLIC_MAX_N:
        raise GuardExceededError(
            f"symbolic expansion is limited to n <= {SYMBOLIC_MAX_N}, got n={X.n}")
    tspace = VariableSpace.generic(X.m)
    entries = [[Polynomial(tspace, {((i, 1),): X.matrices[i][j][k] for i in range(X.m)})
                for k in range(X.n)] for j in range(X.n)]
    return polynomial_determinant(entries, tspace)


def sdit_symbolic(X):
    return Verdict.SINGULAR if symbolic_determinant(X).is_zero() else Verdict.NONSINGULAR


@dataclass(frozen=True)
class SditResult:
    verdict: Verdict
    certain: bool
    error_bound: Fraction
    evaluations: int
    sample_range: int

    def as_dict(self):
        return {
            "verdict": self.verdict.value,
            "certain": self.certain,
            "error_bound": str(self.error_bound),
            "evaluations": self.evaluations,
            "sample_range": self.sample_range,
        }


def sdit_random(X, seed=0, trials=20):
    """Evaluate det(sum c_i X_i) at random integer points from {0, ..., B-1}^m, B = 2 n trials.

    Nonsingular verdicts are certain; a Singular verdict is wrong with
    probability at most (n / B) ** trials.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = random.Random(seed)
    B = 2 * X.n * trials
    bound = Fraction(X.n, B) ** trials
    for t in range(trials):
        c = [rng.randrange(B) for _ in range(X.m)]
        if linalg.determinant(X.combination(c)) != 0:
            return SditResult(Verdict.NONSINGULAR, True, ZERO, t + 1, B)
    return SditResult(Verdict.SINGULAR, False, bound, trials, B)


def supports(X):
    """(Supp(X), USupp(X))."""
    supp = frozenset((i, j, k) for i, M in enumerate(X.matrices)
                     for j, row in enumerate(M) for k, x in enumerate(row) if x)
    full = SupportSet(X.n, supp, X.m)
    return full, full.project()


def maximum_matching(J, n):
    """Maximum matching of the bipartite graph rows -> columns with edge set J."""
    adj = [[] for _ in range(n)]
    for j, k in sorted(J.members if isinstance(J, SupportSet) else J):
        adj[j].append(k)
    col_match = [-1] * n

    def augment(row, seen):
        for col in adj[row]:
            if not seen[col]:
                seen[col] = True
                if col_match[col] < 0 or augment(col_match[col], seen):
                    col_match[col] = row
                    return True
        return False

    for row in range(n):
        augment(row, [False] * n)
    return {col_match[c]: c for c in range(n) if col_match[c] >= 0}


def is_permutation_free(J):
    """True iff J contains no {(i, sigma(i))}, i.e. its maximum matching is < n."""
    J = J.project() if J.m is not None else J
    return len(maximum_matching(J, J.n)) < J.n


def konig_cover(J):
    """Minimum vertex cover (rows, cols) of J from a maximum matching."""
    n = J.n
    matching = maximum_matching(J, n)
    adj = [[] for _ in range(n)]
    for j, k in J.members:
        adj[j].append(k)
    row_of_col = {c: r for r, c in matching.items()}
    seen_rows = set(r for r in range(n) if r not in matching)
    seen_cols = set()
    stack = list(seen_rows)
    while stack:
        r = stack.pop()
        for c in adj[r]:
            if c not in seen_cols and matching.get(r) != c:
                seen_cols.add(c)
                r2 = row_of_col.get(c)
                if r2 is not None and r2 not in seen_rows:
                    seen_rows.add(r2)
                    stack.append(r2)
    rows = sorted(set(range(n)) - seen_rows)
    cols = sorted(seen_cols)
    return rows, cols


def shrunk_block(J):
    """For permutation-free J: rows R and columns C with J disjoint from R x C and |R| + |C| > n.

    Every tuple supported on J then has a common zero block of that shape,
    which certifies membership in NSING. Returns None when J contains a
    permutation.
    """
    if not is_permutation_free(J):
        return None
    rows, cols = konig_cover(J)
    R = sorted(set(range(J.n)) - set(rows))
    C = sorted(set(range(J.n)) - set(cols))
    assert len(R) + len(C) > J.n
    assert not any((j, k) in J.members for j in R for k in C)
    return R, C


@dataclass(frozen=True)
class CoordMembership:
    in_sing: bool
    in_nsing: bool

    def as_dict(self):
        return {"in_sing": self.in_sing, "in_nsing": self.in_nsing}


def coord_subspace_membership(I):
    """Whether L_I lies in SING and in NSING; both hold iff pi_{2,3}(I) is permutation free."""
    free = is_permutation_free(I.project())
    return CoordMembership(free, free)


def random_tuple_on(I, rng, value_range=97):
    """A random tuple supported inside I, with nonzero integer values on I."""
    return MatrixTuple.from_entries(
        I.n, I.m, {pos: rng.randrange(1, value_range + 1) * rng.choice((1, -1)) for pos in I})


def permutation_point(I, sigma):
    """A 0/1 tuple in L_I whose matrix sum is the permutation matrix of sigma."""
    entries = {}
    for j in range(I.n):
        i = next(i for i in range(I.m) if (i, j, sigma[j]) in I.members)
        entries[(i, j, sigma[j])] = 1
    return MatrixTuple.from_entries(I.n, I.m, entries)


def low_degree_witness(f, seed=0, max_tries=200):
    """A tuple X in SING with f(X) != 0, for f homogeneous of total degree d < n.

    X is supported on the support of one monomial of f (at most d positions),
    with random nonzero integer values drawn from {1, ..., 8 d^2}.
    """
    space = f.space
    if f.is_zero():
        raise ZeroPolynomialError("low_degree_witness needs a nonzero polynomial")
    if not space.is_matrix:
        raise DimensionMismatchError("low_degree_witness needs a matrix-mode polynomial")
    if not is_homogeneous(f):
        raise ValueError("polynomial must be homogeneous")
    d = f.total_degree
    n, m = space.n, space.m
    if d >= n:
        raise ValueError(f"total degree {d} is not below n = {n}")
    mono = f.sorted_terms()[0][0]
    positions = [space.triple(v) for v, _ in mono]
    rng = random.Random(seed)
    B = 8 * max(d, 1) ** 2
    for _ in range(max_tries):
        X = MatrixTuple.from_entries(n, m, {pos: rng.randrange(1, B + 1) for pos in positions})
        if evaluate(f, X.flatten()) != 0:
            return X
    raise RuntimeError("no witness found; the random range is too small")


def witness_3x3():
    return MatrixTuple.from_lists([
        [[0, 1, 0], [-1, 0, 0], [0, 0, 0]],
        [[0, 0, 1], [0, 0, 0], [-1, 0, 0]],
        [[0, 0, 0], [0, 0, 1], [0, -1, 0]],
    ])


def separation_witness(n, m):
    """witness_3x3 in the top-left blocks of X_1..X_3, identity tail on X_1, zeros elsewhere."""
    if n < 3 or m < 3:
        raise ValueError("separation witness needs n, m >= 3")
    W = witness_3x3()
    entries = {}
    for i in range(3):
        for j in range(3):
            for k in range(3):
                if W.matrices[i][j][k]:
                    entries[(i, j, k)] = W.matrices[i][j][k]
    for j in range(3, n):
        entries[(0, j, j)] = 1
    return MatrixTuple.from_entries(n, m, entries)


def blowup_matrix(X, T):
    """sum_i X_i (x) T_i for d x d matrices T_i."""
    n = X.n
    d = len(T[0])
    size = d * n
    out = [[ZERO] * size for _ in range(size)]
    for Xi, Ti in zip(X.matrices, T):
        for a in range(n):
            for b in range(n):
                x = Xi[a][b]
                if x:
                    for s in range(d):
                        for t in range(d):
                            if Ti[s][t]:
                                out[a * d + s][b * d + t] += x * Ti[s][t]
    return out


def blowup_rank_probe(X, d, seed=0):
    """Rank of sum X_i (x) T_i for random integer d x d matrices T_i.

    Rank d*n certifies X is not in NSING; a smaller rank is inconclusive. The
    probability that the result is below the generic rank is at most
    :func:`blowup_error_bound`.
    """
    if d < 1:
        raise ValueError("d must be >= 1")
    rng = random.Random(seed)
    T = [[[rng.randrange(BLOWUP_RANGE) for _ in range(d)] for _ in range(d)]
         for _ in range(X.m)]
    return linalg.rank(blowup_matrix(X, T), d * X.n)


def blowup_error_bound(X, d):
    return Fraction(d * X.n, BLOWUP_RANGE)


def _check_sigma(n, m, sigma):
    if sorted(sigma) != [0, 1, 2]:
        raise ValueError(f"{sigma} is not a permutation of the three tensor factors")
    dims = (m, n, n)
    if tuple(dims[s] for s in sigma) != dims:
        raise DimensionMismatchError(f"factor permutation {sigma} needs m == n (m={m}, n={n})")


def tensor_factor_permute(X, sigma):
    """tau_sigma: e_{a0} (x) e_{a1} (x) e_{a2} -> e_{a_sigma[0]} (x) e_{a_sigma[1]} (x) e_{a_sigma[2]}."""
    _check_sigma(X.n, X.m, sigma)
    entries = {}
    for i, M in enumerate(X.matrices):
        for j, row in enumerate(M):
            for k, x in enumerate(row):
                if x:
                    src = (i, j, k)
                    entries[tuple(src[s] for s in sigma)] = x
    return MatrixTuple.from_entries(X.n, X.m, entries)


def tensor_factor_matrix(n, m, sigma):
    """tau_sigma as a permutation GlElement on the coordinates of Mat_n^m."""
    _check_sigma(n, m, sigma)
    space = VariableSpace.matrices(n, m)
    entries = {}
    for src in product(range(m), range(n), range(n)):
        dst = tuple(src[s] for s in sigma)
        entries[(space.index(*dst), space.index(*src))] = ONE
    return GlElement(space, entries)


def transpose_map(n, m):
    return tensor_factor_matrix(n, m, (0, 2, 1))

