"""Exact rational linear algebra: echelon forms, kernels, subspaces, LP feasibility.

Matrices are plain lists of rows. Entries may be ``int`` or ``Fraction``;
everything returned is ``Fraction``-valued. Elimination is done fraction-free
(Bareiss) on integer rows, and only the final back-substitution to reduced
row-echelon form uses rationals.
"""

from fractions import Fraction
from math import lcm

from .errors import DimensionMismatchError, SingularMatrixError

ZERO = Fraction(0)
ONE = Fraction(1)


def _integer_rows(rows):
    """Scale every row by the lcm of its denominators."""
    out = []
    for row in rows:
        den = 1
        for x in row:
            if isinstance(x, Fraction):
                den = lcm(den, x.denominator)
        if den == 1:
            out.append([int(x) for x in row])
        else:
            out.append([int(x * den) for x in row])
    return out


def _bareiss_echelon(M, ncols):
    """In-place fraction-free row echelon form of an integer matrix.

    Returns ``(rank, pivots)``; the first ``rank`` rows of ``M`` are the
    echelon rows. Every division is exact.
    """
    nrows = len(M)
    prev = 1
    r = 0
    pivots = []
    for c in range(ncols):
        if r == nrows:
            break
        p = r
        while p < nrows and M[p][c] == 0:
            p += 1
        if p == nrows:
            continue
        M[r], M[p] = M[p], M[r]
        Mr = M[r]
        piv = Mr[c]
        for i in range(r + 1, nrows):
            Mi = M[i]
            a = Mi[c]
            if a == 0:
                if piv != prev:
                    for j in range(c + 1, ncols):
                        if Mi[j]:
                            Mi[j] = (piv * Mi[j]) // prev
                continue
            for j in range(c + 1, ncols):
                Mi[j] = (piv * Mi[j] - a * Mr[j]) // prev
            Mi[c] = 0
        prev = piv
        pivots.append(c)
        r += 1
    return r, pivots


def _ncols(A, ncols):
    if ncols is not None:
        return ncols
    if not A:
        raise DimensionMismatchError("cannot infer the column count of an empty matrix")
    return len(A[0])


def rref(A, ncols=None):
    """Reduced row-echelon form.

    Returns ``(rows, pivots)`` where ``rows`` are the nonzero RREF rows as
    tuples of Fractions and ``pivots`` their (strictly increasing) pivot columns.
    """
    ncols = _ncols(A, ncols)
    for row in A:
        if len(row) != ncols:
            raise DimensionMismatchError("ragged matrix")
    M = _integer_rows(A)
    r, pivots = _bareiss_echelon(M, ncols)
    R = [[Fraction(x) for x in M[i]] for i in range(r)]
    for i in range(r - 1, -1, -1):
        c = pivots[i]
        row = R[i]
        p = row[c]
        if p != 1:
            row = R[i] = [x / p for x in row]
        nz = [j for j in range(c, ncols) if row[j]]
        for k in range(i):
            a = R[k][c]
            if a:
                Rk = R[k]
                for j in nz:
                    Rk[j] -= a * row[j]
    return [tuple(row) for row in R], pivots


def rank(A, ncols=None):
    if not A:
        return 0
    ncols = _ncols(A, ncols)
    M = _integer_rows(A)
    r, _ = _bareiss_echelon(M, ncols)
    return r


def determinant(A):
    """Exact determinant of a square matrix via Bareiss elimination."""
    n = len(A)
    if any(len(row) != n for row in A):
        raise DimensionMismatchError("determinant of a non-square matrix")
    if n == 0:
        return ONE
    dens = []
    for row in A:
        d = 1
        for x in row:
            if isinstance(x, Fraction):
                d = lcm(d, x.denominator)
        dens.append(d)
    M = _integer_rows(A)
    sign = 1
    prev = 1
    for c in range(n):
        p = c
        while p < n and M[p][c] == 0:
            p += 1
        if p == n:
            return ZERO
        if p != c:
            M[c], M[p] = M[p], M[c]
            sign = -sign
        piv = M[c][c]
        for i in range(c + 1, n):
            a = M[i][c]
            Mi, Mc = M[i], M[c]
            for j in range(c + 1, n):
                Mi[j] = (piv * Mi[j] - a * Mc[j]) // prev
            Mi[c] = 0
        prev = piv
    den = 1
    for d in dens:
        den *= d
    return Fraction(sign * M[n - 1][n - 1], den)


def inverse(A):
    """Exact inverse by Gauss-Jordan elimination on the augmented matrix."""
    n = len(A)
    if any(len(row) != n for row in A):
        raise DimensionMismatchError("inverse of a non-square matrix")
    aug = [list(A[i]) + [1 if j == i else 0 for j in range(n)] for i in range(n)]
    R, pivots = rref(aug, 2 * n)
    if len(R) < n or pivots[n - 1] != n - 1:
        raise SingularMatrixError("matrix is singular")
    return [list(row[n:]) for row in R]


def matmul(A, B):
    inner = len(B)
    if A and len(A[0]) != inner:
        raise DimensionMismatchError("inner dimensions differ")
    cols = len(B[0]) if B else 0
    out = []
    for row in A:
        acc = [ZERO] * cols
        for k, a in enumerate(row):
            if a:
                Bk = B[k]
                for j in range(cols):
                    if Bk[j]:
                        acc[j] += a * Bk[j]
        out.append(acc)
    return out


def identity(n):
    return [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]


class Subspace:
    """A subspace of Q^ambient, stored by its canonical RREF basis.

    Two subspaces are equal exactly when their RREF bases coincide.
    """

    __slots__ = ("ambient", "basis", "pivots", "_sparse")

    def __init__(self, ambient, basis=(), pivots=()):
        self.ambient = ambient
        self.basis = tuple(tuple(row) for row in basis)
        self.pivots = tuple(pivots)
        self._sparse = [{j: x for j, x in enumerate(row) if x} for row in self.basis]

    @classmethod
    def from_vectors(cls, vectors, ambient):
        vectors = [list(v) for v in vectors]
        for v in vectors:
            if len(v) != ambient:
                raise DimensionMismatchError(
                    f"vector of length {len(v)} in ambient dimension {ambient}")
        if not vectors:
            return cls(ambient)
        rows, pivots = rref(vectors, ambient)
        return cls(ambient, rows, pivots)

    @classmethod
    def zero(cls, ambient):
        return cls(ambient)

    @classmethod
    def full(cls, ambient):
        return cls(ambient, identity(ambient), range(ambient))

    @property
    def dim(self):
        return len(self.basis)

    def __len__(self):
        return len(self.basis)

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient == other.ambient and self.basis == other.basis

    def __hash__(self):
        return hash((self.ambient, self.basis))

    def __repr__(self):
        return f"Subspace(ambient={self.ambient}, dim={self.dim})"

    def residual(self, v):
        """Reduce ``v`` against the basis; returns the nonzero leftovers as a dict."""
        if isinstance(v, dict):
            res = {j: Fraction(x) for j, x in v.items() if x}
        else:
            if len(v) != self.ambient:
                raise DimensionMismatchError(
                    f"vector of length {len(v)} in ambient dimension {self.ambient}")
            res = {j: Fraction(x) for j, x in enumerate(v) if x}
        for piv, row in zip(self.pivots, self._sparse):
            a = res.get(piv)
            if a:
                for j, x in row.items():
                    y = res.get(j, ZERO) - a * x
                    if y:
                        res[j] = y
                    else:
                        res.pop(j, None)
        return res

    def contains_vector(self, v):
        return not self.residual(v)

    def contains(self, other):
        if self.ambient != other.ambient:
            raise DimensionMismatchError("ambient dimensions differ")
        return all(self.contains_vector(row) for row in other.basis)

    def coordinates(self, v):
        """Coefficients of ``v`` in the RREF basis, or None when v is outside."""
        if not self.contains_vector(v):
            return None
        if isinstance(v, dict):
            return [Fraction(v.get(p, 0)) for p in self.pivots]
        return [Fraction(v[p]) for p in self.pivots]

    def sum(self, other):
        if self.ambient != other.ambient:
            raise DimensionMismatchError("ambient dimensions differ")
        return Subspace.from_vectors(list(self.basis) + list(other.basis), self.ambient)


def nullspace(A, ncols=None):
    """Kernel of ``A`` as a Subspace (RREF basis)."""
    ncols = _ncols(A, ncols)
    if not A:
        return Subspace.full(ncols)
    R, pivots = rref(A, ncols)
    pivset = set(pivots)
    vectors = []
    for f in range(ncols):
        if f in pivset:
            continue
        v = [ZERO] * ncols
        v[f] = ONE
        for row, p in zip(R, pivots):
            if row[f]:
                v[p] = -row[f]
        vectors.append(v)
    return Subspace.from_vectors(vectors, ncols)


def sparse_nullspace(rows, ncols):
    """Kernel of a sparse matrix given as a list of ``{column: value}`` rows.

    Columns are split into the connected components of the row/column
    incidence graph; the kernel is the direct sum of the component kernels,
    each computed with :func:`nullspace`.
    """
    parent = list(range(ncols))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for row in rows:
        cols = [c for c, x in row.items() if x]
        if not cols:
            continue
        r0 = find(cols[0])
        for c in cols[1:]:
            rc = find(c)
            if rc != r0:
                parent[rc] = r0
    comp_cols = {}
    for c in range(ncols):
        comp_cols.setdefault(find(c), []).append(c)
    comp_rows = {}
    for row in rows:
        for c, x in row.items():
            if x:
                comp_rows.setdefault(find(c), []).append(row)
                break
    vectors = []
    for root, cols in comp_cols.items():
        local = {c: i for i, c in enumerate(cols)}
        dense = []
        for row in comp_rows.get(root, ()):
            d = [0] * len(cols)
            for c, x in row.items():
                d[local[c]] = x
            dense.append(d)
        kernel = nullspace(dense, len(cols))
        for b in kernel.basis:
            v = [ZERO] * ncols
            for i, x in enumerate(b):
                v[cols[i]] = x
            vectors.append(v)
    return Subspace.from_vectors(vectors, ncols)


def annihilator(S):
    """Orthogonal complement {y : y . b = 0 for all b in S}."""
    if S.dim == 0:
        return Subspace.full(S.ambient)
    return nullspace([list(b) for b in S.basis], S.ambient)


def _phase_one(A, b):
    """Exact phase-one simplex with Bland's rule.

    Decides whether {x >= 0 : A x = b} is nonempty and returns a basic
    feasible point, or None.
    """
    m = len(A)
    n = len(A[0]) if m else 0
    if m == 0:
        return [ZERO] * n
    T = []
    for i in range(m):
        row = [Fraction(x) for x in A[i]]
        rhs = Fraction(b[i])
        if rhs < 0:
            row = [-x for x in row]
            rhs = -rhs
        T.append(row + [ONE if k == i else ZERO for k in range(m)] + [rhs])
    basis = [n + i for i in range(m)]
    width = n + m
    cost = [ZERO] * n + [ONE] * m
    while True:
        reduced = []
        for j in range(width):
            d = cost[j]
            for i in range(m):
                if T[i][j]:
                    d -= cost[basis[i]] * T[i][j]
            reduced.append(d)
        entering = next((j for j in range(width) if reduced[j] < 0), None)
        if entering is None:
            break
        leave = None
        best = None
        for i in range(m):
            a = T[i][entering]
            if a > 0:
                ratio = T[i][width] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best, leave = ratio, i
        if leave is None:  # cannot happen: the phase-one objective is bounded below by 0
            break
        piv = T[leave][entering]
        T[leave] = [x / piv for x in T[leave]]
        prow = T[leave]
        for i in range(m):
            if i != leave and T[i][entering]:
                a = T[i][entering]
                T[i] = [x - a * y for x, y in zip(T[i], prow)]
        basis[leave] = entering
    objective = sum((cost[basis[i]] * T[i][width] for i in range(m)), ZERO)
    if objective != 0:
        return None
    x = [ZERO] * n
    for i, j in enumerate(basis):
        if j < n:
            x[j] = T[i][width]
    return x


def check_convex_certificate(W, L, coeffs):
    """Exact check: coeffs >= 0, sum to 1 and sum coeffs[i] W[i] lies in L."""
    if len(coeffs) != len(W):
        return False
    if any(a < 0 for a in coeffs) or sum(coeffs, ZERO) != 1:
        return False
    combo = [sum((a * w[k] for a, w in zip(coeffs, W)), ZERO) for k in range(L.ambient)]
    return L.contains_vector(combo)


def lp_feasible(W, L):
    """Find a >= 0 with sum(a) = 1 and sum a_i W[i] in L.

    Returns the exact rational coefficient list, or None when infeasible.
    """
    W = [list(w) for w in W]
    for w in W:
        if len(w) != L.ambient:
            raise DimensionMismatchError("weight dimension differs from the subspace ambient")
    if not W:
        return None
    Y = annihilator(L)
    A = []
    b = []
    for y in Y.basis:
        A.append([sum((yk * wk for yk, wk in zip(y, w)), ZERO) for w in W])
        b.append(ZERO)
    A.append([ONE] * len(W))
    b.append(ONE)
    x = _phase_one(A, b)
    if x is None:
        return None
    assert check_convex_certificate(W, L, x)
    return x
