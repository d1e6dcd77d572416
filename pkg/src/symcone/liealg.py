"""gl(V) for V = Mat_n^m: Kronecker-indexed elements, the twisted derivation
action on polynomials, the Cartan involution and the N^m grading.

Rows and columns of an element are indexed by the flat coordinate index of
:class:`~symcone.poly.VariableSpace`, i.e. triples (i, j, k) in lexicographic
order, so that ``E_pq (x) E_ab (x) E_cd`` is the unit matrix at
((p, a, c), (q, b, d)).
"""

from fractions import Fraction

from . import linalg
from .errors import DimensionMismatchError
from .poly import Polynomial, VariableSpace, mono_div_var, mono_times_var

ZERO = Fraction(0)
ONE = Fraction(1)


class GlElement:
    """A square rational matrix acting on the coordinates of a VariableSpace.

    Entries are kept in a sparse ``{(row, col): value}`` map.
    """

    __slots__ = ("space", "entries")

    def __init__(self, space, entries=None):
        self.space = space
        N = space.size
        clean = {}
        for (u, v), x in (entries or {}).items():
            if not (0 <= u < N and 0 <= v < N):
                raise DimensionMismatchError(f"entry {(u, v)} outside a {N}x{N} matrix")
            if x:
                clean[(u, v)] = x if isinstance(x, Fraction) else Fraction(x)
        self.entries = clean

    @classmethod
    def _raw(cls, space, entries):
        g = cls.__new__(cls)
        g.space = space
        g.entries = entries
        return g

    @property
    def size(self):
        return self.space.size

    @classmethod
    def zero(cls, space):
        return cls._raw(space, {})

    @classmethod
    def identity(cls, space):
        return cls._raw(space, {(u, u): ONE for u in range(space.size)})

    @classmethod
    def unit(cls, space, u, v):
        return cls(space, {(space.resolve(u), space.resolve(v)): ONE})

    @classmethod
    def from_dense(cls, space, rows):
        N = space.size
        if len(rows) != N or any(len(r) != N for r in rows):
            raise DimensionMismatchError(f"expected a {N}x{N} matrix")
        return cls(space, {(u, v): x for u, r in enumerate(rows) for v, x in enumerate(r) if x})

    @classmethod
    def from_vector(cls, space, vec):
        N = space.size
        if len(vec) != N * N:
            raise DimensionMismatchError(f"expected a vector of length {N * N}")
        return cls(space, {divmod(i, N): x for i, x in enumerate(vec) if x})

    def to_dense(self):
        N = self.size
        rows = [[ZERO] * N for _ in range(N)]
        for (u, v), x in self.entries.items():
            rows[u][v] = x
        return rows

    def flatten(self):
        N = self.size
        vec = [ZERO] * (N * N)
        for (u, v), x in self.entries.items():
            vec[u * N + v] = x
        return vec

    def sparse_vector(self):
        N = self.size
        return {u * N + v: x for (u, v), x in self.entries.items()}

    def _check(self, other):
        if self.space.size != other.space.size:
            raise DimensionMismatchError("gl elements of different sizes")

    def __add__(self, other):
        self._check(other)
        out = dict(self.entries)
        for k, x in other.entries.items():
            s = out.get(k, ZERO) + x
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return GlElement._raw(self.space, out)

    def __neg__(self):
        return GlElement._raw(self.space, {k: -x for k, x in self.entries.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = Fraction(c)
        if not c:
            return GlElement.zero(self.space)
        return GlElement._raw(self.space, {k: c * x for k, x in self.entries.items()})

    def __mul__(self, c):
        if isinstance(c, (int, Fraction)):
            return self.scale(c)
        return NotImplemented

    __rmul__ = __mul__

    def __matmul__(self, other):
        self._check(other)
        rows = {}
        for (u, w), x in other.entries.items():
            rows.setdefault(u, []).append((w, x))
        out = {}
        for (u, v), x in self.entries.items():
            for w, y in rows.get(v, ()):
                s = out.get((u, w), ZERO) + x * y
                if s:
                    out[(u, w)] = s
                else:
                    out.pop((u, w), None)
        return GlElement._raw(self.space, out)

    def transpose(self):
        return GlElement._raw(self.space, {(v, u): x for (u, v), x in self.entries.items()})

    def inverse(self):
        return GlElement.from_dense(self.space, linalg.inverse(self.to_dense()))

    def apply(self, vec):
        """Matrix-vector product on a coordinate vector."""
        out = [ZERO] * self.size
        for (u, v), x in self.entries.items():
            if vec[v]:
                out[u] += x * vec[v]
        return out

    def __eq__(self, other):
        if not isinstance(other, GlElement):
            return NotImplemented
        return self.space.size == other.space.size and self.entries == other.entries

    def __hash__(self):
        return hash((self.space.size, frozenset(self.entries.items())))

    def __repr__(self):
        return f"GlElement(size={self.size}, nnz={len(self.entries)})"


def commutator(M, N):
    return M @ N - N @ M


def cartan_involution(M):
    """Theta(M) = -M^t."""
    return GlElement._raw(M.space, {(v, u): -x for (u, v), x in M.entries.items()})


def twisted_action(M, f):
    """Apply the derivation sum_{u,v} M[u,v] x_u d/dx_v to ``f``."""
    if M.space.size != f.space.size:
        raise DimensionMismatchError(
            f"gl element of size {M.space.size} on a space of {f.space.size} variables")
    by_col = {}
    for (u, v), a in M.entries.items():
        by_col.setdefault(v, []).append((u, a))
    out = {}
    for mono, c in f.terms.items():
        for v, e in mono:
            col = by_col.get(v)
            if not col:
                continue
            base = mono_div_var(mono, v)
            ce = c * e
            for u, a in col:
                key = mono_times_var(base, u)
                out[key] = out.get(key, ZERO) + ce * a
    return Polynomial(f.space, out)


def kronecker(factors):
    """Iterated Kronecker product of square matrices (lists of rows)."""
    if not factors:
        return [[ONE]]
    result = [[Fraction(x) for x in row] for row in factors[0]]
    for B in factors[1:]:
        b = len(B)
        out = []
        for arow in result:
            for i in range(b):
                out.append([a * B[i][j] for a in arow for j in range(b)])
        result = out
    return result


def _unit(n, i, j):
    return [[ONE if (r, c) == (i, j) else ZERO for c in range(n)] for r in range(n)]


def gl_element(space, factors):
    """The GlElement given by the Kronecker product of ``factors``."""
    return GlElement.from_dense(space, kronecker(factors))


def lie_element(n, m, C, A, B):
    """C (x) I (x) I + I (x) A (x) I + I (x) I (x) B on Mat_n^m."""
    space = VariableSpace.matrices(n, m)
    Im, In = linalg.identity(m), linalg.identity(n)
    return (gl_element(space, [C, In, In]) + gl_element(space, [Im, A, In])
            + gl_element(space, [Im, In, B]))


def group_element(n, m, P, Q, R):
    """Image of (P, Q, R) in GL(Mat_n^m): X_i -> sum_j P[i][j] Q X_j R^{-1}."""
    space = VariableSpace.matrices(n, m)
    Rinv_t = [list(row) for row in zip(*linalg.inverse(R))]
    return gl_element(space, [P, Q, Rinv_t])


def structured_basis(n, m):
    """Basis of {C (x) I (x) I + I (x) A (x) I + I (x) I (x) B}, size m^2 + 2n^2 - 2."""
    space = VariableSpace.matrices(n, m)
    Im, In = linalg.identity(m), linalg.identity(n)
    basis = []
    for p in range(m):
        for q in range(m):
            basis.append(gl_element(space, [_unit(m, p, q), In, In]))
    last = (n - 1, n - 1)
    for j in range(n):
        for k in range(n):
            if (j, k) != last:
                basis.append(gl_element(space, [Im, _unit(n, j, k), In]))
    for j in range(n):
        for k in range(n):
            if (j, k) != last:
                basis.append(gl_element(space, [Im, In, _unit(n, j, k)]))
    return basis


def gl_degree(space, u, v):
    """Degree delta_p - delta_q of the unit matrix at (u, v)."""
    deg = [0] * space.grading_rank
    deg[space.grade(u)] += 1
    deg[space.grade(v)] -= 1
    return tuple(deg)


def gl_homogeneous_components(M):
    """Split M into its graded pieces: degree 0 and delta_p - delta_q for p != q."""
    parts = {}
    for (u, v), x in M.entries.items():
        parts.setdefault(gl_degree(M.space, u, v), {})[(u, v)] = x
    return {d: GlElement._raw(M.space, e) for d, e in sorted(parts.items())}


def block(M, p, q):
    """The n^2 x n^2 block M_pq as a dense list of rows."""
    n2 = M.space.n * M.space.n
    rows = [[ZERO] * n2 for _ in range(n2)]
    for (u, v), x in M.entries.items():
        if u // n2 == p and v // n2 == q:
            rows[u % n2][v % n2] = x
    return rows
