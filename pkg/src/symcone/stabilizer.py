"""Lie algebra of symmetries of the span of a homogeneous polynomial family,
comparison with the structured algebra of G_{n,m}, and group-level pullbacks.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from . import linalg
from .errors import DimensionMismatchError, InvalidFamilyError, SingularMatrixError
from .liealg import GlElement, cartan_involution, commutator, structured_basis, twisted_action
from .poly import (
    Polynomial,
    PolynomialSpan,
    are_independent,
    is_homogeneous,
    mono_degree,
    mono_div_var,
    mono_times_var,
)


@dataclass(frozen=True)
class LieSubspace:
    """A subspace of gl(V), as an RREF subspace of the flattened N*N entries."""

    space: object
    subspace: linalg.Subspace

    @classmethod
    def from_elements(cls, space, elements):
        N = space.size
        return cls(space, linalg.Subspace.from_vectors([g.flatten() for g in elements], N * N))

    @property
    def dim(self):
        return self.subspace.dim

    def elements(self):
        return [GlElement.from_vector(self.space, b) for b in self.subspace.basis]

    def __contains__(self, M):
        return self.subspace.contains_vector(M.sparse_vector())

    def __eq__(self, other):
        if not isinstance(other, LieSubspace):
            return NotImplemented
        return self.subspace == other.subspace

    def __hash__(self):
        return hash(self.subspace)

    def is_closed_under_commutator(self):
        els = self.elements()
        for i in range(len(els)):
            for j in range(i + 1, len(els)):
                if commutator(els[i], els[j]) not in self:
                    return False
        return True

    def cartan_image(self):
        return LieSubspace.from_elements(self.space, [cartan_involution(g) for g in self.elements()])


def _validate_family(F):
    F = list(F)
    if not F:
        raise InvalidFamilyError("empty polynomial family")
    space = F[0].space
    degrees = set()
    for f in F:
        if f.space != space:
            raise InvalidFamilyError("polynomials live on different variable spaces")
        if f.is_zero():
            raise InvalidFamilyError("zero polynomial in the family")
        if not is_homogeneous(f):
            raise InvalidFamilyError(f"inhomogeneous polynomial {f}")
        degrees.add(f.total_degree)
    if len(degrees) != 1:
        raise InvalidFamilyError(f"mixed total degrees {sorted(degrees)}")
    if not are_independent(F):
        raise InvalidFamilyError("polynomials are linearly dependent")
    return F, space


def stabilizer_equations(F):
    """Sparse linear system whose kernel is {(M, c) : M * f_r = sum_s c_rs f_s}.

    Unknown ``u*N + v`` is the entry M[u, v]; unknown ``N*N + r*R + s`` is c_rs.
    Returns ``(rows, ncols)`` with rows as ``{column: coefficient}`` dicts.
    """
    F, space = _validate_family(F)
    N = space.size
    R = len(F)
    eqs = {}
    for r, f in enumerate(F):
        for mono, c in f.terms.items():
            for v, e in mono:
                base = mono_div_var(mono, v)
                ce = c * e
                for u in range(N):
                    row = eqs.setdefault((r, mono_times_var(base, u)), {})
                    col = u * N + v
                    row[col] = row.get(col, 0) + ce
        for s, g in enumerate(F):
            col = N * N + r * R + s
            for mono, c in g.terms.items():
                row = eqs.setdefault((r, mono), {})
                row[col] = row.get(col, 0) - c
    return list(eqs.values()), N * N + R * R


def _solve(F):
    F, space = _validate_family(F)
    N = space.size
    rows, ncols = stabilizer_equations(F)
    kernel = linalg.sparse_nullspace(rows, ncols)
    # (M, c) -> M is injective because F is independent.
    before = linalg.Subspace.from_vectors([b[:N * N] for b in kernel.basis], N * N)
    return space, before


def stabilizer_lie_algebra(F):
    """Theta applied to {M : M * span(F) within span(F)} under the twisted action."""
    space, before = _solve(list(F))
    return LieSubspace(space, before).cartan_image()


def twisted_stabilizer(F):
    """{M : M * span(F) within span(F)} before the Cartan involution is applied."""
    space, before = _solve(list(F))
    return LieSubspace(space, before)


@dataclass(frozen=True)
class StructuredComparison:
    equal: bool
    dim_found: int
    dim_expected: int
    witness: tuple = None

    def as_dict(self):
        return {
            "equal": self.equal,
            "dim_found": self.dim_found,
            "dim_expected": self.dim_expected,
            "witness": None if self.witness is None else [str(x) for x in self.witness],
        }


def structured_lie_subspace(n, m):
    from .poly import VariableSpace

    return LieSubspace.from_elements(VariableSpace.matrices(n, m), structured_basis(n, m))


def compare_with_structured(L, n, m):
    """Two-sided exact containment test against Lie(G_{n,m})."""
    S = structured_lie_subspace(n, m)
    if L.subspace.ambient != S.subspace.ambient:
        raise DimensionMismatchError(
            f"ambient {L.subspace.ambient} does not match gl(Mat_{n}^{m})")
    witness = None
    for b in L.subspace.basis:
        if not S.subspace.contains_vector(b):
            witness = b
            break
    if witness is None:
        for b in S.subspace.basis:
            if not L.subspace.contains_vector(b):
                witness = b
                break
    return StructuredComparison(witness is None, L.dim, S.dim, witness)


def acts_by_scalar(M, f):
    """The scalar c with M * f = c f under the twisted action, or None."""
    h = twisted_action(M, f)
    if h.is_zero():
        return Fraction(0)
    mono, a = next(iter(f.terms.items()))
    c = h.coefficient(mono) / a
    return c if h == f.scale(c) else None


def _decode(key, base, nvars):
    mono = []
    v = 0
    while key:
        key, e = divmod(key, base)
        if e:
            mono.append((v, e))
        v += 1
    return tuple(mono)


def substitute_linear(f, forms):
    """f(L_0, ..., L_{N-1}) where ``forms[u]`` is a sparse ``{w: coeff}`` linear form.

    Integer arithmetic on packed monomial keys; exact.
    """
    space = f.space
    N = space.size
    D = 1
    for form in forms:
        for x in form.values():
            D = lcm(D, Fraction(x).denominator)
    ints = [{w: int(Fraction(x) * D) for w, x in form.items() if x} for form in forms]
    by_degree = {}
    for mono, c in f.terms.items():
        by_degree.setdefault(mono_degree(mono), []).append((mono, c))
    out = {}
    for d, terms in by_degree.items():
        if d == 0:
            for _, c in terms:
                out[()] = out.get((), 0) + c
            continue
        base = d + 1
        powers = [base ** w for w in range(N)]
        packed = [{powers[w]: a for w, a in form.items()} for form in ints]
        cden = 1
        for _, c in terms:
            cden = lcm(cden, c.denominator)
        # group by the first d-1 factors; the last factors collapse to one linear form
        groups = {}
        for mono, c in terms:
            seq = []
            for v, e in mono:
                seq.extend([v] * e)
            last = groups.setdefault(tuple(seq[:-1]), {})
            ci = int(c * cden)
            for k, a in packed[seq[-1]].items():
                last[k] = last.get(k, 0) + ci * a
        cache = {(): {0: 1}}

        def prefix_product(prefix):
            got = cache.get(prefix)
            if got is not None:
                return got
            left = prefix_product(prefix[:-1])
            lin = packed[prefix[-1]]
            prod = {}
            for k1, a in left.items():
                for k2, b in lin.items():
                    k = k1 + k2
                    prod[k] = prod.get(k, 0) + a * b
            cache[prefix] = prod
            return prod

        acc = {}
        for prefix, last in groups.items():
            left = prefix_product(prefix)
            for k1, a in left.items():
                for k2, b in last.items():
                    k = k1 + k2
                    acc[k] = acc.get(k, 0) + a * b
        scale = cden * D ** d
        for k, a in acc.items():
            if a:
                mono = _decode(k, base, N)
                out[mono] = out.get(mono, 0) + Fraction(a, scale)
    return Polynomial(space, out)


def pullback(g, f):
    """(g . f)(v) = f(g^{-1} v)."""
    if g.space.size != f.space.size:
        raise DimensionMismatchError("group element and polynomial live on different spaces")
    try:
        ginv = g.inverse()
    except SingularMatrixError:
        raise SingularMatrixError("pullback by a singular linear map") from None
    forms = [{} for _ in range(g.size)]
    for (u, w), x in ginv.entries.items():
        forms[u][w] = x
    return substitute_linear(f, forms)


def preserves_span(g, F):
    span = F if isinstance(F, PolynomialSpan) else PolynomialSpan(F)
    return all(pullback(g, f) in span for f in span.polys)


def frobenius_split(M, n):
    """(A, B) with M = A (x) I + I (x) B on Mat_n (m = 1), or None if M has another form.

    B is normalised so that its last diagonal entry is zero.
    """
    from .liealg import _unit, gl_element
    from .poly import VariableSpace

    space = VariableSpace.matrices(n, 1)
    if M.space.size != space.size:
        raise DimensionMismatchError(f"expected an element of gl(Mat_{n})")
    In = linalg.identity(n)
    a_units = [(j, k) for j in range(n) for k in range(n)]
    b_units = a_units[:-1]
    basis = ([gl_element(space, [[[1]], _unit(n, j, k), In]).flatten() for j, k in a_units]
             + [gl_element(space, [[[1]], In, _unit(n, j, k)]).flatten() for j, k in b_units])
    target = M.flatten()
    system = [[b[r] for b in basis] + [-target[r]] for r in range(len(target))]
    kernel = linalg.nullspace(system, len(basis) + 1).basis
    sol = next((v for v in kernel if v[-1]), None)
    if sol is None:
        return None
    sol = [x / sol[-1] for x in sol[:-1]]
    A = [[Fraction(0)] * n for _ in range(n)]
    B = [[Fraction(0)] * n for _ in range(n)]
    for (j, k), x in zip(a_units, sol):
        A[j][k] = x
    for (j, k), x in zip(b_units, sol[len(a_units):]):
        B[j][k] = x
    return A, B
