"""Sparse multivariate polynomials over Q with the N^m multigrading of Mat_n^m.

Variables are addressed by a flat index. In matrix mode the flat index of the
coordinate x^{(i)}_{jk} (0-based i, j, k) is ``i*n*n + j*n + k``, which is the
lexicographic order on triples. Text uses 1-based indices: ``x[i,j,k]`` in
matrix mode and ``x[i]`` in generic mode.

A monomial is a tuple of ``(variable, exponent)`` pairs sorted by variable,
exponents >= 1; the empty tuple is the constant monomial.
"""

import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    PolynomialSyntaxError,
    SpaceMismatchError,
    VariableIndexError,
    ZeroPolynomialError,
)
from . import linalg


@dataclass(frozen=True)
class VariableSpace:
    """Coordinates of Mat_n^m (matrix mode) or of Q^size (generic mode)."""

    size: int
    n: int = None
    m: int = None

    @classmethod
    def matrices(cls, n, m):
        if n < 1 or m < 1:
            raise ValueError("n and m must be positive")
        return cls(m * n * n, n, m)

    @classmethod
    def generic(cls, size):
        if size < 0:
            raise ValueError("size must be nonnegative")
        return cls(size)

    @property
    def is_matrix(self):
        return self.n is not None

    @property
    def grading_rank(self):
        """Length of multidegree vectors: m in matrix mode, 1 otherwise."""
        return self.m if self.is_matrix else 1

    def index(self, i, j, k):
        n, m = self.n, self.m
        if not (0 <= i < m and 0 <= j < n and 0 <= k < n):
            raise VariableIndexError(f"triple {(i, j, k)} out of range for n={n}, m={m}")
        return (i * n + j) * n + k

    def triple(self, v):
        n = self.n
        return v // (n * n), (v // n) % n, v % n

    def grade(self, v):
        return v // (self.n * self.n) if self.is_matrix else 0

    def name(self, v):
        if self.is_matrix:
            i, j, k = self.triple(v)
            return f"x[{i + 1},{j + 1},{k + 1}]"
        return f"x[{v + 1}]"

    def resolve(self, v):
        """Accept a flat index or a 0-based triple; return the flat index."""
        if isinstance(v, tuple):
            if not self.is_matrix:
                raise VariableIndexError("triples are only valid in matrix mode")
            return self.index(*v)
        if not 0 <= v < self.size:
            raise VariableIndexError(f"variable {v} out of range (size {self.size})")
        return v


def mono_degree(mono):
    return sum(e for _, e in mono)


def mono_mul(a, b):
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for v, e in b:
        d[v] = d.get(v, 0) + e
    return tuple(sorted(d.items()))


def mono_times_var(mono, v):
    out = []
    placed = False
    for w, e in mono:
        if w == v:
            out.append((w, e + 1))
            placed = True
        elif w > v and not placed:
            out.append((v, 1))
            out.append((w, e))
            placed = True
        else:
            out.append((w, e))
    if not placed:
        out.append((v, 1))
    return tuple(out)


def mono_div_var(mono, v):
    """Divide by one power of ``v``; caller guarantees ``v`` divides ``mono``."""
    out = []
    for w, e in mono:
        if w == v:
            if e > 1:
                out.append((w, e - 1))
        else:
            out.append((w, e))
    return tuple(out)


def _expanded(mono):
    out = []
    for v, e in mono:
        out.extend([v] * e)
    return out


def _order_key(mono):
    return (-mono_degree(mono), _expanded(mono))


class Polynomial:
    """Immutable polynomial: a map monomial -> nonzero Fraction on a VariableSpace."""

    __slots__ = ("space", "terms", "_hash")

    def __init__(self, space, terms=None):
        self.space = space
        clean = {}
        if terms:
            for mono, c in terms.items():
                if c:
                    clean[mono] = c if isinstance(c, Fraction) else Fraction(c)
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, space, terms):
        p = cls.__new__(cls)
        p.space = space
        p.terms = terms
        p._hash = None
        return p

    @classmethod
    def zero(cls, space):
        return cls._raw(space, {})

    @classmethod
    def constant(cls, space, c):
        return cls(space, {(): Fraction(c)})

    @classmethod
    def variable(cls, space, v):
        return cls._raw(space, {((space.resolve(v), 1),): Fraction(1)})

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    @property
    def total_degree(self):
        if not self.terms:
            raise ZeroPolynomialError("the zero polynomial has no degree")
        return max(mono_degree(m) for m in self.terms)

    def variables(self):
        return sorted({v for mono in self.terms for v, _ in mono})

    def coefficient(self, mono):
        return self.terms.get(mono, Fraction(0))

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: _order_key(t[0]))

    def _check(self, other):
        if self.space != other.space:
            raise SpaceMismatchError(f"{self.space} vs {other.space}")

    def __add__(self, other):
        if not isinstance(other, Polynomial):
            if isinstance(other, (int, Fraction)):
                other = Polynomial.constant(self.space, other)
            else:
                return NotImplemented
        self._check(other)
        out = dict(self.terms)
        for mono, c in other.terms.items():
            s = out.get(mono, 0) + c
            if s:
                out[mono] = s
            else:
                out.pop(mono, None)
        return Polynomial._raw(self.space, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(self.space, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        c = Fraction(c)
        if not c:
            return Polynomial.zero(self.space)
        return Polynomial._raw(self.space, {m: c * a for m, a in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check(other)
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                mono = mono_mul(m1, m2)
                s = out.get(mono, 0) + c1 * c2
                if s:
                    out[mono] = s
                else:
                    out.pop(mono, None)
        return Polynomial._raw(self.space, out)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k):
        result = Polynomial.constant(self.space, 1)
        for _ in range(k):
            result = result * self
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(self.space, other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.space == other.space and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.space, frozenset(self.terms.items())))
        return self._hash

    def __str__(self):
        return format_polynomial(self)

    def __repr__(self):
        return f"Polynomial({format_polynomial(self)!r})"

    def __call__(self, point):
        return evaluate(self, point)


def format_polynomial(p):
    if not p.terms:
        return "0"
    parts = []
    for idx, (mono, c) in enumerate(p.sorted_terms()):
        sign = "-" if c < 0 else "+"
        a = abs(c)
        factors = []
        for v, e in mono:
            name = p.space.name(v)
            factors.append(name if e == 1 else f"{name}^{e}")
        if not factors:
            body = str(a)
        elif a == 1:
            body = "*".join(factors)
        else:
            body = str(a) + "*" + "*".join(factors)
        if idx == 0:
            parts.append(("-" if sign == "-" else "") + body)
        else:
            parts.append(f" {sign} {body}")
    return "".join(parts)


_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+)|(?P<var>x\s*\[(?P<idx>[^\]]*)\])|(?P<op>[-+*/^]))")


def _tokenize(text):
    pos = 0
    tokens = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        mt = _TOKEN.match(text, pos)
        if not mt:
            start = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise PolynomialSyntaxError(f"unexpected character {text[start]!r}", start)
        start = mt.start(mt.lastgroup)
        if mt.group("num") is not None:
            tokens.append(("num", int(mt.group("num")), start))
        elif mt.group("var") is not None:
            tokens.append(("var", mt.group("idx"), start))
        else:
            tokens.append((mt.group("op"), None, start))
        pos = mt.end()
    tokens.append(("end", None, len(text)))
    return tokens


def parse_polynomial(text, space):
    """Parse the textual polynomial grammar into a canonical Polynomial."""
    tokens = _tokenize(text)
    pos = 0

    def peek():
        return tokens[pos]

    def take(kind=None):
        nonlocal pos
        tok = tokens[pos]
        if kind is not None and tok[0] != kind:
            raise PolynomialSyntaxError(f"expected {kind}, found {tok[0]!r}", tok[2])
        pos += 1
        return tok

    def variable(raw, at):
        try:
            parts = [int(s) for s in raw.split(",")]
        except ValueError:
            raise PolynomialSyntaxError(f"bad variable index [{raw}]", at) from None
        if space.is_matrix:
            if len(parts) != 3:
                raise PolynomialSyntaxError("matrix variables take three indices", at)
            i, j, k = (q - 1 for q in parts)
            if not (0 <= i < space.m and 0 <= j < space.n and 0 <= k < space.n):
                raise VariableIndexError(f"variable x[{raw}] out of range at position {at}")
            return space.index(i, j, k)
        if len(parts) != 1:
            raise PolynomialSyntaxError("generic variables take one index", at)
        v = parts[0] - 1
        if not 0 <= v < space.size:
            raise VariableIndexError(f"variable x[{raw}] out of range at position {at}")
        return v

    def factor():
        tok = take()
        kind, val, at = tok
        if kind == "num":
            c = Fraction(val)
            if peek()[0] == "/":
                take()
                _, den, dat = take("num")
                if den == 0:
                    raise PolynomialSyntaxError("zero denominator", dat)
                c = Fraction(val, den)
            return c, ()
        if kind == "var":
            v = variable(val, at)
            e = 1
            if peek()[0] == "^":
                take()
                e = take("num")[1]
            return Fraction(1), (((v, e),) if e else ())
        raise PolynomialSyntaxError(f"unexpected {kind!r}", at)

    def term():
        c, mono = factor()
        while peek()[0] == "*":
            take()
            c2, m2 = factor()
            c *= c2
            mono = mono_mul(mono, m2)
        return c, mono

    out = {}
    sign = 1
    if peek()[0] in "+-":
        sign = -1 if take()[0] == "-" else 1
    while True:
        c, mono = term()
        out[mono] = out.get(mono, 0) + sign * c
        kind = peek()[0]
        if kind == "end":
            break
        if kind not in ("+", "-"):
            raise PolynomialSyntaxError(f"unexpected {kind!r}", peek()[2])
        sign = -1 if take()[0] == "-" else 1
    return Polynomial(space, out)


def poly_arith(op, a, b=None):
    """Dispatch for add / mul / scale / negate."""
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "scale":
        return a.scale(b)
    if op == "negate":
        return -a
    raise ValueError(f"unknown operation {op!r}")


def partial_derivative(p, v):
    v = p.space.resolve(v)
    out = {}
    for mono, c in p.terms.items():
        for w, e in mono:
            if w == v:
                key = mono_div_var(mono, v)
                out[key] = out.get(key, 0) + c * e
                break
    return Polynomial(p.space, out)


def mono_multidegree(space, mono):
    deg = [0] * space.grading_rank
    for v, e in mono:
        deg[space.grade(v)] += e
    return tuple(deg)


def multidegree(p):
    """The common N^m degree of every term, or None when p is not multihomogeneous.

    Raises ZeroPolynomialError for the zero polynomial.
    """
    if not p.terms:
        raise ZeroPolynomialError("the zero polynomial has no multidegree")
    degrees = {mono_multidegree(p.space, mono) for mono in p.terms}
    if len(degrees) != 1:
        return None
    return degrees.pop()


def is_homogeneous(p):
    """Homogeneous in total degree (zero counts as homogeneous)."""
    return len({mono_degree(m) for m in p.terms}) <= 1


def homogeneous_components(p):
    parts = {}
    for mono, c in p.terms.items():
        parts.setdefault(mono_multidegree(p.space, mono), {})[mono] = c
    return {d: Polynomial._raw(p.space, t) for d, t in sorted(parts.items())}


def evaluate(p, point):
    """Exact value at ``point`` (a sequence indexed by flat variable, or a mapping)."""
    total = Fraction(0)
    for mono, c in p.terms.items():
        val = c
        for v, e in mono:
            try:
                x = point[v]
            except (KeyError, IndexError):
                raise VariableIndexError(
                    f"point has no coordinate for {p.space.name(v)}") from None
            val *= Fraction(x) ** e
        total += val
    return total


def coefficient_matrix(polys):
    """Rows of coefficients over the union of supports, plus the monomial order used."""
    monos = sorted({m for f in polys for m in f.terms}, key=_order_key)
    index = {m: i for i, m in enumerate(monos)}
    rows = []
    for f in polys:
        row = [Fraction(0)] * len(monos)
        for m, c in f.terms.items():
            row[index[m]] = c
        rows.append(row)
    return rows, monos


def are_independent(polys):
    polys = list(polys)
    if not polys:
        return True
    rows, monos = coefficient_matrix(polys)
    return linalg.rank(rows, len(monos)) == len(polys)


def span_coordinates(p, polys):
    """Coefficients c with p = sum c_i polys[i], or None when p is outside the span.

    ``polys`` must be linearly independent.
    """
    polys = list(polys)
    for f in polys:
        p._check(f)
    rows, monos = coefficient_matrix(polys + [p])
    target = rows.pop()
    n = len(polys)
    if n == 0:
        return [] if p.is_zero() else None
    # Solve sum c_i rows[i] = target via the kernel of [rows; -target]^T.
    system = [[rows[i][k] for i in range(n)] + [-target[k]] for k in range(len(monos))]
    kernel = linalg.nullspace(system, n + 1)
    for b in kernel.basis:
        if b[n]:
            return [b[i] / b[n] for i in range(n)]
    return None


def in_span(p, polys):
    polys = list(polys)
    if not polys:
        return p.is_zero()
    return p in PolynomialSpan(polys)


class PolynomialSpan:
    """The linear span of a polynomial family, prepared for repeated membership tests."""

    def __init__(self, polys):
        self.polys = list(polys)
        if not self.polys:
            raise ValueError("empty family")
        self.space = self.polys[0].space
        for f in self.polys:
            self.polys[0]._check(f)
        rows, monos = coefficient_matrix(self.polys)
        self._index = {m: i for i, m in enumerate(monos)}
        self.subspace = linalg.Subspace.from_vectors(rows, len(monos))

    @property
    def dim(self):
        return self.subspace.dim

    def __contains__(self, p):
        if p.space != self.space:
            raise SpaceMismatchError(f"{p.space} vs {self.space}")
        vec = {}
        for mono, c in p.terms.items():
            i = self._index.get(mono)
            if i is None:
                return False
            vec[i] = c
        return self.subspace.contains_vector(vec)
