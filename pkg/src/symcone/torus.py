"""Torus null cones: weight systems, origin-in-hull decisions modulo trivial
directions, invariant monomials and maximal coordinate subspaces.

Index sets are collections of 0-based weight indices.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd, lcm

from . import linalg
from .errors import DimensionMismatchError, GuardExceededError

MAX_WEIGHTS = 16


@dataclass(frozen=True)
class WeightSystem:
    weights: tuple
    trivial: linalg.Subspace

    def __post_init__(self):
        for w in self.weights:
            if len(w) != self.trivial.ambient:
                raise DimensionMismatchError(
                    f"weight {list(w)} does not have dimension {self.trivial.ambient}")

    @classmethod
    def build(cls, weights, trivial=(), dim=None):
        weights = tuple(tuple(int(x) for x in w) for w in weights)
        if dim is None:
            if weights:
                dim = len(weights[0])
            elif trivial:
                dim = len(trivial[0])
            else:
                raise DimensionMismatchError("cannot infer the weight dimension")
        return cls(weights, linalg.Subspace.from_vectors([list(t) for t in trivial], dim))

    @property
    def dim(self):
        return self.trivial.ambient

    def __len__(self):
        return len(self.weights)


@dataclass(frozen=True)
class HullCertificate:
    """Convex coefficients (aligned with ``indices``) whose weight combination is trivial."""

    indices: tuple
    coeffs: tuple

    def as_dict(self):
        return {"indices": list(self.indices), "coeffs": [str(c) for c in self.coeffs]}


def _index_set(ws, I):
    I = tuple(sorted(set(I)))
    if not I:
        raise ValueError("index set must be nonempty")
    for i in I:
        if not 0 <= i < len(ws.weights):
            raise IndexError(f"weight index {i} out of range")
    return I


def origin_in_hull(ws, I):
    """A HullCertificate if 0 lies in conv{w_i : i in I} modulo ws.trivial, else None."""
    I = _index_set(ws, I)
    coeffs = linalg.lp_feasible([ws.weights[i] for i in I], ws.trivial)
    if coeffs is None:
        return None
    return HullCertificate(I, tuple(coeffs))


def check_certificate(ws, cert):
    return linalg.check_convex_certificate([ws.weights[i] for i in cert.indices],
                                           ws.trivial, list(cert.coeffs))


def invariant_monomial_witness(ws, I):
    """Primitive natural-number exponent vector a (length len(ws)) supported on I
    with sum a_i w_i in the trivial subspace, or None when 0 is outside the hull."""
    cert = origin_in_hull(ws, I)
    if cert is None:
        return None
    den = 1
    for c in cert.coeffs:
        den = lcm(den, c.denominator)
    a = [0] * len(ws.weights)
    for i, c in zip(cert.indices, cert.coeffs):
        a[i] = int(c * den)
    g = 0
    for x in a:
        g = gcd(g, x)
    a = [x // g for x in a]
    combo = [sum(Fraction(x * w[k]) for x, w in zip(a, ws.weights)) for k in range(ws.dim)]
    assert any(a) and ws.trivial.contains_vector(combo)
    return a


def torus_nullcone_maximal_supports(ws):
    """All inclusion-maximal nonempty I with 0 outside the hull, lexicographically sorted."""
    N = len(ws.weights)
    if N > MAX_WEIGHTS:
        raise GuardExceededError(f"maximal-support enumeration is limited to {MAX_WEIGHTS} weights, got {N}")
    found = []
    for size in range(N, 0, -1):
        for I in combinations(range(N), size):
            s = set(I)
            if any(s <= f for f in found):
                continue
            if origin_in_hull(ws, I) is None:
                found.append(s)
    return sorted(tuple(sorted(f)) for f in found)


def matrix_space_weights(n, m):
    """Left-right torus weights on Mat_n^m: (i, j, k) has weight (e_j ; e_k) in Z^{2n}."""
    weights = []
    for _ in range(m):
        for j in range(n):
            for k in range(n):
                w = [0] * (2 * n)
                w[j] = 1
                w[n + k] = 1
                weights.append(w)
    trivial = [[1] * n + [0] * n, [0] * n + [1] * n]
    return WeightSystem.build(weights, trivial, 2 * n)
