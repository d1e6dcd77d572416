"""Independent reference implementations used only by the tests.

Nothing here imports the elimination, LP or matching code under test.
"""

from fractions import Fraction
from itertools import permutations

import sympy


def perm_sign(p):
    s = 1
    for a in range(len(p)):
        for b in range(a + 1, len(p)):
            if p[a] > p[b]:
                s = -s
    return s


def leibniz_det(A):
    n = len(A)
    total = Fraction(0)
    for p in permutations(range(n)):
        term = Fraction(perm_sign(p))
        for i in range(n):
            term *= A[i][p[i]]
            if not term:
                break
        total += term
    return total


def gauss_rank(A):
    """Plain Gaussian elimination over Fractions."""
    M = [[Fraction(x) for x in row] for row in A]
    if not M:
        return 0
    rows, cols = len(M), len(M[0])
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if M[i][c]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        for i in range(rows):
            if i != r and M[i][c]:
                f = M[i][c] / M[r][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        r += 1
        if r == rows:
            break
    return r


def gauss_kernel(A, ncols):
    """Kernel basis by Gauss-Jordan, returned as plain lists."""
    M = [[Fraction(x) for x in row] for row in A]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(M)) if M[i][c]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        M[r] = [x / M[r][c] for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c]:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
    basis = []
    for f in range(ncols):
        if f in pivots:
            continue
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, p in zip(M, pivots):
            v[p] = -row[f]
        basis.append(v)
    return basis


def contains_permutation(J, n):
    return any(all((i, p[i]) in J for i in range(n)) for p in permutations(range(n)))


# Fourier-Motzkin feasibility of {a >= 0, sum a = 1, sum a_i w_i - sum b_j l_j = 0}

def _normalise(coeffs, rhs):
    lead = next((abs(c) for c in coeffs if c), None)
    if lead is None:
        return tuple(coeffs), rhs
    return tuple(c / lead for c in coeffs), rhs / lead


def fm_feasible(W, L_basis, dim):
    """Decide whether 0 lies in conv(W) modulo span(L_basis) by Fourier-Motzkin."""
    k, s = len(W), len(L_basis)
    nv = k + s
    eqs = []
    for r in range(dim):
        row = [Fraction(w[r]) for w in W] + [-Fraction(l[r]) for l in L_basis]
        eqs.append((row, Fraction(0)))
    eqs.append(([Fraction(1)] * k + [Fraction(0)] * s, Fraction(1)))
    les = []
    for i in range(k):
        row = [Fraction(0)] * nv
        row[i] = Fraction(-1)
        les.append((row, Fraction(0)))
    for var in range(nv):
        src = next((e for e in eqs if e[0][var]), None)
        if src is not None:
            row, rhs = src
            c = row[var]

            def sub(r2, b2):
                f = r2[var] / c
                return [a - f * b for a, b in zip(r2, row)], b2 - f * rhs

            eqs = [sub(*e) for e in eqs if e is not src]
            les = [sub(*e) for e in les]
            continue
        pos = [e for e in les if e[0][var] > 0]
        neg = [e for e in les if e[0][var] < 0]
        rest = [e for e in les if not e[0][var]]
        for rp, bp in pos:
            for rn, bn in neg:
                fp, fn = rp[var], -rn[var]
                row = [fn * a + fp * b for a, b in zip(rp, rn)]
                rest.append((row, fn * bp + fp * bn))
        les = list({_normalise(r, b) for r, b in rest})
        les = [(list(r), b) for r, b in les]
    for row, rhs in eqs:
        if rhs != 0:
            return False
    return all(rhs >= 0 for _, rhs in les)


# symbolic expansions through sympy

def sympy_fe_coefficients(n, m):
    """{e: {monomial over flat variable indices: coefficient}} from det(sum t_i X_i)."""
    t = sympy.symbols(f"t0:{m}")
    x = sympy.symbols(f"x0:{m * n * n}")
    M = sympy.zeros(n, n)
    for i in range(m):
        for j in range(n):
            for k in range(n):
                M[j, k] += t[i] * x[(i * n + j) * n + k]
    det = sympy.Poly(sympy.expand(M.det(method="berkowitz")), *t, *x)
    out = {}
    for exps, c in det.terms():
        e = tuple(exps[:m])
        mono = tuple((v, a) for v, a in enumerate(exps[m:]) if a)
        out.setdefault(e, {})[mono] = Fraction(int(c.p), int(c.q))
    return out


def sympy_symbolic_det_is_zero(X):
    m, n = len(X), len(X[0])
    t = sympy.symbols(f"t0:{m}")
    M = sympy.zeros(n, n)
    for i in range(m):
        for j in range(n):
            for k in range(n):
                M[j, k] += t[i] * sympy.Rational(X[i][j][k].numerator, X[i][j][k].denominator)
    return sympy.expand(M.det(method="berkowitz")) == 0


def kron(A, B):
    return [[a * b for a in ra for b in rb] for ra in A for rb in B]


def unit(n, i, j):
    return [[1 if (r, c) == (i, j) else 0 for c in range(n)] for r in range(n)]


def eye(n):
    return [[1 if r == c else 0 for c in range(n)] for r in range(n)]


def det2_stabilizer_bruteforce():
    """Twisted stabilizer of det on Mat_2 by a hand-rolled 17-unknown system.

    Variables x_{jk} are numbered 2j + k; unknown u*4 + v is M[u][v], unknown 16
    is the eigenvalue c in M * det = c det.
    """
    det = {((0, 3)): 1, ((1, 2)): -1}
    eqs = {}
    for (a, b), coef in det.items():
        for v, other in ((a, b), (b, a)):
            # d/dx_v of x_a x_b is the other factor; x_u times it
            for u in range(4):
                mono = tuple(sorted((u, other)))
                eqs.setdefault(mono, [Fraction(0)] * 17)[u * 4 + v] += coef
        eqs.setdefault(tuple(sorted((a, b))), [Fraction(0)] * 17)[16] -= coef
    kernel = gauss_kernel(list(eqs.values()), 17)
    return [v[:16] for v in kernel]
