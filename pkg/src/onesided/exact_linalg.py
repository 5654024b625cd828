"""Exact linear algebra over an ordered field and over the integers.

Matrices are plain lists of rows.  Entries may be :class:`Scalar` values or
Python ``Fraction``/``int`` values; every routine only uses field operations
and comparisons with zero, so the same code serves Q(theta) and Q.
"""
from __future__ import annotations

import math
from fractions import Fraction

from .errors import InconsistentSystem
from .scalar_field import Scalar

__all__ = [
    "transpose",
    "matmul",
    "matvec",
    "rref",
    "rank",
    "rank_q",
    "kernel",
    "solve",
    "rational_components",
    "smith_normal_form",
    "integer_kernel",
    "solve_integer",
    "primitive_integer_vector",
    "int_det",
    "xgcd",
    "gcd_with_cofactors",
    "lll_reduce",
]


def transpose(M):
    return [list(col) for col in zip(*M)] if M else []


def matmul(A, B):
    Bt = transpose(B)
    return [[sum((a * b for a, b in zip(row, col)), start=0) for col in Bt] for row in A]


def matvec(M, v):
    return [sum((a * b for a, b in zip(row, v)), start=0) for row in M]


def _zero_like(M):
    for row in M:
        for x in row:
            if isinstance(x, Scalar):
                return x.ctx.zero
    return Fraction(0)


def rref(M, augment=None):
    """Reduced row echelon form.

    Pivot choice is the first nonzero entry scanning rows downward in the
    current column.  Returns ``(R, pivots, A)`` where ``A`` is ``augment``
    transformed by the same row operations (or ``None``).
    """
    R = [list(r) for r in M]
    A = [list(r) for r in augment] if augment is not None else None
    nrows = len(R)
    ncols = len(R[0]) if R else 0
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if R[i][c] != 0), None)
        if piv is None:
            continue
        if piv != r:
            R[r], R[piv] = R[piv], R[r]
            if A is not None:
                A[r], A[piv] = A[piv], A[r]
        inv = 1 / R[r][c]
        R[r] = [x * inv for x in R[r]]
        if A is not None:
            A[r] = [x * inv for x in A[r]]
        for i in range(nrows):
            if i != r and R[i][c] != 0:
                f = R[i][c]
                R[i] = [x - f * y for x, y in zip(R[i], R[r])]
                if A is not None:
                    A[i] = [x - f * y for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
    return R, pivots, A


def rank(M) -> int:
    if not M or not M[0]:
        return 0
    return len(rref(M)[1])


def rank_q(M) -> int:
    """Exact rank of a rational matrix."""
    return rank([[Fraction(x) for x in row] for row in M])


def _normalize_first(v):
    lead = next((x for x in v if x != 0), None)
    if lead is None or lead == 1:
        return v
    inv = 1 / lead
    return [x * inv for x in v]


def kernel(M, ncols=None):
    """Basis of the right null space; each vector's first nonzero entry is 1."""
    if not M:
        if ncols is None:
            return []
        one = Fraction(1)
        return [[one if i == j else Fraction(0) for i in range(ncols)] for j in range(ncols)]
    R, pivots, _ = rref(M)
    n = len(M[0])
    zero = _zero_like(M)
    one = zero + 1
    basis = []
    free = [c for c in range(n) if c not in pivots]
    for f in free:
        v = [zero] * n
        v[f] = one
        for row, pc in enumerate(pivots):
            v[pc] = -R[row][f]
        basis.append(_normalize_first(v))
    return basis


def solve(M, b):
    """One exact solution ``x`` of ``M x = b``.

    Free variables are set to zero.  Raises :class:`InconsistentSystem` with a
    left certificate ``u`` (``u M = 0``, ``u b != 0``) when none exists.
    """
    m = len(M)
    if len(b) != m:
        raise ValueError("right-hand side length does not match matrix rows")
    zero = _zero_like(M) if M else _zero_like([b])
    if m == 0:
        return []
    n = len(M[0])
    one = zero + 1
    aug = [list(M[i]) + [b[i]] for i in range(m)]
    ident = [[one if i == j else zero for j in range(m)] for i in range(m)]
    R, pivots, U = rref(aug, ident)
    if n in pivots:
        row = pivots.index(n)
        raise InconsistentSystem(_normalize_first(U[row]))
    x = [zero] * n
    for row, pc in enumerate(pivots):
        x[pc] = R[row][n]
    return x


def rational_components(v):
    """Split a vector of Scalars into its D rational coefficient slices."""
    v = list(v)
    if not v:
        return []
    if not isinstance(v[0], Scalar):
        return [[Fraction(x) for x in v]]
    d = v[0].ctx.degree
    return [[x.coeffs[k] for x in v] for k in range(d)]


# -- integer matrices -------------------------------------------------------------

def xgcd(a: int, b: int):
    """Return ``(g, x, y)`` with ``a*x + b*y = g = gcd(a, b) >= 0``."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def gcd_with_cofactors(values):
    """gcd of a list of ints together with Bezout cofactors."""
    g, coeffs = 0, []
    for i, v in enumerate(values):
        g2, x, y = xgcd(g, v)
        coeffs = [c * x for c in coeffs] + [y]
        g = g2
    return g, coeffs


def _identity(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def smith_normal_form(M):
    """Return ``(U, S, V)`` with ``U M V = S`` diagonal, ``d_1 | d_2 | ...``.

    ``U`` and ``V`` are unimodular.  Entries of ``M`` must be integers.
    """
    S = [[int(x) for x in row] for row in M]
    m = len(S)
    n = len(S[0]) if m else 0
    U = _identity(m)
    V = _identity(n)

    def swap_rows(i, j):
        S[i], S[j] = S[j], S[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in S:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    t = 0
    while t < min(m, n):
        nz = [(abs(S[i][j]), i, j) for i in range(t, m) for j in range(t, n) if S[i][j]]
        if not nz:
            break
        _, i, j = min(nz)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            changed = False
            for i in range(t + 1, m):
                if S[i][t] and S[i][t] % S[t][t] == 0:
                    q = S[i][t] // S[t][t]
                    S[i] = [p - q * r for p, r in zip(S[i], S[t])]
                    U[i] = [p - q * r for p, r in zip(U[i], U[t])]
                elif S[i][t]:
                    g, x, y = xgcd(S[t][t], S[i][t])
                    a, b = S[t][t] // g, S[i][t] // g
                    rt, ri = S[t], S[i]
                    S[t] = [x * p + y * q for p, q in zip(rt, ri)]
                    S[i] = [-b * p + a * q for p, q in zip(rt, ri)]
                    ut, ui = U[t], U[i]
                    U[t] = [x * p + y * q for p, q in zip(ut, ui)]
                    U[i] = [-b * p + a * q for p, q in zip(ut, ui)]
                    changed = True
            for j in range(t + 1, n):
                if S[t][j] and S[t][j] % S[t][t] == 0:
                    q = S[t][j] // S[t][t]
                    for row in S:
                        row[j] -= q * row[t]
                    for row in V:
                        row[j] -= q * row[t]
                elif S[t][j]:
                    g, x, y = xgcd(S[t][t], S[t][j])
                    a, b = S[t][t] // g, S[t][j] // g
                    for row in S:
                        p, q = row[t], row[j]
                        row[t], row[j] = x * p + y * q, -b * p + a * q
                    for row in V:
                        p, q = row[t], row[j]
                        row[t], row[j] = x * p + y * q, -b * p + a * q
                    changed = True
            if not changed:
                break
        # enforce divisibility of the remaining block by the pivot
        d = S[t][t]
        bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if S[i][j] % d), None)
        if bad is not None:
            i = bad[0]
            S[t] = [p + q for p, q in zip(S[t], S[i])]
            U[t] = [p + q for p, q in zip(U[t], U[i])]
            continue
        if d < 0:
            S[t] = [-p for p in S[t]]
            U[t] = [-p for p in U[t]]
        t += 1
    return U, S, V


def _integerize_rows(M):
    out = []
    for row in M:
        fr = [Fraction(x) for x in row]
        den = math.lcm(*(x.denominator for x in fr)) if fr else 1
        out.append([int(x * den) for x in fr])
    return out


def integer_kernel(M, ncols=None):
    """Basis (as rows) of the saturated lattice ``{x in Z^n : M x = 0}``.

    ``M`` is a rational matrix.
    """
    if not M:
        return _identity(ncols or 0)
    A = _integerize_rows(M)
    _, S, V = smith_normal_form(A)
    n = len(A[0])
    r = sum(1 for i in range(min(len(S), n)) if S[i][i])
    return [[V[i][j] for i in range(n)] for j in range(r, n)]


def solve_integer(M, z):
    """An integer ``x`` with ``M x = z`` (integer ``M``, ``z``), or ``None``."""
    m = len(M)
    if m == 0:
        return None
    n = len(M[0])
    U, S, V = smith_normal_form(M)
    c = [sum(U[i][k] * z[k] for k in range(m)) for i in range(m)]
    y = [0] * n
    for i in range(m):
        d = S[i][i] if i < n else 0
        if d == 0:
            if c[i]:
                return None
        else:
            if c[i] % d:
                return None
            y[i] = c[i] // d
    return [sum(V[i][k] * y[k] for k in range(n)) for i in range(n)]


def primitive_integer_vector(v):
    """Scale a rational vector to a primitive integer vector (same direction)."""
    fr = [Fraction(x) for x in v]
    den = math.lcm(*(x.denominator for x in fr)) if fr else 1
    ints = [int(x * den) for x in fr]
    g = math.gcd(*ints)
    return [x // g for x in ints] if g else ints


def int_det(M) -> int:
    """Determinant of a square integer matrix (Bareiss)."""
    A = [list(map(int, r)) for r in M]
    n = len(A)
    if n == 0:
        return 1
    sgn, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if A[i][k]), None)
            if swap is None:
                return 0
            A[k], A[swap] = A[swap], A[k]
            sgn = -sgn
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sgn * A[n - 1][n - 1]


def lll_reduce(B):
    """LLL-reduce the integer row basis ``B`` (rows must be independent)."""
    from sympy.polys.domains import ZZ
    from sympy.polys.matrices import DomainMatrix

    dm = DomainMatrix([[ZZ(int(x)) for x in row] for row in B], (len(B), len(B[0])), ZZ)
    return [[int(x) for x in row] for row in dm.lll().to_list()]
