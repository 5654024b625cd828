"""Exact two-phase simplex with Bland's rule, plus Gordan and Farkas alternatives.

All LPs are in equality form: maximize ``c.x`` subject to ``A x = b``,
``x >= 0``.  Every outcome carries a certificate that can be checked with
field arithmetic alone (see :func:`verify_lp_result`).
"""
from __future__ import annotations

import contextvars
import math
from dataclasses import dataclass
from fractions import Fraction

from .exact_linalg import _zero_like, matvec, transpose
from .scalar_field import Scalar

__all__ = [
    "Optimal",
    "Infeasible",
    "Unbounded",
    "solve_lp",
    "verify_lp_result",
    "GordanResult",
    "FarkasResult",
    "gordan",
    "farkas",
    "pivot_trace",
]

# When set to a list, solve_lp appends (phase, entering, leaving_row) tuples.
pivot_trace: contextvars.ContextVar = contextvars.ContextVar("pivot_trace", default=None)


@dataclass(frozen=True)
class Optimal:
    x: tuple
    value: object
    dual: tuple  # y with y A >= c and y b = value


@dataclass(frozen=True)
class Infeasible:
    certificate: tuple  # y with y A <= 0 and y b > 0


@dataclass(frozen=True)
class Unbounded:
    x: tuple
    ray: tuple  # d >= 0, A d = 0, c.d > 0


def _dot(u, v, zero):
    return sum((a * b for a, b in zip(u, v)), start=zero)


class _Tableau:
    """Tableau ``B^-1 [A | I | b]`` with the artificial block kept for duals."""

    def __init__(self, A, b, zero):
        m = len(A)
        n = len(A[0]) if m else 0
        one = zero + 1
        self.m, self.n, self.zero = m, n, zero
        self.flip = []
        rows = []
        for i in range(m):
            s = -1 if b[i] < 0 else 1
            self.flip.append(s)
            row = [a * s for a in A[i]]
            row += [one if j == i else zero for j in range(m)]
            row.append(b[i] * s)
            rows.append(row)
        self.T = rows
        self.basis = [n + i for i in range(m)]

    def pivot(self, r, j, phase):
        trace = pivot_trace.get()
        if trace is not None:
            trace.append((phase, j, self.basis[r]))
        T = self.T
        inv = 1 / T[r][j]
        T[r] = [x * inv for x in T[r]]
        pr = T[r]
        for i in range(self.m):
            if i != r:
                f = T[i][j]
                if f != 0:
                    T[i] = [x - f * y for x, y in zip(T[i], pr)]
        self.basis[r] = j

    def reduced_costs(self, cost, allowed):
        """Reduced profits ``c_j - c_B B^-1 A_j`` for columns in ``allowed``."""
        T, basis = self.T, self.basis
        cb = [cost[k] for k in basis]
        out = {}
        for j in allowed:
            d = cost[j]
            for i in range(self.m):
                if cb[i] != 0 and T[i][j] != 0:
                    d = d - cb[i] * T[i][j]
            out[j] = d
        return out

    def run(self, cost, allowed, phase):
        """Bland's rule; returns ``None`` at optimum or an unbounded column."""
        T = self.T
        while True:
            d = self.reduced_costs(cost, allowed)
            entering = next((j for j in allowed if d[j] > 0), None)
            if entering is None:
                return None
            best = None
            for i in range(self.m):
                a = T[i][entering]
                if a > 0:
                    ratio = T[i][-1] / a
                    key = (ratio, self.basis[i])
                    if best is None or ratio < best[0] or (ratio == best[0] and self.basis[i] < best[1]):
                        best = (ratio, self.basis[i], i)
            if best is None:
                return entering
            self.pivot(best[2], entering, phase)

    def dual(self, cost):
        """``y = c_B B^-1`` mapped back to the unflipped rows."""
        n, m, zero = self.n, self.m, self.zero
        cb = [cost[k] for k in self.basis]
        y = []
        for i in range(m):
            acc = zero
            for r in range(m):
                if cb[r] != 0:
                    acc = acc + cb[r] * self.T[r][n + i]
            y.append(acc * self.flip[i])
        return tuple(y)

    def primal(self, nvars):
        x = [self.zero] * nvars
        for i, k in enumerate(self.basis):
            if k < nvars:
                x[k] = self.T[i][-1]
        return tuple(x)


def solve_lp(A, b, c, zero=None):
    """Maximize ``c.x`` s.t. ``A x = b``, ``x >= 0`` in exact arithmetic.

    Returns :class:`Optimal`, :class:`Infeasible` or :class:`Unbounded`.
    """
    A = [list(r) for r in A]
    m = len(A)
    n = len(c)
    if zero is None:
        zero = _zero_like(A + [list(b), list(c)])
    one = zero + 1
    if m == 0:
        if any(cj > 0 for cj in c):
            j = next(j for j, cj in enumerate(c) if cj > 0)
            return Unbounded(tuple([zero] * n), tuple(one if k == j else zero for k in range(n)))
        return Optimal(tuple([zero] * n), zero, ())
    tab = _Tableau(A, b, zero)
    total = n + m
    # phase 1: maximize -sum(artificials)
    cost1 = [zero] * n + [-one] * m
    tab.run(cost1, list(range(total)), 1)
    value1 = sum((tab.T[i][-1] for i in range(m) if tab.basis[i] >= n), start=zero)
    if value1 > 0:
        y = tab.dual(cost1)
        return Infeasible(tuple(-v for v in y))
    # drive zero-level artificials out of the basis where possible
    for i in range(m):
        if tab.basis[i] >= n:
            j = next((j for j in range(n) if tab.T[i][j] != 0), None)
            if j is not None:
                tab.pivot(i, j, 1)
    cost2 = list(c) + [zero] * m
    col = tab.run(cost2, list(range(n)), 2)
    x = tab.primal(n)
    if col is not None:
        ray = [zero] * n
        ray[col] = one
        for i, k in enumerate(tab.basis):
            if k < n:
                ray[k] = -tab.T[i][col]
        return Unbounded(x, tuple(ray))
    return Optimal(x, _dot(c, x, zero), tab.dual(cost2))


def verify_lp_result(A, b, c, res) -> bool:
    """Check an LP outcome's certificate exactly."""
    At = transpose(A) if A else [[] for _ in c]
    if isinstance(res, Optimal):
        x, y = res.x, res.dual
        if any(v < 0 for v in x):
            return False
        if any(lhs != rhs for lhs, rhs in zip(matvec(A, x), b)):
            return False
        if _dot(c, x, 0) != res.value:
            return False
        # dual feasibility and zero duality gap
        if any(_dot(y, col, 0) < cj for col, cj in zip(At, c)):
            return False
        return _dot(y, b, 0) == res.value
    if isinstance(res, Infeasible):
        y = res.certificate
        if any(_dot(y, col, 0) > 0 for col in At):
            return False
        return _dot(y, b, 0) > 0
    if isinstance(res, Unbounded):
        x, d = res.x, res.ray
        if any(v < 0 for v in x) or any(v < 0 for v in d):
            return False
        if any(lhs != rhs for lhs, rhs in zip(matvec(A, x), b)):
            return False
        if any(v != 0 for v in matvec(A, d)):
            return False
        return _dot(c, d, 0) > 0
    return False


# -- theorems of the alternative -----------------------------------------------

@dataclass(frozen=True)
class GordanResult:
    """Exactly one of ``y`` (alternative i) or ``x`` (alternative ii) is set.

    Alternative (i): ``y >= 0``, ``y != 0``, ``A y^t = 0``.
    Alternative (ii): integer ``x`` with ``x A`` strictly positive.
    """

    alternative: int
    y: tuple | None = None
    x: tuple | None = None

    def verify(self, A, ncols=None) -> bool:
        n = len(A[0]) if A else (ncols or 0)
        if self.alternative == 1:
            y = self.y
            if y is None or self.x is not None or len(y) != n:
                return False
            if any(v < 0 for v in y) or all(v == 0 for v in y):
                return False
            return all(v == 0 for v in matvec(A, y))
        if self.alternative == 2:
            x = self.x
            if x is None or self.y is not None or len(x) != len(A):
                return False
            if not all(isinstance(v, int) for v in x):
                return False
            xa = matvec(transpose(A), x) if A else [0] * n
            return all(v > 0 for v in xa)
        return False


@dataclass(frozen=True)
class FarkasResult:
    """Alternative (i): ``y >= 0``, ``A y^t = 0``, ``b.y < 0``.
    Alternative (ii): ``x`` with ``x A <= b``.
    """

    alternative: int
    y: tuple | None = None
    x: tuple | None = None

    def verify(self, A, b) -> bool:
        n = len(b)
        if self.alternative == 1:
            y = self.y
            if y is None or self.x is not None or len(y) != n:
                return False
            if any(v < 0 for v in y):
                return False
            if any(v != 0 for v in matvec(A, y)):
                return False
            return _dot(b, y, 0) < 0
        if self.alternative == 2:
            x = self.x
            if x is None or self.y is not None or len(x) != len(A):
                return False
            xa = matvec(transpose(A), x) if A else [0] * n
            return all(lhs <= rhs for lhs, rhs in zip(xa, b))
        return False


def _upper_int(v) -> int:
    """An integer >= |v|."""
    if isinstance(v, Scalar):
        a, b = v.enclosure(1)
        return math.ceil(max(abs(a), abs(b)))
    return math.ceil(abs(Fraction(v)))


def _rational_near(v, tol: Fraction) -> Fraction:
    if isinstance(v, Scalar):
        if v.is_rational:
            return v.coeffs[0]
        a, b = v.enclosure(tol)
        return (a + b) / 2
    return Fraction(v)


def gordan(A, ncols=None) -> GordanResult:
    """Gordan's alternative for the ``m x n`` matrix ``A``.

    Alternative (i) is found as a basic solution of ``A y = 0, sum y = 1,
    y >= 0``; otherwise the phase-one certificate gives ``x`` with
    ``x A >= 1``, which is rounded to rationals and scaled to integers.
    """
    m = len(A)
    n = len(A[0]) if m else (ncols or 0)
    zero = _zero_like(A) if m else Fraction(0)
    one = zero + 1
    if n == 0:
        return GordanResult(2, x=tuple([0] * m))
    rows = [list(r) for r in A] + [[one] * n]
    rhs = [zero] * m + [one]
    res = solve_lp(rows, rhs, [zero] * n, zero=zero)
    if isinstance(res, Optimal):
        return GordanResult(1, y=res.x)
    cert = res.certificate
    w, t = cert[:m], cert[m]
    x0 = [-wi / t for wi in w]  # x0 A >= 1 exactly
    amax = max((_upper_int(v) for row in A for v in row), default=1) or 1
    tol = Fraction(1, 2 * m * amax)
    xq = [_rational_near(v, tol) for v in x0]
    den = math.lcm(*(q.denominator for q in xq))
    xi = [int(q * den) for q in xq]
    g = math.gcd(*xi)
    if g > 1:
        xi = [v // g for v in xi]
    out = GordanResult(2, x=tuple(xi))
    if not out.verify(A, n):
        raise AssertionError("integer Gordan certificate failed verification")
    return out


def farkas(A, b) -> FarkasResult:
    """Farkas' alternative for ``A`` (``m x n``) and ``b`` (length ``n``).

    Solves ``min b.y`` over ``A y = 0, sum y = 1, y >= 0``.  A negative
    optimum is alternative (i); otherwise ``x`` comes from the LP dual, or,
    when the LP is infeasible, from a scaled phase-one certificate.
    """
    m = len(A)
    n = len(b)
    zero = _zero_like(A + [list(b)]) if (m or n) else Fraction(0)
    one = zero + 1
    if n == 0:
        return FarkasResult(2, x=tuple([zero] * m))
    rows = [list(r) for r in A] + [[one] * n]
    rhs = [zero] * m + [one]
    res = solve_lp(rows, rhs, [-v for v in b], zero=zero)
    if isinstance(res, Optimal):
        if res.value > 0:  # min b.y < 0
            return FarkasResult(1, y=res.x)
        # dual: y_dual rows >= -b  =>  x = -y_dual[:m], t = -y_dual[m] >= 0
        yd = res.dual
        x = tuple(-v for v in yd[:m])
        return FarkasResult(2, x=x)
    cert = res.certificate
    w, t = cert[:m], cert[m]
    base = [wi / t for wi in w]  # base A <= -1
    s = max([zero] + [-v for v in b])
    return FarkasResult(2, x=tuple(s * v for v in base))
