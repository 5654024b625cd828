"""Exact arithmetic in a real number field Q(theta).

A :class:`FieldContext` fixes an irreducible monic polynomial ``p`` over Q
together with a rational interval isolating one real root ``theta``.  A
:class:`Scalar` is a coefficient vector ``(c_0, ..., c_{D-1})`` standing for
``sum c_k theta**k``.  Equality is decided symbolically; signs are decided by
bisecting the isolating interval until an exact rational enclosure of the
value excludes zero.
"""
from __future__ import annotations

import math
import threading
from decimal import Decimal, localcontext
from fractions import Fraction
from numbers import Rational

from .errors import (
    ContextMismatch,
    InputError,
    MultipleRootsInInterval,
    NoRootInInterval,
    NotIrreducible,
)

__all__ = [
    "FieldContext",
    "Scalar",
    "make_context",
    "rational_context",
    "sign",
    "compare",
    "to_fraction",
]


def to_fraction(value) -> Fraction:
    """Parse an int, Fraction or rational string (``"p/q"``, ``"-3"``, ``"0.25"``)."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise InputError(f"not a rational literal: {value!r}")
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"not a rational literal: {value!r}") from exc
    raise InputError(f"not a rational literal: {value!r}")


# -- dense univariate polynomials over Q, ascending coefficient tuples ---------

def _trim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def _peval(p, x):
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def _pmul(p, q):
    if not p or not q:
        return []
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return _trim(out)


def _psub(p, q):
    n = max(len(p), len(q))
    return _trim([(p[i] if i < len(p) else 0) - (q[i] if i < len(q) else 0) for i in range(n)])


def _pdivmod(p, q):
    p = _trim(p)
    q = _trim(q)
    quot = [Fraction(0)] * max(len(p) - len(q) + 1, 1)
    rem = list(p)
    lead = q[-1]
    while len(rem) >= len(q) and rem:
        shift = len(rem) - len(q)
        f = rem[-1] / lead
        quot[shift] = f
        for i, c in enumerate(q):
            rem[shift + i] -= f * c
        rem = _trim(rem)
    return _trim(quot), rem


def _pinverse_mod(q, p):
    """Return ``s`` with ``q*s = 1 (mod p)``; ``q`` must be coprime to ``p``."""
    r0, r1 = _trim(p), _trim(q)
    s0, s1 = [], [Fraction(1)]
    while len(r1) > 1:
        quo, rem = _pdivmod(r0, r1)
        r0, r1 = r1, rem
        s0, s1 = s1, _psub(s0, _pmul(quo, s1))
        if not r1:
            raise ZeroDivisionError("polynomial not invertible modulo the minimal polynomial")
    if not r1:
        raise ZeroDivisionError("polynomial not invertible modulo the minimal polynomial")
    inv = 1 / r1[0]
    return [c * inv for c in s1]


def _interval_mul(a, b, lo, hi):
    prods = (a * lo, a * hi, b * lo, b * hi)
    return min(prods), max(prods)


def _interval_eval(coeffs, lo, hi):
    """Exact rational enclosure of ``sum coeffs[k] t**k`` for ``t`` in ``[lo, hi]``."""
    a = b = Fraction(0)
    for c in reversed(coeffs):
        a, b = _interval_mul(a, b, lo, hi)
        a += c
        b += c
    return a, b


class FieldContext:
    """A real number field ``Q(theta)`` with a certified isolating interval.

    ``min_poly`` lists coefficients in ascending degree order; the polynomial
    is made monic.  Degree one means plain rational arithmetic.
    """

    def __init__(self, min_poly, interval):
        coeffs = _trim(to_fraction(c) for c in min_poly)
        if len(coeffs) < 2:
            raise InputError("minimal polynomial must be nonconstant")
        lead = coeffs[-1]
        self.min_poly = tuple(c / lead for c in coeffs)
        self.degree = len(self.min_poly) - 1
        lo, hi = (to_fraction(v) for v in interval)
        if not lo < hi:
            raise InputError("isolating interval needs lo < hi")
        self._lock = threading.Lock()
        p = self.min_poly
        if self.degree == 1:
            root = -p[0]
            if not lo <= root <= hi:
                raise NoRootInInterval(f"root {root} lies outside [{lo}, {hi}]")
            self._lo = self._hi = root
        else:
            _check_irreducible_and_isolated(p, lo, hi)
            self._lo, self._hi = lo, hi
            self._lo_sign = 1 if _peval(p, lo) > 0 else -1
        self.interval = (lo, hi)
        # reduction table: theta**k as a D-vector for k = D .. 2D-2
        d = self.degree
        powers = {}
        cur = [-c for c in p[:-1]]
        for k in range(d, 2 * d - 1):
            powers[k] = tuple(cur)
            top = cur[-1]
            cur = [Fraction(0)] + cur[:-1]
            if top:
                for i in range(d):
                    cur[i] -= top * p[i]
        self._powers = powers
        self.zero = Scalar(self, (Fraction(0),) * d)
        self.one = Scalar(self, (Fraction(1),) + (Fraction(0),) * (d - 1))

    # -- identity -----------------------------------------------------------
    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, FieldContext) or self.min_poly != other.min_poly:
            return False
        if self.degree == 1:
            return True
        lo = max(self._lo, other._lo)
        hi = min(self._hi, other._hi)
        if lo > hi:
            return False
        return _peval(self.min_poly, lo) * _peval(self.min_poly, hi) < 0

    def __hash__(self):
        return hash(self.min_poly)

    def __repr__(self):
        return f"FieldContext(min_poly={[str(c) for c in self.min_poly]}, interval={[str(v) for v in self.interval]})"

    @property
    def is_rational(self) -> bool:
        return self.degree == 1

    @property
    def theta(self) -> "Scalar":
        if self.degree == 1:
            return Scalar(self, (self._lo,))
        return Scalar(self, (Fraction(0), Fraction(1)) + (Fraction(0),) * (self.degree - 2))

    # -- root refinement ----------------------------------------------------
    def root_enclosure(self, width=None):
        """Current (or refined to ``width``) rational interval around theta."""
        if self.degree == 1 or width is None:
            return self._lo, self._hi
        with self._lock:
            p = self.min_poly
            lo, hi = self._lo, self._hi
            while hi - lo > width:
                mid = (lo + hi) / 2
                v = _peval(p, mid)
                if (v > 0) == (self._lo_sign > 0):
                    lo = mid
                else:
                    hi = mid
            self._lo, self._hi = lo, hi
            return lo, hi

    # -- construction ---------------------------------------------------------
    def __call__(self, value) -> "Scalar":
        """Coerce an int, Fraction, rational string, coefficient list or Scalar."""
        if isinstance(value, Scalar):
            if value.ctx is not self and value.ctx != self:
                raise ContextMismatch("scalar belongs to a different field")
            return value
        if isinstance(value, (list, tuple)):
            if len(value) > self.degree:
                raise InputError(f"coefficient vector longer than field degree {self.degree}")
            cs = [to_fraction(c) for c in value]
            cs += [Fraction(0)] * (self.degree - len(cs))
            return Scalar(self, tuple(cs))
        c0 = to_fraction(value)
        if self.degree == 1:
            return Scalar(self, (c0,))
        return Scalar(self, (c0,) + (Fraction(0),) * (self.degree - 1))

    def vector(self, values):
        return tuple(self(v) for v in values)

    def matrix(self, rows):
        return [list(self.vector(r)) for r in rows]


def _check_irreducible_and_isolated(p, lo, hi):
    import sympy

    t = sympy.Symbol("t")
    poly = sympy.Poly(list(reversed([sympy.Rational(c.numerator, c.denominator) for c in p])), t, domain="QQ")
    if not poly.is_irreducible:
        raise NotIrreducible(f"minimal polynomial {poly.as_expr()} is reducible over Q")
    lo_s = sympy.Rational(lo.numerator, lo.denominator)
    hi_s = sympy.Rational(hi.numerator, hi.denominator)
    count = poly.count_roots(lo_s, hi_s)
    if count == 0:
        raise NoRootInInterval(f"no root of {poly.as_expr()} in [{lo}, {hi}]")
    if count > 1:
        raise MultipleRootsInInterval(f"{count} roots of {poly.as_expr()} in [{lo}, {hi}]")


def make_context(min_poly, interval) -> FieldContext:
    return FieldContext(min_poly, interval)


_RATIONALS = None


def rational_context() -> FieldContext:
    """The shared degree-one context ``Q`` (theta = 0)."""
    global _RATIONALS
    if _RATIONALS is None:
        _RATIONALS = FieldContext([0, 1], (-1, 1))
    return _RATIONALS


class Scalar:
    """Immutable element of a :class:`FieldContext`."""

    __slots__ = ("ctx", "coeffs", "_sign")

    def __init__(self, ctx: FieldContext, coeffs):
        self.ctx = ctx
        self.coeffs = coeffs if type(coeffs) is tuple else tuple(coeffs)
        self._sign = None

    # -- coercion -------------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, Scalar):
            if other.ctx is not self.ctx and other.ctx != self.ctx:
                raise ContextMismatch("scalars belong to different fields")
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.ctx(other)
        return None

    @property
    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    # -- ring operations ---------------------------------------------------------
    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Scalar(self.ctx, tuple(a + b for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Scalar(self.ctx, tuple(a - b for a, b in zip(self.coeffs, o.coeffs)))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __neg__(self):
        return Scalar(self.ctx, tuple(-a for a in self.coeffs))

    def __pos__(self):
        return self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return Scalar(self.ctx, tuple(a * other for a in self.coeffs))
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        d = self.ctx.degree
        if d == 1:
            return Scalar(self.ctx, (self.coeffs[0] * o.coeffs[0],))
        prod = [Fraction(0)] * (2 * d - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(o.coeffs):
                    if b:
                        prod[i + j] += a * b
        out = prod[:d]
        for k in range(d, 2 * d - 1):
            c = prod[k]
            if c:
                for i, pk in enumerate(self.ctx._powers[k]):
                    out[i] += c * pk
        return Scalar(self.ctx, tuple(out))

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        if self.is_zero():
            raise ZeroDivisionError("division by zero scalar")
        d = self.ctx.degree
        if self.is_rational:
            return Scalar(self.ctx, (1 / self.coeffs[0],) + (Fraction(0),) * (d - 1))
        inv = _pinverse_mod(_trim(self.coeffs), self.ctx.min_poly)
        inv = list(inv) + [Fraction(0)] * (d - len(inv))
        return Scalar(self.ctx, tuple(inv))

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return Scalar(self.ctx, tuple(a / other for a in self.coeffs))
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result, base = self.ctx.one, self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- order ------------------------------------------------------------------
    def enclosure(self, width=None):
        """Exact rational interval ``(a, b)`` containing the value, ``b - a <= width``."""
        if self.is_rational:
            return self.coeffs[0], self.coeffs[0]
        ctx = self.ctx
        lo, hi = ctx.root_enclosure()
        a, b = _interval_eval(self.coeffs, lo, hi)
        if width is None:
            return a, b
        step = hi - lo
        while b - a > width:
            step /= 2 ** 16
            lo, hi = ctx.root_enclosure(step)
            a, b = _interval_eval(self.coeffs, lo, hi)
        return a, b

    def sign(self) -> int:
        s = self._sign
        if s is not None:
            return s
        if self.is_rational:
            c = self.coeffs[0]
            s = (c > 0) - (c < 0)
        else:
            ctx = self.ctx
            lo, hi = ctx.root_enclosure()
            step = hi - lo
            while True:
                a, b = _interval_eval(self.coeffs, lo, hi)
                if a > 0:
                    s = 1
                    break
                if b < 0:
                    s = -1
                    break
                step /= 2 ** 16
                lo, hi = ctx.root_enclosure(step)
        self._sign = s
        return s

    def _cmp(self, other):
        o = self._coerce(other)
        if o is None:
            return None
        return (self - o).sign()

    def __lt__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c < 0

    def __le__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c <= 0

    def __gt__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c > 0

    def __ge__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c >= 0

    def __eq__(self, other):
        if isinstance(other, Scalar):
            return self.coeffs == other.coeffs and (self.ctx is other.ctx or self.ctx == other.ctx)
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.is_rational and self.coeffs[0] == other
        return NotImplemented

    def __hash__(self):
        if self.is_rational:
            return hash(self.coeffs[0])
        return hash(self.coeffs)

    def __bool__(self):
        return not self.is_zero()

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __floor__(self):
        if self.is_rational:
            return math.floor(self.coeffs[0])
        width = Fraction(1, 2)
        while True:
            a, b = self.enclosure(width)
            if math.floor(a) == math.floor(b):
                return math.floor(a)
            width /= 2 ** 16

    def __ceil__(self):
        return -math.floor(-self)

    def to_fraction(self) -> Fraction:
        if not self.is_rational:
            raise ValueError("scalar is irrational")
        return self.coeffs[0]

    def approx(self, bits: int = 64) -> Fraction:
        """Rational within ``2**-bits`` of the value (relative to max(1, |x|))."""
        if self.is_rational:
            return self.coeffs[0]
        a, b = self.enclosure(1)
        scale = max(1, abs(a), abs(b))
        a, b = self.enclosure(scale / Fraction(2) ** bits)
        return (a + b) / 2

    def __float__(self):
        return float(self.approx(60))

    def decimal(self, digits: int = 30) -> str:
        if self.is_zero():
            return "0"
        a, b = self.enclosure(1)
        mag = max(abs(a), abs(b), Fraction(1, 10 ** 6))
        exp = math.floor(math.log10(mag)) if mag >= 1 else -len(str(int(1 / mag)))
        a, b = self.enclosure(Fraction(1, 10) ** max(digits - exp + 5, 1))
        mid = (a + b) / 2
        with localcontext() as dctx:
            dctx.prec = digits
            return str(Decimal(mid.numerator) / Decimal(mid.denominator))

    def __repr__(self):
        return f"Scalar({self})"

    def __str__(self):
        if self.ctx.degree == 1:
            return str(self.coeffs[0])
        terms = []
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            mono = "" if k == 0 else ("θ" if k == 1 else f"θ^{k}")
            if k == 0:
                terms.append(str(c))
            elif c == 1:
                terms.append(mono)
            elif c == -1:
                terms.append("-" + mono)
            else:
                terms.append(f"{c}*{mono}")
        return " + ".join(terms).replace("+ -", "- ") if terms else "0"


def sign(x) -> int:
    if isinstance(x, Scalar):
        return x.sign()
    return (x > 0) - (x < 0)


def compare(x, y) -> int:
    """Sign of ``x - y``."""
    return sign(x - y)
