"""Density of finitely generated subgroups of R and R^n.

A subgroup of R generated by finitely many numbers in Q(theta) is zero,
cyclic or dense according to the Q-rank (0, 1, >= 2) of their rational
coefficient slices.  For a subgroup ``H`` of ``R^n`` the two-sided property
(density in its real span) fails exactly when some nonzero integer vector
``m`` is of the form ``(phi(h_1), ..., phi(h_s))`` for a linear functional
``phi``; those vectors are found from the left kernel of the generator
matrix, split into rational slices.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import ContextMismatch, InputError
from .exact_linalg import (
    gcd_with_cofactors,
    integer_kernel,
    kernel,
    primitive_integer_vector,
    rank,
    rank_q,
    rational_components,
    solve,
    transpose,
)
from .scalar_field import FieldContext, Scalar, rational_context

__all__ = [
    "SubgroupSpec",
    "LineGroupClass",
    "PropertyA",
    "classify_line_group",
    "property_a",
    "integer_functionals",
    "is_dense",
]


@dataclass(frozen=True)
class SubgroupSpec:
    """The group generated by ``generators`` (rows) inside ``R^n``."""

    n: int
    generators: tuple
    ctx: FieldContext

    @classmethod
    def of(cls, rows, ctx: FieldContext | None = None, n: int | None = None) -> "SubgroupSpec":
        rows = [list(r) for r in rows]
        if ctx is None:
            ctx = next((x.ctx for r in rows for x in r if isinstance(x, Scalar)), None) or rational_context()
        if n is None:
            if not rows:
                raise InputError("ambient dimension needed for an empty generator list")
            n = len(rows[0])
        gens = []
        for r in rows:
            if len(r) != n:
                raise InputError(f"generator {r} does not have {n} coordinates")
            gens.append(ctx.vector(r))
        return cls(n, tuple(gens), ctx)

    @property
    def s(self) -> int:
        return len(self.generators)

    def matrix(self):
        return [list(g) for g in self.generators]

    def element(self, coeffs):
        """The vector ``sum coeffs[j] * h_j``."""
        if len(coeffs) != self.s:
            raise InputError(f"expected {self.s} coefficients, got {len(coeffs)}")
        out = [self.ctx.zero] * self.n
        for c, g in zip(coeffs, self.generators):
            if c:
                out = [o + c * x for o, x in zip(out, g)]
        return tuple(out)

    def project(self, coords) -> "SubgroupSpec":
        coords = list(coords)
        return SubgroupSpec(len(coords), tuple(tuple(g[i] for i in coords) for g in self.generators), self.ctx)

    def values(self, functional):
        """``(phi(h_1), ..., phi(h_s))`` for a coefficient vector ``phi``."""
        return tuple(sum((a * x for a, x in zip(functional, g)), start=self.ctx.zero) for g in self.generators)

    def real_rank(self) -> int:
        return rank(self.matrix()) if self.generators else 0


@dataclass(frozen=True)
class LineGroupClass:
    """Classification of a finitely generated subgroup of R.

    For ``kind == "Discrete"``: ``values[i] == multiples[i] * delta`` and
    ``sum(bezout[i] * multiples[i]) == 1``.
    """

    kind: str
    delta: Scalar | None = None
    multiples: tuple | None = None
    bezout: tuple | None = None


def classify_line_group(values) -> LineGroupClass:
    values = list(values)
    if not values or all(v == 0 for v in values):
        return LineGroupClass("Zero")
    slices = rational_components(values)
    r = rank_q(slices)
    if r >= 2:
        return LineGroupClass("Dense")
    ref = next(v for v in values if v != 0)
    if not isinstance(ref, Scalar):
        ref = rational_context()(ref)
        values = [ref.ctx(v) for v in values]
    k = next(i for i, c in enumerate(ref.coeffs) if c != 0)
    ratios = [v.coeffs[k] / ref.coeffs[k] for v in values]
    den = math.lcm(*(q.denominator for q in ratios))
    nums = [int(q * den) for q in ratios]
    g, cof = gcd_with_cofactors(nums)
    delta = ref * Fraction(g, den)
    if ref < 0:
        delta = -delta
        cof = [-c for c in cof]
        nums = [-v for v in nums]
    multiples = tuple(v // g for v in nums)
    return LineGroupClass("Discrete", delta, multiples, tuple(cof))


def _rational_left_kernel_slices(H: SubgroupSpec):
    """Rational matrix whose kernel is ``{m in Q^s : m = G phi for some phi}``."""
    G = H.matrix()
    left = kernel(transpose(G)) if H.n else [[H.ctx.one if i == j else H.ctx.zero for i in range(H.s)] for j in range(H.s)]
    rows = []
    for u in left:
        rows.extend(rational_components(u))
    return rows


def integer_functionals(H: SubgroupSpec):
    """Row basis of the saturated lattice of integer vectors ``(phi(h_j))_j``.

    These are the values of the functionals mapping ``H`` into ``Z``; the
    lattice is ``{0}`` exactly when ``H`` is dense in its real span.
    """
    if H.s == 0:
        return []
    S = _rational_left_kernel_slices(H)
    return integer_kernel(S, ncols=H.s)


@dataclass(frozen=True)
class PropertyA:
    holds: bool
    witness: tuple | None = None      # nonzero integer m = (phi(h_j))_j
    functional: tuple | None = None   # phi on R^n


def property_a(H: SubgroupSpec) -> PropertyA:
    """Decide whether ``H`` is dense in its real span."""
    if H.s == 0:
        return PropertyA(True)
    S = _rational_left_kernel_slices(H)
    rat = kernel(S, ncols=H.s) if S else kernel([], ncols=H.s)
    if not rat:
        return PropertyA(True)
    m = tuple(primitive_integer_vector(rat[0]))
    phi = solve(H.matrix(), [H.ctx(v) for v in m])
    return PropertyA(False, m, tuple(phi))


def is_dense(H: SubgroupSpec) -> bool:
    """True iff ``H`` is dense in ``R^n`` (full real rank and property (A))."""
    if H.n == 0:
        return True
    return H.real_rank() == H.n and property_a(H).holds


def check_same_context(*specs):
    ctx = specs[0].ctx
    for sp in specs[1:]:
        if sp.ctx is not ctx and sp.ctx != ctx:
            raise ContextMismatch("subgroups live in different fields")
    return ctx
