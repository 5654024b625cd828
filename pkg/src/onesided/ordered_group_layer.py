"""Ordered-group applications: purity, convexity, unperforation, refinability.

``G`` is a finitely generated subgroup of ``R^n`` ordered either strictly
(positive cone ``{0}`` together with the strictly positive vectors; ``G``
must then be dense) or coordinatewise.  Subgroups ``H`` of ``G`` are given by
integer coefficient rows over ``G``'s generators.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import (
    ConvexityNotEstablished,
    DependentGenerators,
    InputError,
    NotCritical,
    NotPure,
    PreconditionNotMet,
)
from .exact_linalg import integer_kernel, rank_q, rational_components, rref, smith_normal_form, solve_integer
from .face_geometry import TracePoint, ZNonempty, normalize_unit, z_set_empty
from .kronecker_density import SubgroupSpec, is_dense
from .property_b_engine import DecisionOutcome, FailureCertificate, decide

__all__ = [
    "OrderedGroupSpec",
    "SubgroupInG",
    "TorsionFree",
    "Torsion",
    "ConvexByTrivialIntersection",
    "Unknown",
    "Unperforated",
    "Perforated",
    "PerforationInstance",
    "Refinable",
    "NotRefinable",
    "check_pure",
    "check_convex_sufficient",
    "unperforation_verdict",
    "critical_refinable",
    "member_coefficients",
]

STRICT = "strict"
COORDINATEWISE = "coordinatewise"


def _slice_rows(G: SubgroupSpec):
    """Rational coordinates of each generator (all coordinates, all slices)."""
    rows = []
    for g in G.generators:
        rows.append([c for comp in rational_components(list(g)) for c in comp] if G.n else [])
    return rows


def member_coefficients(G: SubgroupSpec, v):
    """Integer ``c`` with ``sum c_j g_j = v``, or ``None`` if ``v`` is not in ``G``."""
    v = G.ctx.vector(v)
    if G.s == 0:
        return () if all(x == 0 for x in v) else None
    cols = _slice_rows(G)          # t rows of length n*D
    target = [c for comp in rational_components(list(v)) for c in comp]
    # system: sum_j c_j cols[j][k] = target[k]; clear denominators row by row
    eqs, rhs = [], []
    for k in range(len(target)):
        row = [Fraction(cols[j][k]) for j in range(G.s)] + [Fraction(target[k])]
        den = math.lcm(*(x.denominator for x in row))
        ints = [int(x * den) for x in row]
        if any(ints):
            eqs.append(ints[:-1])
            rhs.append(ints[-1])
    if not eqs:
        return tuple([0] * G.s)
    sol = solve_integer(eqs, rhs)
    return None if sol is None else tuple(sol)


@dataclass(frozen=True)
class OrderedGroupSpec:
    G: SubgroupSpec
    ordering: str = STRICT
    u: tuple = field(default=None)

    def __post_init__(self):
        if self.ordering not in (STRICT, COORDINATEWISE):
            raise InputError(f"unknown ordering {self.ordering!r}")
        u = normalize_unit(self.G.n, self.u, self.G.ctx)
        object.__setattr__(self, "u", u)
        if member_coefficients(self.G, u) is None:
            raise InputError("order unit is not an element of G")
        if self.ordering == STRICT and not is_dense(self.G):
            raise InputError("strict ordering requires G to be dense in R^n")

    @property
    def ctx(self):
        return self.G.ctx

    def is_positive(self, v) -> bool:
        if self.ordering == STRICT:
            return all(x > 0 for x in v) or all(x == 0 for x in v)
        return all(x >= 0 for x in v)


@dataclass(frozen=True)
class SubgroupInG:
    rows: tuple   # integer coefficient rows over G's generators

    @classmethod
    def of(cls, rows):
        return cls(tuple(tuple(int(x) for x in r) for r in rows))

    def spec(self, G: OrderedGroupSpec) -> SubgroupSpec:
        for r in self.rows:
            if len(r) != G.G.s:
                raise InputError(f"H row {list(r)} needs {G.G.s} coefficients")
        return SubgroupSpec(G.G.n, tuple(G.G.element(r) for r in self.rows), G.ctx)


@dataclass(frozen=True)
class TorsionFree:
    pass


@dataclass(frozen=True)
class Torsion:
    k: int
    coeffs: tuple    # g in terms of G's generators
    g: tuple


def _require_independent(G: SubgroupSpec):
    if G.s and rank_q(_slice_rows(G)) < G.s:
        raise DependentGenerators("generators of G are not Z-independent")


def _unimodular_inverse(V):
    n = len(V)
    ident = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    R, pivots, A = rref([[Fraction(x) for x in row] for row in V], ident)
    return [[int(x) for x in row] for row in A]


def check_pure(G: OrderedGroupSpec, H: SubgroupInG):
    """Torsion-freeness of ``G/H`` via Smith normal form of ``H``'s rows."""
    _require_independent(G.G)
    if not H.rows:
        return TorsionFree()
    U, S, V = smith_normal_form([list(r) for r in H.rows])
    Vinv = _unimodular_inverse(V)
    for i in range(min(len(S), G.G.s)):
        d = S[i][i]
        if d > 1:
            coeffs = tuple(Vinv[i])
            return Torsion(d, coeffs, G.G.element(coeffs))
    return TorsionFree()


@dataclass(frozen=True)
class ConvexByTrivialIntersection:
    point: TracePoint | None = None   # trace vanishing on H


@dataclass(frozen=True)
class Unknown:
    reason: str


def check_convex_sufficient(G: OrderedGroupSpec, H: SubgroupInG):
    """Sufficient convexity test for the strict ordering.

    If some trace vanishes on ``H`` then ``H`` has no strictly positive
    element, so ``H`` meets the positive cone only in ``0``.
    """
    if G.ordering != STRICT:
        return Unknown("the sufficient criterion applies to the strict ordering only")
    Hs = H.spec(G)
    if Hs.s == 0:
        return ConvexByTrivialIntersection()
    res = z_set_empty(Hs, G.u)
    if isinstance(res, ZNonempty):
        return ConvexByTrivialIntersection(res.point)
    return Unknown("H contains a strictly positive element")


@dataclass(frozen=True)
class PerforationInstance:
    """``m (g + H) >= H`` (via ``m g + h`` positive) while ``g + H`` is not."""

    g_coeffs: tuple
    g: tuple
    m: int
    h_coeffs: tuple      # over H's rows
    positive: tuple      # m g + h


@dataclass(frozen=True)
class Unperforated:
    outcome: DecisionOutcome
    convexity: str


@dataclass(frozen=True)
class Perforated:
    certificate: FailureCertificate
    outcome: DecisionOutcome
    convexity: str
    instance: PerforationInstance | None = None


def _box(dim, r, prev):
    for c in itertools.product(range(-r, r + 1), repeat=dim):
        if max((abs(x) for x in c), default=0) > prev:
            yield c


def _g_plus_h_never_positive(cert: FailureCertificate, g):
    """No integer k in the open interval (-tau1(g)/delta, theta tau2(g)/delta)."""
    lam = cert.lam
    theta = (1 - lam) / lam
    lo = -cert.tau1(g) / cert.delta
    hi = theta * cert.tau2(g) / cert.delta
    k = math.floor(lo) + 1
    return not (k < hi)


def verify_perforation(G: OrderedGroupSpec, Hs: SubgroupSpec, cert: FailureCertificate, inst: PerforationInstance) -> bool:
    if tuple(G.G.element(inst.g_coeffs)) != tuple(inst.g):
        return False
    if member_coefficients(Hs, inst.g) is not None:
        return False
    if not _g_plus_h_never_positive(cert, inst.g):
        return False
    h = Hs.element(inst.h_coeffs) if Hs.s else (G.ctx.zero,) * G.G.n
    pos = tuple(inst.m * a + b for a, b in zip(inst.g, h))
    return pos == tuple(inst.positive) and all(x > 0 for x in pos)


def _find_perforation(G, Hs, cert, g_budget=32, m_max=5, h_budget=8):
    t = G.G.s
    prev = 0
    r = 1
    while r <= g_budget:
        for gc in _box(t, r, prev):
            g = G.G.element(gc)
            if not _g_plus_h_never_positive(cert, g):
                continue
            if member_coefficients(Hs, g) is not None:
                continue
            for m in range(2, m_max + 1):
                mg = [m * x for x in g]
                for hc in itertools.chain([tuple([0] * Hs.s)], _box(Hs.s, h_budget, 0)):
                    h = Hs.element(hc) if Hs.s else (G.ctx.zero,) * G.G.n
                    pos = tuple(a + b for a, b in zip(mg, h))
                    if all(x > 0 for x in pos):
                        return PerforationInstance(tuple(gc), tuple(g), m, tuple(hc), pos)
        prev = r
        r += 1
    return None


def unperforation_verdict(G: OrderedGroupSpec, H: SubgroupInG, assume_convex: bool = False,
                          search: bool = True, g_budget: int = 32, threads: int = 1):
    """``G/H`` is unperforated iff ``H`` has property (B) (traces normalized at ``u``)."""
    if G.ordering != STRICT:
        raise PreconditionNotMet("unperforation verdict implemented for the strict ordering")
    pure = check_pure(G, H)
    if isinstance(pure, Torsion):
        raise NotPure(pure)
    conv = check_convex_sufficient(G, H)
    if isinstance(conv, ConvexByTrivialIntersection):
        convexity = "ConvexByTrivialIntersection"
    elif assume_convex:
        convexity = "asserted by caller"
    else:
        raise ConvexityNotEstablished(conv.reason)
    Hs = H.spec(G)
    out = decide(Hs, G.u, threads=threads)
    if out.holds:
        return Unperforated(out, convexity)
    inst = _find_perforation(G, Hs, out.certificate, g_budget=g_budget) if search else None
    return Perforated(out.certificate, out, convexity, inst)


@dataclass(frozen=True)
class Refinable:
    trace: TracePoint


@dataclass(frozen=True)
class NotRefinable:
    trace: TracePoint
    coeffs: tuple    # kernel generator over G's generators
    element: tuple


def critical_refinable(G: OrderedGroupSpec, tau):
    """Refinable iff ``ker tau`` is trivial on the critical group ``G``."""
    if G.ordering != STRICT or G.G.s != G.G.n + 1:
        raise NotCritical("need a rank n+1 group with the strict ordering")
    try:
        _require_independent(G.G)
    except DependentGenerators as exc:
        raise NotCritical("generators are not independent") from exc
    if not is_dense(G.G):
        raise NotCritical("G is not dense")
    coords = [G.ctx(a) for a in tau]
    if len(coords) != G.G.n or any(a < 0 for a in coords) or all(a == 0 for a in coords):
        raise InputError("trace must be a nonzero nonnegative functional")
    scale = sum((a * w for a, w in zip(coords, G.u)), start=G.ctx.zero)
    tr = TracePoint(tuple(a / scale for a in coords), G.u)
    values = [tr(g) for g in G.G.generators]
    ker = integer_kernel(rational_components(values), ncols=G.G.s)
    if not ker:
        return Refinable(tr)
    k = tuple(ker[0])
    return NotRefinable(tr, k, G.G.element(k))
