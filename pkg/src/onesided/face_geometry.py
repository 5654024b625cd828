"""The zero set Z(H) of a subgroup inside the trace simplex, and its face.

For a unit ``u`` with positive entries the traces on ``R^n`` are the vectors
``a >= 0`` with ``sum a_i u_i = 1``; ``Z(H)`` is the set of traces vanishing
on every generator of ``H``.  ``Z(H)`` is a polytope described by linear
constraints, so everything here reduces to small exact LPs.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .errors import InvalidUnit
from .exact_linalg import integer_kernel, rational_components
from .kronecker_density import SubgroupSpec
from .simplex_farkas import Optimal, gordan, solve_lp
from .scalar_field import FieldContext

__all__ = [
    "TracePoint",
    "FaceDescriptor",
    "PositivityCertificate",
    "ZEmpty",
    "ZNonempty",
    "KernelFace",
    "normalize_unit",
    "z_set_empty",
    "smallest_face",
    "z_set_of_kernel",
]


@dataclass(frozen=True)
class TracePoint:
    coords: tuple
    unit: tuple

    def __post_init__(self):
        if len(self.coords) != len(self.unit):
            raise InvalidUnit("trace and unit have different lengths")
        if any(a < 0 for a in self.coords):
            raise InvalidUnit("trace coordinates must be nonnegative")
        if sum(a * w for a, w in zip(self.coords, self.unit)) != 1:
            raise InvalidUnit("trace is not normalized at the unit")

    def __call__(self, v):
        return sum((a * x for a, x in zip(self.coords, v)), start=0 * self.unit[0])


@dataclass(frozen=True)
class PositivityCertificate:
    x: tuple          # integer coefficients on the generators
    v: tuple          # sum x_j h_j, strictly positive
    margin: object    # min_i v_i > 0

    def verify(self, H: SubgroupSpec) -> bool:
        v = H.element(self.x)
        return tuple(v) == tuple(self.v) and all(c >= self.margin for c in v) and self.margin > 0


@dataclass(frozen=True)
class ZEmpty:
    certificate: PositivityCertificate


@dataclass(frozen=True)
class ZNonempty:
    point: TracePoint


@dataclass(frozen=True)
class FaceDescriptor:
    support: tuple     # sorted 0-based coordinates I
    n: int
    unit: tuple
    nu: TracePoint | None = None       # relative-interior point of Z(H) in F
    z_points: tuple = ()               # per-coordinate maximizers, one per i in I

    @property
    def z_empty(self) -> bool:
        return not self.support


def normalize_unit(n: int, u, ctx: FieldContext):
    if u is None:
        return tuple(ctx.one for _ in range(n))
    if len(u) != n:
        raise InvalidUnit(f"unit must have {n} coordinates")
    u = tuple(ctx(x) for x in u)
    if any(x <= 0 for x in u):
        raise InvalidUnit("unit coordinates must be strictly positive")
    return u


def _z_constraints(H: SubgroupSpec, u):
    rows = [list(g) for g in H.generators] + [list(u)]
    rhs = [H.ctx.zero] * H.s + [H.ctx.one]
    return rows, rhs


def z_set_empty(H: SubgroupSpec, u=None):
    """``ZEmpty`` with an integer positivity certificate, or a point of Z(H)."""
    u = normalize_unit(H.n, u, H.ctx)
    if H.n == 0:
        raise InvalidUnit("ambient dimension must be positive")
    if H.s == 0:
        a = tuple(H.ctx.one / u[0] if i == 0 else H.ctx.zero for i in range(H.n))
        return ZNonempty(TracePoint(a, u))
    res = gordan(H.matrix(), H.n)
    if res.alternative == 1:
        y = res.y
        total = sum((a * w for a, w in zip(y, u)), start=H.ctx.zero)
        return ZNonempty(TracePoint(tuple(a / total for a in y), u))
    v = H.element(res.x)
    return ZEmpty(PositivityCertificate(tuple(res.x), tuple(v), min(v)))


def _max_coordinate(H, u, i):
    rows, rhs = _z_constraints(H, u)
    c = [H.ctx.zero] * H.n
    c[i] = H.ctx.one
    return solve_lp(rows, rhs, c, zero=H.ctx.zero)


def smallest_face(H: SubgroupSpec, u=None, threads: int = 1) -> FaceDescriptor:
    """Support of the smallest face of the trace simplex containing Z(H).

    One LP per coordinate: ``i`` is in the support iff ``max a_i > 0`` over
    Z(H).  ``nu`` is the average of the maximizers found, hence has
    ``nu_i > 0`` exactly on the support.
    """
    u = normalize_unit(H.n, u, H.ctx)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda i: _max_coordinate(H, u, i), range(H.n)))
    else:
        results = [_max_coordinate(H, u, i) for i in range(H.n)]
    if not results or not isinstance(results[0], Optimal):
        return FaceDescriptor((), H.n, u)
    support, points = [], []
    for i, res in enumerate(results):
        if res.value > 0:
            support.append(i)
            points.append(TracePoint(tuple(res.x), u))
    k = len(points)
    nu = TracePoint(tuple(sum((p.coords[j] for p in points), start=H.ctx.zero) / k for j in range(H.n)), u)
    return FaceDescriptor(tuple(support), H.n, u, nu, tuple(points))


@dataclass(frozen=True)
class KernelFace:
    kernel: SubgroupSpec          # generators of ker(tau) inside G
    coefficients: tuple           # integer rows: kernel generators in terms of G's
    face: FaceDescriptor
    emptiness: object             # ZEmpty or ZNonempty


def z_set_of_kernel(G: SubgroupSpec, u, tau) -> KernelFace:
    """Face data for ``Z(ker tau)`` where ``tau`` is a trace on ``(G, u)``."""
    u = normalize_unit(G.n, u, G.ctx)
    if not isinstance(tau, TracePoint):
        tau = TracePoint(tuple(G.ctx(a) for a in tau), u)
    elif tuple(tau.unit) != tuple(u):
        raise InvalidUnit("trace was normalized at a different unit")
    values = [tau(g) for g in G.generators]
    if G.s:
        coeffs = integer_kernel(rational_components(values), ncols=G.s)
    else:
        coeffs = []
    ker = SubgroupSpec(G.n, tuple(G.element(k) for k in coeffs), G.ctx)
    return KernelFace(ker, tuple(tuple(k) for k in coeffs), smallest_face(ker, u), z_set_empty(ker, u))
