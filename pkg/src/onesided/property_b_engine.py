"""Decision procedure for the one-sided approximation property (B).

``H`` has property (B) iff every trace ``tau`` in the smallest face ``F``
containing ``Z(H)`` has ``tau(H)`` zero or dense.  Two equivalent finite
tests are run and cross-checked:

* route (ii): the projection of ``H`` onto the support ``I`` of ``F`` is
  dense in its real span;
* route (iii): the projection of ``H`` onto a maximal set of coordinates in
  ``I`` that stay independent on the real span of ``H`` is dense.

When both fail a failure certificate ``(h, tau1, tau2, lam, delta, eps0)`` is
built: ``tau1`` is discrete on ``H`` with generator ``delta = tau1(h)``, and
``lam*tau1 + (1-lam)*tau2`` vanishes on ``H``.  For any ``h'`` and ``m >= 2``
either ``tau1(h - m h') <= -delta`` or ``tau2(h - m h') <= -delta/theta``
with ``theta = (1-lam)/lam``, so no ``h'`` approximates ``h`` within
``eps0 = delta*min(1, 1/theta)/2``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import CertificateConstructionFailed, InconsistentSystem, InputError, PreconditionNotMet
from .exact_linalg import rank, solve, transpose
from .face_geometry import (
    FaceDescriptor,
    PositivityCertificate,
    TracePoint,
    ZEmpty,
    normalize_unit,
    smallest_face,
    z_set_empty,
)
from .kronecker_density import (
    PropertyA,
    SubgroupSpec,
    classify_line_group,
    property_a,
)
from .scalar_field import Scalar

__all__ = [
    "FailureCertificate",
    "DecisionOutcome",
    "Valid",
    "Invalid",
    "decide",
    "build_failure_certificate",
    "verify_failure_certificate",
    "decide_corollary_92",
    "independent_coordinates",
    "epsilon_for",
]

HOLDS = "HoldsB"
FAILS = "FailsB"


@dataclass(frozen=True)
class FailureCertificate:
    h: tuple              # integer coefficients over the generators
    h_vector: tuple
    tau1: TracePoint
    tau2: TracePoint
    lam: Scalar
    delta: Scalar
    eps0: Scalar


@dataclass(frozen=True)
class DecisionOutcome:
    verdict: str
    route_ii: PropertyA
    route_iii: bool
    support: tuple
    route_iii_coords: tuple
    positivity: PositivityCertificate | None = None
    certificate: FailureCertificate | None = None
    face: FaceDescriptor | None = None
    notes: tuple = field(default_factory=tuple)

    @property
    def holds(self) -> bool:
        return self.verdict == HOLDS


@dataclass(frozen=True)
class Valid:
    ok = True


@dataclass(frozen=True)
class Invalid:
    reason: str
    ok = False


def epsilon_for(delta, lam):
    """``delta * min(1, 1/theta) / 2`` with ``theta = (1 - lam) / lam``."""
    inv_theta = lam / (1 - lam)
    return delta * min(inv_theta, 1) / 2


def independent_coordinates(H: SubgroupSpec, support):
    """Greedy maximal subset of ``support`` whose coordinate functionals stay
    independent on the real span of ``H`` (column rank of the generators)."""
    if H.s == 0:
        return ()
    cols = transpose(H.matrix())
    keep, r = [], 0
    for i in support:
        trial = [cols[j] for j in keep + [i]]
        if rank(trial) > r:
            keep.append(i)
            r += 1
    return tuple(keep)


def _weighted_note(u):
    if all(x == 1 for x in u):
        return ()
    return ("weighted unit: the face support and both routes depend only on the cone of Z(H), "
            "so they are computed as for the all-ones unit; traces are normalized at u",)


def decide(H: SubgroupSpec, u=None, threads: int = 1) -> DecisionOutcome:
    u = normalize_unit(H.n, u, H.ctx)
    notes = _weighted_note(u)
    if H.s == 0:
        return _decide_nonempty(H, u, smallest_face(H, u, threads=threads), notes)
    emptiness = z_set_empty(H, u)
    if isinstance(emptiness, ZEmpty):
        return DecisionOutcome(HOLDS, PropertyA(True), True, (), (), positivity=emptiness.certificate, notes=notes)
    face = smallest_face(H, u, threads=threads)
    return _decide_nonempty(H, u, face, notes)


def _decide_nonempty(H, u, face, notes):
    support = face.support
    route_ii = property_a(H.project(support))
    coords = independent_coordinates(H, support)
    route_iii = property_a(H.project(coords)).holds
    if route_ii.holds != route_iii:
        raise CertificateConstructionFailed("route (ii) and route (iii) disagree")
    if route_ii.holds:
        return DecisionOutcome(HOLDS, route_ii, route_iii, support, coords, face=face, notes=notes)
    cert = build_failure_certificate(H, u, route_ii.witness, face=face)
    return DecisionOutcome(FAILS, route_ii, route_iii, support, coords, certificate=cert, face=face, notes=notes)


def _power_of_two_shift(phi, nu, support):
    """Smallest ``a = 2^k >= 1`` with ``phi_i + a nu_i > 0`` on the support."""
    a = 1
    while any(phi[i] + a * nu[i] <= 0 for i in support):
        a *= 2
    return a


def _rational_below(r):
    """A positive rational ``<= r`` (``r`` itself when rational)."""
    if not isinstance(r, Scalar) or r.is_rational:
        return Fraction(r.coeffs[0]) if isinstance(r, Scalar) else Fraction(r)
    width = Fraction(1)
    while True:
        lo, _ = r.enclosure(width)
        if lo > 0:
            return lo
        width /= 4


def build_failure_certificate(H: SubgroupSpec, u, m, face: FaceDescriptor | None = None) -> FailureCertificate:
    """Turn a route (ii) witness ``m`` into a verified failure certificate."""
    u = normalize_unit(H.n, u, H.ctx)
    if face is None:
        face = smallest_face(H, u)
    support = face.support
    if not support or face.nu is None:
        raise CertificateConstructionFailed("Z(H) is empty; property (B) holds")
    K = H.ctx
    zero = K.zero
    Hp = H.project(support)
    try:
        phi_I = solve(Hp.matrix(), [K(v) for v in m])
    except InconsistentSystem as exc:
        raise CertificateConstructionFailed("route (ii) witness is not realized by a functional") from exc
    phi = [zero] * H.n
    for i, v in zip(support, phi_I):
        phi[i] = v
    nu = face.nu.coords
    if all(phi[i] >= 0 for i in support):
        a = 0
    elif all(phi[i] <= 0 for i in support):
        phi = [-v for v in phi]
        a = 0
    else:
        a = _power_of_two_shift(phi, nu, support)
    raw = [p + a * w for p, w in zip(phi, nu)]
    c = sum((x * w for x, w in zip(raw, u)), start=zero)
    if c <= 0:
        raise CertificateConstructionFailed("normalizing constant is not positive")
    tau1 = TracePoint(tuple(x / c for x in raw), u)
    values = [tau1(g) for g in H.generators]
    cls = classify_line_group(values)
    if cls.kind != "Discrete":
        raise CertificateConstructionFailed(f"tau1(H) classified {cls.kind}, expected Discrete")
    delta = K(cls.delta)
    h = tuple(int(b) for b in cls.bezout)
    h_vec = H.element(h)
    zeta = nu
    ratios = [zeta[i] / tau1.coords[i] for i in range(H.n) if tau1.coords[i] > 0]
    r = min(ratios)
    lam = K(min(Fraction(1, 2), _rational_below(r)))
    tau2 = TracePoint(tuple((z - lam * t) / (1 - lam) for z, t in zip(zeta, tau1.coords)), u)
    eps0 = epsilon_for(delta, lam)
    cert = FailureCertificate(h, tuple(h_vec), tau1, tau2, lam, delta, eps0)
    check = verify_failure_certificate(H, u, cert)
    if not check.ok:
        raise CertificateConstructionFailed(check.reason)
    return cert


def _as_vector(H, cand):
    if len(cand) != H.n:
        raise InputError("candidate has the wrong length")
    return tuple(H.ctx(x) for x in cand)


def verify_failure_certificate(H: SubgroupSpec, u, c: FailureCertificate, candidates=(), modulus: int = 2,
                               check_face: bool = True):
    """Check every certificate invariant exactly; returns Valid or Invalid."""
    u = normalize_unit(H.n, u, H.ctx)
    K = H.ctx
    for name, t in (("tau1", c.tau1), ("tau2", c.tau2)):
        if tuple(t.unit) != tuple(u):
            return Invalid(f"{name} is normalized at a different unit")
        if len(t.coords) != H.n or any(a < 0 for a in t.coords):
            return Invalid(f"{name} is not a trace")
        if sum((a * w for a, w in zip(t.coords, u)), start=K.zero) != 1:
            return Invalid(f"{name} is not normalized")
    lam = K(c.lam)
    if not (0 < lam < 1):
        return Invalid("λ ∉ (0,1)")
    zeta = [lam * a + (1 - lam) * b for a, b in zip(c.tau1.coords, c.tau2.coords)]
    for g in H.generators:
        if sum((a * x for a, x in zip(zeta, g)), start=K.zero) != 0:
            return Invalid("λτ₁ + (1−λ)τ₂ ∉ Z(H)")
    if check_face:
        face = smallest_face(H, u)
        if any(c.tau1.coords[i] != 0 for i in range(H.n) if i not in face.support):
            return Invalid("τ₁ ∉ F")
    cls = classify_line_group([c.tau1(g) for g in H.generators])
    if cls.kind != "Discrete" or K(cls.delta) != c.delta:
        return Invalid("τ₁(H) ≠ ℤδ")
    if len(c.h) != H.s or tuple(H.element(c.h)) != tuple(c.h_vector):
        return Invalid("h is not the stated element of H")
    if c.tau1(c.h_vector) != c.delta:
        return Invalid("τ₁(h) ≠ δ")
    if c.eps0 != epsilon_for(K(c.delta), lam) or not c.eps0 > 0:
        return Invalid("ε₀ ≠ δ·min{1, 1/θ}/2")
    if candidates:
        if modulus < 2:
            return Invalid("modulus must be at least 2")
        for cand in candidates:
            hp = _as_vector(H, cand)
            diff = [a - modulus * b for a, b in zip(c.h_vector, hp)]
            if not min(c.tau1(diff), c.tau2(diff)) < -c.eps0:
                return Invalid(f"candidate {cand} approximates h within ε₀")
    return Valid()


def decide_corollary_92(H: SubgroupSpec) -> str:
    """Verdict via the single-trace criterion when ``Z(H)`` is the midpoint
    of the first two coordinate traces."""
    if H.n < 2:
        raise PreconditionNotMet("need n >= 2")
    face = smallest_face(H)
    half = Fraction(1, 2)
    if face.support != (0, 1):
        raise PreconditionNotMet("Z(H) is not {(τ₁+τ₂)/2}")
    p0, p1 = face.z_points
    if p0.coords[0] != half or p1.coords[1] != half:
        raise PreconditionNotMet("Z(H) is not {(τ₁+τ₂)/2}")
    cls = classify_line_group([g[0] for g in H.generators])
    return HOLDS if cls.kind == "Dense" else FAILS
