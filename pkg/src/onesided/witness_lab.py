"""Explicit witnesses for the one-sided approximation property.

A witness for ``(h, m, eps)`` is an integer vector ``a`` such that every
coordinate of ``h - m * sum(a_j h_j)`` is at least ``-eps``.  Acceptance is
always decided by :func:`verify_witness` in exact arithmetic; floating point
is only used to order candidates in the enumeration tier.

Search strategy of :func:`construct_witness`:

1. rounding of the real solution ``c/m`` (``h = sum c_j h_j``);
2. when ``Z(H)`` is empty, subtract multiples of a strictly positive element;
3. otherwise aim at ``t - L w`` where ``t = h/m`` and ``w`` lies in the real
   span of ``H``, vanishes on the face support ``I`` and is ``>= 1`` off it.
   A lattice point close to that target in a weighted norm (tight on ``I``,
   loose off ``I``) is found with LLL and nearest-plane rounding;
4. box enumeration over ``|a|_inf <= 1, 2, 4, ...`` up to the budget.
"""
from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import BudgetExhausted, InputError, NoWitnessExists
from .exact_linalg import lll_reduce
from .face_geometry import normalize_unit
from .kronecker_density import SubgroupSpec
from .property_b_engine import decide
from .scalar_field import Scalar
from .simplex_farkas import Optimal, solve_lp

__all__ = [
    "Witness",
    "Rejected",
    "verify_witness",
    "construct_witness",
    "positivity_witness",
    "transport_witness",
    "candidate_score",
    "MAX_BOX",
]

# Largest number of candidates a single enumeration box may hold.
MAX_BOX = 2_000_000


@dataclass(frozen=True)
class Witness:
    coeffs: tuple
    m: int
    eps: Fraction
    h: tuple
    slack: tuple

    def element(self, H: SubgroupSpec):
        return H.element(self.coeffs)


@dataclass(frozen=True)
class Rejected:
    coordinate: int
    slack: object


def _check_params(m, eps):
    if int(m) != m or m < 2:
        raise InputError("modulus must be an integer >= 2")
    if not eps > 0:
        raise InputError("epsilon must be positive")


def _target(H, h):
    if len(h) != H.s:
        raise InputError(f"h must have {H.s} integer coefficients")
    return H.element([int(c) for c in h])


def verify_witness(H: SubgroupSpec, h, m, eps, a):
    """Exact check of ``h - m * sum(a_j h_j) >= -eps`` in every coordinate."""
    eps = Fraction(eps)
    _check_params(m, eps)
    a = tuple(int(x) for x in a)
    if len(a) != H.s:
        raise InputError(f"witness must have {H.s} coefficients")
    hv = _target(H, h)
    hp = H.element(a)
    slack = tuple(x - m * y for x, y in zip(hv, hp))
    for i, v in enumerate(slack):
        if v < -eps:
            return Rejected(i, v)
    return Witness(a, int(m), eps, tuple(int(c) for c in h), slack)


# -- per-subgroup analysis ---------------------------------------------------------

@dataclass(frozen=True)
class _Analysis:
    outcome: object
    support: tuple
    w_star: tuple | None     # in the real span, 0 on the support, >= 1 off it
    positive: tuple | None   # integer coefficients of a strictly positive element


@lru_cache(maxsize=256)
def _analyze(H: SubgroupSpec) -> _Analysis:
    out = decide(H)
    if out.positivity is not None:
        return _Analysis(out, (), None, tuple(out.positivity.x))
    support = out.support
    K = H.ctx
    off = [k for k in range(H.n) if k not in support]
    w = None
    if off:
        rows = [list(g) for g in H.generators] + [[K.one] * H.n]
        rhs = [K.zero] * H.s + [K.one]
        w = [K.zero] * H.n
        for k in off:
            c = [K.zero] * H.n
            c[k] = K.one
            res = solve_lp(rows, rhs, c, zero=K.zero)
            if not isinstance(res, Optimal) or res.value != 0:
                raise AssertionError("coordinate outside the face support has positive maximum")
            y = res.dual[:H.s]
            vec = H.element(y) if H.s else (K.zero,) * H.n
            w = [p + q for p, q in zip(w, vec)]
        w = tuple(w)
    return _Analysis(out, support, w, None)


# -- tier 1 ------------------------------------------------------------------------

def _rounding_candidates(h, m):
    fl = [math.floor(Fraction(c, m)) for c in h]
    ce = [math.ceil(Fraction(c, m)) for c in h]
    near = [round(Fraction(c, m)) for c in h]
    out = []
    for cand in (fl, near, ce):
        if cand not in out:
            out.append(cand)
    return out


def positivity_witness(H: SubgroupSpec, h, m, eps, x):
    """``h' = -l v`` for the strictly positive ``v = sum x_j h_j``.

    ``l = max(0, ceil(max_i -h_i / (m v_i)))`` makes ``h - m h'`` nonnegative.
    """
    hv = _target(H, h)
    v = H.element(x)
    if any(c <= 0 for c in v):
        raise InputError("positivity certificate is not strictly positive")
    ell = max([0] + [math.ceil(-hi / (m * vi)) for hi, vi in zip(hv, v)])
    a = tuple(-ell * int(c) for c in x)
    res = verify_witness(H, h, m, eps, a)
    if not isinstance(res, Witness):
        raise AssertionError("positivity witness failed verification")
    return res


def _shift_by_positive(H, h, m, eps, a, x):
    """Subtract the least multiple of a positive element that fixes ``a``."""
    hv = _target(H, h)
    v = H.element(x)
    slack = [p - m * q for p, q in zip(hv, H.element(a))]
    ell = max([0] + [math.ceil(-(s + eps) / (m * vi)) for s, vi in zip(slack, v)])
    return tuple(ai - ell * int(xi) for ai, xi in zip(a, x))


def _approx(x, bits):
    return x.approx(bits) if isinstance(x, Scalar) else Fraction(x)


def _gram_schmidt(B):
    Bs, norms = [], []
    for b in B:
        v = [Fraction(x) for x in b]
        for u, nu in zip(Bs, norms):
            mu = sum(p * q for p, q in zip(b, u)) / nu
            v = [p - mu * q for p, q in zip(v, u)]
        Bs.append(v)
        norms.append(sum(p * p for p in v))
    return Bs, norms


def _nearest_plane(B, target):
    """Babai nearest-plane coefficients of ``target`` in the basis ``B``."""
    Bs, norms = _gram_schmidt(B)
    t = [Fraction(x) for x in target]
    coeffs = [0] * len(B)
    for i in reversed(range(len(B))):
        c = round(sum(p * q for p, q in zip(t, Bs[i])) / norms[i])
        coeffs[i] = c
        if c:
            t = [p - c * q for p, q in zip(t, B[i])]
    return coeffs


def _lattice_candidates(H, support, w, t, eps_t, k):
    """Coefficient vectors near ``t - L w`` for precision level ``k``."""
    s, n = H.s, H.n
    L = 2 ** k if w is not None else 1
    scale_I = Fraction(2 ** (2 * k + 4)) / eps_t
    scale_off = Fraction(2 ** (2 * k + 4), L)
    bits = (2 * k + 4) + max(8, int(math.log2(float(1 / eps_t)) + 8) if eps_t < 1 else 8) + 16
    weights = [scale_I if i in support else scale_off for i in range(n)]
    goal = list(t)
    if w is not None:
        goal = [ti - L * wi for ti, wi in zip(t, w)]
    rows = []
    for j, g in enumerate(H.generators):
        row = [1 if jj == j else 0 for jj in range(s)]
        row += [round(weights[i] * _approx(g[i], bits)) for i in range(n)]
        rows.append(row)
    tgt = [0] * s + [round(weights[i] * _approx(goal[i], bits)) for i in range(n)]
    B = lll_reduce(rows)
    base = _nearest_plane(B, tgt)
    combos = [base]
    for i in range(len(B)):
        for d in (-1, 1):
            c = list(base)
            c[i] += d
            combos.append(c)
    out = []
    for c in combos:
        a = [sum(ci * B[i][j] for i, ci in enumerate(c)) for j in range(s)]
        out.append(tuple(a))
    return out


def _tier_one(H, h, m, eps, an: _Analysis, max_level=48):
    for a in _rounding_candidates(h, m):
        res = verify_witness(H, h, m, eps, a)
        if isinstance(res, Witness):
            return res
    if an.positive is not None:
        a = _shift_by_positive(H, h, m, eps, _rounding_candidates(h, m)[0], an.positive)
        res = verify_witness(H, h, m, eps, a)
        if isinstance(res, Witness):
            return res
        return positivity_witness(H, h, m, eps, an.positive)
    hv = _target(H, h)
    t = [x / m for x in hv]
    eps_t = Fraction(eps) / m
    for k in range(max_level):
        for a in _lattice_candidates(H, an.support, an.w_star, t, eps_t, k):
            res = verify_witness(H, h, m, eps, a)
            if isinstance(res, Witness):
                return res
    return None


# -- tier 2 ------------------------------------------------------------------------

def candidate_score(G, hv, m, cands):
    """Floating estimate of ``min_i (h - m G^t a)_i`` for each candidate row.

    Used only to order candidates; replaced by a garbage function in the
    exactness audit.
    """
    return (hv[None, :] - m * (cands @ G)).min(axis=1)


def _shell(s, r, prev):
    rng = np.arange(-r, r + 1)
    grids = np.meshgrid(*([rng] * s), indexing="ij")
    pts = np.stack([g.ravel() for g in grids], axis=1) if s else np.zeros((1, 0), dtype=np.int64)
    if prev >= 0 and s:
        pts = pts[np.abs(pts).max(axis=1) > prev]
    return pts


def _tier_two(H, h, m, eps, budget, threads=1):
    s = H.s
    G = np.array([[float(x) for x in g] for g in H.generators], dtype=float).reshape(s, H.n)
    hv = np.array([float(x) for x in _target(H, h)], dtype=float)
    prev, r = -1, 1
    radii = []
    while r <= budget:
        radii.append(r)
        r *= 2
    if not radii or radii[-1] != budget:
        radii.append(budget)
    for r in radii:
        if (2 * r + 1) ** s > MAX_BOX:
            break
        pts = _shell(s, r, prev)
        prev = r
        if len(pts) == 0:
            continue
        score = np.asarray(candidate_score(G, hv, m, pts.astype(float)), dtype=float)
        score = np.nan_to_num(score, nan=-np.inf)
        order = sorted(range(len(pts)), key=lambda i: (-score[i], tuple(pts[i])))
        cands = [tuple(int(v) for v in pts[i]) for i in order]
        if threads > 1:
            chunk = 256
            with ThreadPoolExecutor(max_workers=threads) as pool:
                for start in range(0, len(cands), chunk):
                    batch = cands[start:start + chunk]
                    results = list(pool.map(lambda a: verify_witness(H, h, m, eps, a), batch))
                    for res in results:
                        if isinstance(res, Witness):
                            return res
        else:
            for a in cands:
                res = verify_witness(H, h, m, eps, a)
                if isinstance(res, Witness):
                    return res
    return None


def construct_witness(H: SubgroupSpec, h, m, eps, budget: int = 64, threads: int = 1, tiers=(1, 2)):
    """A verified witness for ``(h, m, eps)``.

    Raises :class:`NoWitnessExists` (with the failure certificate) when
    property (B) fails, and :class:`BudgetExhausted` when the search gives up.
    """
    eps = Fraction(eps)
    _check_params(m, eps)
    _target(H, h)
    an = _analyze(H)
    if not an.outcome.holds:
        raise NoWitnessExists(an.outcome.certificate)
    if 1 in tiers:
        res = _tier_one(H, h, m, eps, an)
        if res is not None:
            return res
    if 2 in tiers:
        res = _tier_two(H, h, m, eps, budget, threads)
        if res is not None:
            return res
    raise BudgetExhausted(budget)


# -- change of modulus -------------------------------------------------------------

def transport_witness(H: SubgroupSpec, h, m, n, eps, machinery=None, u=None, budget: int = 64):
    """A modulus-``n`` witness built from modulus-``m`` witnesses.

    With ``h <= l`` coordinatewise pick the least ``j >= 1`` with
    ``m^j >= (2l + eps) n / eps``; chain ``j`` modulus-``m`` witnesses into a
    modulus-``m^j`` witness ``h'`` with tolerance ``eps/2`` and return
    ``q h'`` with ``q = ceil(m^j / n)``.
    """
    eps = Fraction(eps)
    _check_params(m, eps)
    _check_params(n, eps)
    if machinery is None:
        def machinery(target, e):
            return construct_witness(H, target, m, e, budget=budget)
    hv = _target(H, h)
    u = normalize_unit(H.n, u, H.ctx)
    umin = min(u)
    top = max(hv) / umin
    ell = max(0, math.ceil(top)) * max(1, math.ceil(max(u)))
    j = 1
    while m ** j * eps < (2 * ell + eps) * n:
        j += 1
    half = eps / 2
    target = tuple(int(c) for c in h)
    for k in range(1, j + 1):
        e_k = half / (2 ** k * m ** (k - 1))
        wit = machinery(target, e_k)
        target = tuple(wit.coeffs)
    mj = m ** j
    q = -(-mj // n)
    a = tuple(q * c for c in target)
    res = verify_witness(H, h, n, eps, a)
    if not isinstance(res, Witness):
        raise AssertionError("transported witness failed verification")
    return res


def _reset_cache():
    _analyze.cache_clear()
