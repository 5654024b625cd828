import dataclasses
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from onesided.errors import PreconditionNotMet
from onesided.kronecker_density import SubgroupSpec
from onesided.property_b_engine import (
    FAILS,
    HOLDS,
    build_failure_certificate,
    decide,
    decide_corollary_92,
    epsilon_for,
    verify_failure_certificate,
)
from onesided.scalar_field import rational_context
from onesided.witness_lab import Witness, construct_witness, positivity_witness

from conftest import fails_corpus, holds_corpus, random_rational_subgroup, random_sqrt2_subgroup, sqrt2_field

F = Fraction


def Z(rows, n=None):
    return SubgroupSpec.of(rows, rational_context(), n)


def test_decide_examples():
    for n in range(1, 5):
        H = Z([[1 if i == j else 0 for j in range(n)] for i in range(n)])
        assert decide(H).verdict == HOLDS
    assert decide(Z([[1, -1]])).verdict == FAILS
    K = sqrt2_field()
    t = K.theta
    out = decide(SubgroupSpec.of([[1, -1], [t, -t]], K))
    assert out.verdict == HOLDS
    assert out.support == (0, 1)


def test_certificate_for_z_one_minus_one():
    out = decide(Z([[1, -1]]))
    c = out.certificate
    assert list(c.tau1.coords) == [1, 0] and list(c.tau2.coords) == [0, 1]
    assert c.lam == F(1, 2) and c.delta == 1 and c.eps0 == F(1, 2)


def test_certificate_scaled():
    c = decide(Z([[2, -2]])).certificate
    assert c.delta == 2 and c.eps0 == 1 and c.lam == F(1, 2)


def test_certificate_three_coordinates():
    H = Z([[1, -1, 0]])
    c = decide(H).certificate
    assert list(c.tau1.coords) == [1, 0, 0]
    zeta = [c.lam * a + (1 - c.lam) * b for a, b in zip(c.tau1.coords, c.tau2.coords)]
    assert zeta == [F(1, 3)] * 3
    # the threshold uses min(1, 1/theta); with lambda = 1/3, theta = 2
    assert c.lam == F(1, 3) and c.eps0 == F(1, 4)
    # h' = 0 makes tau2(h - 2h') = -1/2 exactly, so a threshold of 1/2 would not be strict
    assert verify_failure_certificate(H, None, c, candidates=[(0, 0, 0)]).ok


def test_certificate_round_trip_and_tampering():
    H = Z([[1, -1]])
    c = decide(H).certificate
    assert verify_failure_certificate(H, None, c).ok
    bad = dataclasses.replace(c, delta=c.delta * 2)
    res = verify_failure_certificate(H, None, bad)
    assert not res.ok and res.reason == "τ₁(H) ≠ ℤδ"
    bad = dataclasses.replace(c, eps0=c.eps0 * 2)
    assert not verify_failure_certificate(H, None, bad).ok


def test_candidate_sweep_radius_50():
    H = Z([[1, -1]])
    c = decide(H).certificate
    cands = [(a, -a) for a in range(-50, 51)]
    assert verify_failure_certificate(H, None, c, candidates=cands, modulus=2).ok


def test_midpoint_face_single_trace_criterion():
    assert decide_corollary_92(Z([[1, -1]])) == FAILS
    K = sqrt2_field()
    t = K.theta
    H = SubgroupSpec.of([[1, -1], [t, -t]], K)
    assert decide_corollary_92(H) == HOLDS == decide(H).verdict
    with pytest.raises(PreconditionNotMet):
        decide_corollary_92(Z([[1, -1, 0]]))


def test_corpora():
    for H in holds_corpus():
        assert decide(H).verdict == HOLDS
    for H in fails_corpus():
        out = decide(H)
        assert out.verdict == FAILS
        assert verify_failure_certificate(H, None, out.certificate).ok


def test_weighted_unit_adds_note():
    out = decide(Z([[1, -1]]), u=(1, 2))
    assert out.verdict == FAILS and out.notes
    c = out.certificate
    assert verify_failure_certificate(Z([[1, -1]]), (1, 2), c).ok


def test_epsilon_formula():
    assert epsilon_for(F(1), F(1, 2)) == F(1, 2)
    assert epsilon_for(F(1), F(1, 3)) == F(1, 4)
    assert epsilon_for(F(2), F(1, 2)) == 1


def _instances(count, seed):
    rng = random.Random(seed)
    K = sqrt2_field()
    return [random_sqrt2_subgroup(rng, K) if i % 5 == 0 else random_rational_subgroup(rng) for i in range(count)]


def test_routes_agree_and_alternatives_complete():
    for H in _instances(120, 21):
        out = decide(H)
        assert out.route_ii.holds == out.route_iii
        if out.verdict == HOLDS:
            assert out.certificate is None
        else:
            assert verify_failure_certificate(H, None, out.certificate).ok


unimodular = st.lists(st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(-2, 2)), max_size=6)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000), unimodular)
def test_invariance_under_unimodular_recombination(seed, ops):
    H = random_rational_subgroup(random.Random(seed))
    rows = [list(g) for g in H.generators]
    for i, j, k in ops:
        i, j = i % len(rows), j % len(rows)
        if i != j:
            rows[i] = [a + k * b for a, b in zip(rows[i], rows[j])]
    H2 = SubgroupSpec.of(rows, H.ctx, H.n)
    a, b = decide(H), decide(H2)
    assert a.verdict == b.verdict
    assert a.support == b.support
    assert a.route_ii.holds == b.route_ii.holds


def test_empty_z_gives_positivity_witnesses():
    rng = random.Random(4)
    seen = 0
    for H in _instances(200, 5):
        out = decide(H)
        if out.positivity is None:
            continue
        seen += 1
        assert out.verdict == HOLDS
        for _ in range(10):
            h = [rng.randint(-9, 9) for _ in range(H.s)]
            w = positivity_witness(H, h, rng.choice([2, 3, 5]), F(1, 100), out.positivity.x)
            assert isinstance(w, Witness) and all(v >= 0 for v in w.slack)
    assert seen >= 5


def test_holds_implies_witnesses():
    rng = random.Random(6)
    for H in holds_corpus():
        for _ in range(10):
            h = [rng.randint(-5, 5) for _ in range(H.s)]
            m = rng.choice([2, 3, 5])
            w = construct_witness(H, h, m, F(1, 100))
            assert isinstance(w, Witness) and min(w.slack) >= -F(1, 100)


def test_build_requires_nonempty_z():
    from onesided.errors import CertificateConstructionFailed

    with pytest.raises(CertificateConstructionFailed):
        build_failure_certificate(Z([[1, 1]]), None, (1,))
