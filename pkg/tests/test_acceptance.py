"""Acceptance criteria, one test per criterion, each at its stated tolerance."""
import math
import time

import numpy as np
import pytest

from beurling.containment import (
    Problem,
    decide,
    decide_blaschke,
    decide_derivative,
    decide_singular,
    decide_singular_conjugated,
    decide_singular_rotation,
)
from beurling.families import automorphism_rigidity_scan, verify_family_roundtrip
from beurling.inner import AtomicMeasure, BlaschkeProduct, Chain, Inner, InnerFunction, Scale
from beurling.moebius import blaschke_factor
from beurling.oracle import (
    CONSISTENT,
    CONTRADICTION,
    cross_validate,
    modulus_identity_check,
    radial_limit_estimate,
    sup_quotient,
)

from fd import central_derivative, rounding_bound
from instances import (
    contained_oracle_instance,
    elliptic_singular_instance,
    engine_instance,
    negative_control_spec,
    random_disk_point,
    random_family_spec,
    random_measure,
    random_moebius,
    random_selfmap,
    refuted_oracle_instance,
    rigidity_blaschke,
)

TIME_BUDGET = 60.0


@pytest.fixture
def timed():
    start = time.perf_counter()
    yield
    assert time.perf_counter() - start < TIME_BUDGET


def _sample_points(rng, n=50, rmax=0.95):
    r = rmax * np.sqrt(rng.uniform(size=n))
    return r * np.exp(2j * np.pi * rng.uniform(size=n))


@pytest.mark.criterion(1, "Moebius group laws on 1000 random pairs/triples at 1e-11")
def test_criterion_1_moebius_group(timed):
    rng = np.random.default_rng(1)
    worst = 0.0
    for _ in range(1000):
        m1, m2, m3 = (random_moebius(rng) for _ in range(3))
        z = _sample_points(rng)
        left = (m1 @ m2) @ m3
        right = m1 @ (m2 @ m3)
        worst = max(worst, np.max(np.abs(left(z) - right(z))))
        worst = max(worst, np.max(np.abs(left(z) - m1(m2(m3(z))))))
        worst = max(worst, np.max(np.abs((m1 @ m1.inverse())(z) - z)))
        worst = max(worst, np.max(np.abs((m1.inverse() @ m1)(z) - z)))
        worst = max(worst, np.max(np.abs(m1(m1.inverse()(z)) - z)))
        Ba = blaschke_factor(m2.a)
        worst = max(worst, np.max(np.abs((Ba @ Ba)(z) - z)))
        worst = max(worst, np.max(np.abs(Ba(Ba(z)) - z)))
    assert worst <= 1e-11, worst


@pytest.mark.criterion(2, "decide_blaschke ≡ decide_derivative on 500 mixed instances")
def test_criterion_2_engine_equivalence(timed):
    rng = np.random.default_rng(2)
    mismatches, contained = [], 0
    for i in range(500):
        B, phi = engine_instance(rng)
        a = decide_blaschke(B, phi, B).contained
        b = decide_derivative(B, phi).contained
        contained += a
        if a != b:
            mismatches.append(i)
    assert not mismatches
    # the corpus must exercise both verdicts
    assert 50 < contained < 450


@pytest.mark.criterion(3, "engine/oracle: 200 contained bounded, >=95/100 refuted blow up, no contradictions")
def test_criterion_3_engine_oracle(timed):
    rng = np.random.default_rng(3)
    contradictions = 0
    bounded = 0
    done = 0
    while done < 200:
        t1, phi, t2 = contained_oracle_instance(rng)
        p = Problem(t1, phi, t2)
        v = decide(p)
        if not v.contained:
            continue
        done += 1
        r = sup_quotient(t1, phi, t2)
        bounded += r.sup_estimate <= 1 + 1e-6
        contradictions += cross_validate(v, r, p).status == CONTRADICTION
    assert bounded == 200
    detected = 0
    done = 0
    while done < 100:
        t1, phi, t2 = refuted_oracle_instance(rng)
        p = Problem(t1, phi, t2)
        v = decide(p)
        if v.contained:
            continue
        done += 1
        cc = cross_validate(v, sup_quotient(t1, phi, t2), p)
        detected += cc.status == CONSISTENT
        contradictions += cc.status == CONTRADICTION
    assert detected >= 95, detected
    assert contradictions == 0


def _worked_example():
    S = AtomicMeasure(((0.0, 1.0),))
    theta = InnerFunction(BlaschkeProduct(((0.0, 1),), -1.0), S)  # (-z) exp((z+1)/(z-1))
    phi = Chain((Scale(-1.0), Inner(theta)))
    return theta, phi, InnerFunction(measure=S)


@pytest.mark.criterion(4, "worked example: bounded for theta, radial limit 0, blow-up for S alone")
def test_criterion_4_example(timed):
    theta, phi, S = _worked_example()
    z = 0.3 - 0.2j
    assert abs(theta(z) - (-z) * np.exp((z + 1) / (z - 1))) < 1e-15
    assert sup_quotient(theta, phi, theta).bounded_consistent
    lim = radial_limit_estimate(phi, 1.0)
    assert lim.converged and abs(lim.value) <= 1e-6
    assert sup_quotient(S, phi, S).blowup_detected


@pytest.mark.criterion(5, "pushforward modulus identity <= 1e-9 on 200 random pairs")
def test_criterion_5_pushforward_identity(timed):
    rng = np.random.default_rng(5)
    worst = 0.0
    for _ in range(200):
        mu = random_measure(rng, int(rng.integers(1, 6)), 2.0)
        m = random_moebius(rng, 0.9)
        worst = max(worst, modulus_identity_check(mu, m, rng=rng))
    assert worst <= 1e-9, worst


@pytest.mark.criterion(6, "three singular routes agree on 500 random elliptic instances")
def test_criterion_6_singular_routes(timed):
    rng = np.random.default_rng(6)
    disagreements, contained = 0, 0
    for _ in range(500):
        mu1, phi, mu2, lam, nu1, nu2 = elliptic_singular_instance(rng)
        a = decide_singular(mu1, phi, mu2).contained
        b = decide_singular_rotation(nu1, lam, nu2).contained
        c = decide_singular_conjugated(mu1, phi, mu2).contained
        disagreements += not (a == b == c)
        contained += a
    assert disagreements == 0
    assert 50 < contained < 450


@pytest.mark.criterion(7, "1000 family members contained, all negative controls refuted")
def test_criterion_7_family_roundtrips(timed):
    rng = np.random.default_rng(7)
    kinds = ("one_zero", "two_zero_equal", "two_zero_unequal", "fix_all_to_aj",
             "max_mult_selfmap")
    failures = []
    for i in range(1000):
        spec = random_family_spec(rng, kinds[i % 5])
        if not verify_family_roundtrip(spec).contained:
            failures.append(spec)
    assert not failures
    for _ in range(200):
        spec = negative_control_spec(rng)
        assert not verify_family_roundtrip(spec).contained, spec


@pytest.mark.criterion(8, "rigidity scan refutes every nontrivial automorphism for 50 random B")
def test_criterion_8_rigidity(timed):
    rng = np.random.default_rng(8)
    realizable = 0
    for _ in range(50):
        B = rigidity_blaschke(rng, 6)
        rep = automorphism_rigidity_scan(B, trials=20, rng=rng)
        assert rep.all_refuted
        realizable += len(rep.realizable)
    # symmetric zero sets make some permutations realizable, so the scan has teeth
    assert realizable > 0


@pytest.mark.criterion(9, "jet derivatives of order <= 3 match central differences to 1e-6 on 300 maps")
def test_criterion_9_jets_vs_fd(timed):
    rng = np.random.default_rng(9)
    worst = 0.0
    for _ in range(300):
        phi = random_selfmap(rng)
        z0 = random_disk_point(rng, 0.7)
        d = phi.jet(z0, 3).derivatives()
        h = 0.02 * (1 - abs(z0))
        for order in (1, 2, 3):
            fd = central_derivative(phi, z0, order, h)
            # relative error, after discounting the stencil's own rounding error
            excess = abs(d[order] - fd) - rounding_bound(phi, z0, order, h)
            worst = max(worst, excess / abs(fd) if fd else (0.0 if excess <= 0 else math.inf))
    assert worst <= 1e-6, worst
