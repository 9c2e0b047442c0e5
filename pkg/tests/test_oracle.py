import numpy as np
import pytest

from beurling.containment import Problem, decide
from beurling.inner import (
    AtomicMeasure,
    BlaschkeProduct,
    Chain,
    Identity,
    Inner,
    InnerFunction,
    Mob,
    Scale,
    pushforward,
)
from beurling.moebius import blaschke_factor, rotation
from beurling.oracle import (
    BLOWUP,
    BOUNDED,
    CONSISTENT,
    INCONCLUSIVE,
    SOFT_INCONCLUSIVE,
    GridSpec,
    cross_validate,
    evaluate_points,
    log_quotient,
    modulus_identity_check,
    radial_limit_estimate,
    refine_near_witness,
    sup_quotient,
)

from instances import contained_oracle_instance, random_blaschke, random_measure, random_moebius


def worked_example():
    S = AtomicMeasure(((0.0, 1.0),))
    theta = InnerFunction(BlaschkeProduct(((0.0, 1),), -1.0), S)
    return theta, Chain((Scale(-1.0), Inner(theta))), InnerFunction(measure=S)


def failing_problem():
    a1, a2 = 0.3 + 0.2j, -0.4j
    B = BlaschkeProduct(((a1, 3), (a2, 2)))
    inner = BlaschkeProduct.from_raw(((a1, 1), (a2, 1)))
    phi = Chain((Mob(blaschke_factor(a2)), Inner(InnerFunction(inner))))
    return Problem(InnerFunction(B), phi, InnerFunction(B))


class TestSupQuotient:
    def test_identity_is_exactly_one(self, rng):
        theta = InnerFunction(random_blaschke(rng, 2, 2), random_measure(rng, 2))
        rep = sup_quotient(theta, Identity(), theta)
        assert rep.sup_estimate == 1.0 and rep.flag == BOUNDED

    def test_worked_example(self):
        theta, phi, S = worked_example()
        rep = sup_quotient(theta, phi, theta)
        assert rep.bounded_consistent and rep.sup_estimate <= 1
        assert sup_quotient(S, phi, S).blowup_detected

    def test_failing_instance_blows_up(self):
        p = failing_problem()
        rep = sup_quotient(p.theta1, p.phi, p.theta2)
        assert rep.blowup_detected
        assert abs(rep.argmax - 0.3 - 0.2j) < 0.1

    def test_monotone_under_refinement(self, rng):
        for _ in range(10):
            th1, phi, th2 = contained_oracle_instance(rng)[:3]
            coarse = sup_quotient(th1, phi, th2, GridSpec(angular_count=256))
            fine = sup_quotient(th1, phi, th2, GridSpec(angular_count=512))
            assert fine.log_sup >= coarse.log_sup - 1e-12
            assert fine.samples_used > coarse.samples_used

    def test_log_quotient_matches_direct(self, rng):
        B = random_blaschke(rng, 2, 1)
        theta = InnerFunction(B)
        phi = Mob(random_moebius(rng))
        z = 0.5 * np.exp(2j * np.pi * rng.uniform(size=20))
        direct = np.log(np.abs(B(phi(z)) / B(z)))
        assert np.allclose(log_quotient(theta, phi, theta, z), direct)

    def test_everything_excluded_is_inconclusive(self):
        theta = InnerFunction(BlaschkeProduct(((0.0, 1),)))
        rep = evaluate_points(theta, Identity(), theta, np.array([0.0, 1e-5]), [(0.0, 0.1)])
        assert rep.flag == INCONCLUSIVE and rep.samples_used == 0

    def test_flags(self):
        theta = InnerFunction(BlaschkeProduct(((0.0, 1),)))
        big = InnerFunction(BlaschkeProduct(((0.0, 2),)))
        assert sup_quotient(theta, Identity(), big).flag == BLOWUP


class TestCrossValidation:
    def test_worked_example_consistent(self):
        theta, phi, _ = worked_example()
        p = Problem(InnerFunction(theta.blaschke), phi, InnerFunction(theta.blaschke))
        v = decide(p)
        cc = cross_validate(v, sup_quotient(p.theta1, p.phi, p.theta2), p)
        assert v.contained and cc.status == CONSISTENT

    def test_failing_instance_consistent(self):
        p = failing_problem()
        v = decide(p)
        cc = cross_validate(v, sup_quotient(p.theta1, p.phi, p.theta2), p)
        assert not v.contained and cc.status == CONSISTENT

    def test_refinement_recovers_missed_blowup(self):
        # with a huge exclusion radius the base grid misses the blow-up
        p = failing_problem()
        grid = GridSpec(exclusion_radius=0.3)
        v = decide(p)
        rep = sup_quotient(p.theta1, p.phi, p.theta2, grid)
        assert not rep.blowup_detected
        cc = cross_validate(v, rep, p, grid)
        assert cc.status == CONSISTENT and cc.refined.blowup_detected
        assert cross_validate(v, rep, p, grid, refine=False).status == SOFT_INCONCLUSIVE

    def test_refine_without_witness(self):
        theta = InnerFunction(BlaschkeProduct(((0.3, 1),)))
        p = Problem(theta, Identity(), theta)
        assert refine_near_witness(p, decide(p)) is None


class TestBoundary:
    def test_radial_limit_blaschke_factor(self):
        a = 0.3 + 0.4j
        t = np.exp(0.8j)
        lim = radial_limit_estimate(Mob(blaschke_factor(a)), t)
        assert lim.converged and abs(lim.value - (a - t) / (1 - np.conj(a) * t)) < 1e-6

    def test_radial_limit_singular(self):
        S = InnerFunction(measure=AtomicMeasure(((0.0, 1.0),)))
        assert abs(radial_limit_estimate(S, 1.0).value) < 1e-6
        t = np.exp(2.0j)
        lim = radial_limit_estimate(S, t)
        # exp(-(1 + t)/(1 - t)) is unimodular away from the atom
        assert lim.converged and abs(lim.value - np.exp(-(1 + t) / (1 - t))) < 1e-5

    def test_radial_limit_depth(self):
        with pytest.raises(ValueError):
            radial_limit_estimate(Identity(), 1.0, depth=2)

    def test_modulus_identity(self, rng):
        for _ in range(10):
            mu = random_measure(rng, 3)
            m = random_moebius(rng)
            assert modulus_identity_check(mu, m, rng=rng) <= 1e-9

    def test_modulus_identity_detects_wrong_measure(self, rng):
        mu = random_measure(rng, 2)
        m = random_moebius(rng)
        wrong = pushforward(mu, m).scaled(1.1)
        assert modulus_identity_check(mu, m, wrong) > 1e-3

    def test_modulus_identity_rotation(self):
        mu = AtomicMeasure(((0.5, 1.0),))
        nu = AtomicMeasure(((0.5 - 0.7, 1.0),))
        assert modulus_identity_check(mu, rotation(np.exp(0.7j)), nu) <= 1e-12


class TestGridSpec:
    @pytest.mark.parametrize("kwargs", [
        {"radii": ()},
        {"radii": (0.5, 1.0)},
        {"radii": (0.9, 0.5)},
        {"exclusion_radius": 0.0},
        {"angular_count": 4},
    ])
    def test_validation(self, kwargs):
        with pytest.raises(ValueError):
            GridSpec(**kwargs)

    def test_refined_grid_is_superset(self):
        theta = InnerFunction(BlaschkeProduct(((0.3, 1),)), AtomicMeasure(((1.0, 1.0),)))
        coarse = GridSpec(angular_count=256).points_for(theta)
        fine = GridSpec(angular_count=512).points_for(theta)
        fine_set = {(round(p.real, 12), round(p.imag, 12)) for p in fine}
        assert all((round(p.real, 12), round(p.imag, 12)) in fine_set for p in coarse)

    def test_base_points(self):
        pts = GridSpec(radii=(0.5,), angular_count=8).base_points()
        assert np.allclose(np.abs(pts), 0.5) and len(pts) == 8
