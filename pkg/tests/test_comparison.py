"""Model functions, Riccati integration, traces, convexity, hinges."""

import math

import numpy as np
import pytest

from alexgeo import comparison as cmp
from alexgeo.comparison import ComparisonModel
from alexgeo.errors import ConstructionError, DomainError, PreconditionError, SingularityError
from alexgeo.spaces import Cone, Lens, ModelBall, Sphere

PI = math.pi
HALF_PI = math.pi / 2.0


class TestModelRelation:
    def test_inradius_formulas(self):
        assert cmp.model_inradius(0.0, 2.0) == pytest.approx(0.5)
        assert cmp.model_inradius(1.0, 1.0) == pytest.approx(PI / 4.0)
        assert cmp.model_inradius(-1.0, 1.0 / math.tanh(0.8)) == pytest.approx(0.8)

    def test_hyperbolic_needs_lambda0_above_one(self):
        with pytest.raises(DomainError):
            cmp.model_inradius(-1.0, 0.9)

    def test_model_triple_validation(self):
        ComparisonModel.from_lambda0(1.0, 1.0)
        ComparisonModel.from_r0(0.0, 2.0)
        with pytest.raises(ConstructionError):
            ComparisonModel(0.0, 1.0, 0.5)  # violates lambda0 = 1/r0
        with pytest.raises(ConstructionError):
            ComparisonModel(-1.0, 0.5, 1.0)  # lambda0^2 must exceed -k


class TestModelLambda:
    def test_initial_condition(self):
        assert cmp.model_lambda(0.0, 2.0, 0.0) == pytest.approx(-2.0)
        assert cmp.model_lambda(1.0, 3.0, 0.0) == pytest.approx(-3.0)
        assert cmp.model_lambda(-1.0, 2.0, 0.0) == pytest.approx(-2.0)

    def test_spherical_closed_form_value(self):
        # lambda0 = 1 means r0 = pi/4; the level-set value at pi/8 is -cot(pi/8)
        val = cmp.model_lambda(1.0, 1.0, PI / 8.0)
        assert val == pytest.approx(-(1.0 + math.sqrt(2.0)), abs=1e-12)

    def test_hyperbolic_constant_branch(self):
        for r in (0.0, 0.5, 3.0):
            assert cmp.model_lambda(-1.0, 1.0, r) == -1.0

    def test_hyperbolic_tanh_branch_has_no_singularity(self):
        assert cmp.model_lambda(-1.0, 0.5, 10.0) == pytest.approx(
            math.tanh(10.0 - math.atanh(0.5))
        )

    def test_focal_domain_error(self):
        with pytest.raises(DomainError):
            cmp.model_lambda(0.0, 1.0, 1.0)
        with pytest.raises(DomainError):
            cmp.model_lambda(1.0, 1.0, PI / 4.0)

    def test_canonical_k_only(self):
        with pytest.raises(DomainError):
            cmp.model_lambda(4.0, 1.0, 0.1)


class TestModelPhi:
    def test_zero_at_origin(self):
        for k in (-1.0, 0.0, 1.0):
            assert cmp.model_phi(k, 1.3, 0.0) == 0.0

    def test_flat_value(self):
        assert cmp.model_phi(0.0, 1.0, 1.0) == pytest.approx(0.5)

    def test_spherical_value_at_inradius(self):
        assert cmp.model_phi(1.0, 1.0, PI / 4.0) == pytest.approx(math.sqrt(2.0) - 1.0)

    def test_increasing_up_to_inradius_with_flat_top(self):
        for k, lam0 in [(0.0, 1.5), (1.0, 1.0), (-1.0, 2.0)]:
            r0 = cmp.model_inradius(k, lam0)
            rs = np.linspace(0.0, r0, 200)
            phi = cmp.model_phi(k, lam0, rs)
            assert np.all(np.diff(phi) > -1e-12)
            assert cmp.model_phi_prime(k, lam0, r0) == pytest.approx(0.0, abs=1e-12)

    def test_lambda_phi_prime_equals_phi_second(self):
        # finite-difference check of the Riccati relation at h = 1e-4
        h = 1e-4
        for k, lam0 in [(0.0, 1.0), (0.0, 2.5), (1.0, 1.0), (1.0, 0.4), (-1.0, 1.7)]:
            r0 = cmp.model_inradius(k, lam0)
            for r in np.linspace(0.05 * r0, 0.9 * r0, 9):
                phi_p = (cmp.model_phi(k, lam0, r + h) - cmp.model_phi(k, lam0, r - h)) / (2 * h)
                phi_pp = (
                    cmp.model_phi(k, lam0, r + h)
                    - 2.0 * cmp.model_phi(k, lam0, r)
                    + cmp.model_phi(k, lam0, r - h)
                ) / h**2
                lam = cmp.model_lambda(k, lam0, r)
                assert abs(lam * phi_p - phi_pp) <= 1e-6


class TestModelPsi:
    def test_initial_conditions_and_values(self):
        assert cmp.model_psi(1.0, 0.0) == 0.0
        assert cmp.model_psi(1.0, 0.7) == pytest.approx(1.0 - math.cos(0.7))
        assert cmp.model_psi(0.0, 0.7) == pytest.approx(0.245)
        assert cmp.model_psi(-1.0, 0.7) == pytest.approx(math.cosh(0.7) - 1.0)

    def test_ode_by_finite_differences(self):
        h = 1e-4
        for k in (-1.0, 0.0, 1.0, 0.5):
            for t in (0.2, 0.9):
                second = (cmp.model_psi(k, t + h) - 2 * cmp.model_psi(k, t)
                          + cmp.model_psi(k, t - h)) / h**2
                assert second + k * cmp.model_psi(k, t) == pytest.approx(1.0, abs=1e-6)


class TestRiccati:
    def test_flat_closed_form(self):
        assert cmp.riccati_integrate(0.0, 1.0, 0.5, 1e-3) == pytest.approx(-2.0, abs=1e-8)

    def test_spherical_closed_form(self):
        lam0 = 1.0 / math.tan(1.0)
        val = cmp.riccati_integrate(1.0, lam0, 0.5, 1e-3)
        assert val == pytest.approx(1.0 / math.tan(0.5 - 1.0), abs=1e-8)

    def test_hyperbolic_constant(self):
        assert cmp.riccati_integrate(-1.0, 1.0, 2.0, 1e-3) == pytest.approx(-1.0, abs=1e-10)

    def test_grid_agreement_with_closed_forms(self):
        worst = 0.0
        count = 0
        for k in (-1.0, 0.0, 1.0):
            for lam0 in np.linspace(1.1, 3.0, 12):
                r0 = cmp.model_inradius(k, lam0)
                for r in np.linspace(0.05 * r0, 0.8 * r0, 28):
                    got = cmp.riccati_integrate(k, lam0, float(r), 1e-3)
                    want = cmp.model_lambda(k, lam0, float(r))
                    worst = max(worst, abs(got - want))
                    count += 1
        assert count >= 1000
        assert worst <= 1e-8

    def test_blowup_location_matches_focal_radius(self):
        step = 1e-3
        with pytest.raises(SingularityError) as err:
            cmp.riccati_integrate(0.0, 1.0, 2.0, step)
        assert abs(err.value.location - 1.0) <= 10.0 * step


class TestFbar:
    def test_initial_value(self):
        for k in (-1.0, 0.0, 1.0, 0.3):
            assert cmp.fbar(k, 1.2, 0.7, -0.1, 0.0) == pytest.approx(0.7)

    def test_flat_displayed_form(self):
        r0, r1 = 2.0, 1.3
        lam0 = 1.0 / r0
        t = np.linspace(0.0, r0, 7)
        got = cmp.fbar(0.0, lam0, cmp.model_phi(0.0, lam0, r1), 0.0, t)
        want = r1 - r1**2 / (2 * r0) - t**2 / (2 * r0)
        assert np.allclose(got, want, atol=1e-14)

    def test_rigidity_boundary_case(self):
        # launched from the inradius value, the model solution vanishes at r0
        # exactly when r1 = r0; strictly below it stays negative there
        for k in (-1.0, 0.0, 1.0):
            for lam0 in np.linspace(1.2, 2.5, 6):
                r0 = cmp.model_inradius(k, lam0)
                at_max = cmp.fbar(k, lam0, cmp.model_phi(k, lam0, r0), 0.0, r0)
                assert abs(at_max) <= 1e-10
                for r1 in np.linspace(0.1 * r0, 0.95 * r0, 8):
                    val = cmp.fbar(k, lam0, cmp.model_phi(k, lam0, float(r1)), 0.0, r0)
                    assert val < -1e-10

    def test_general_k_by_scaling(self):
        # fbar for curvature 4 equals the k=1 solution with t scaled by 2
        t = 0.3
        got = cmp.fbar(4.0, 1.0, 0.2, 0.1, t)
        s = 2.0
        want = -1.0 / 4.0 + (0.2 + 1.0 / 4.0) * math.cos(s * t) + (0.1 / s) * math.sin(s * t)
        assert got == pytest.approx(want, abs=1e-14)


class TestHinge:
    def test_degenerate_hinge(self):
        for k in (-1.0, 0.0, 1.0):
            assert cmp.hinge_comparison(k, 1.0, 0.3, 0.0) == pytest.approx(0.7, abs=1e-12)

    def test_right_spherical_triangle(self):
        assert cmp.hinge_comparison(1.0, HALF_PI, HALF_PI, HALF_PI) == pytest.approx(HALF_PI)

    def test_pythagorean(self):
        assert cmp.hinge_comparison(0.0, 3.0, 4.0, HALF_PI) == pytest.approx(5.0)

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            cmp.hinge_comparison(1.0, 4.0, 1.0, 0.5)
        with pytest.raises(DomainError):
            cmp.hinge_comparison(0.0, -1.0, 1.0, 0.5)
        with pytest.raises(DomainError):
            cmp.hinge_comparison(0.0, 1.0, 1.0, 4.0)

    def test_audits_find_no_violations(self):
        tol = 0.15
        assert cmp.hinge_audit_sphere(10_000, 1, tol).worst_excess <= 1e-9
        assert cmp.hinge_audit_lens(3, 1.5, 10_000, 2, tol).worst_excess <= 1e-9
        cone = Cone(1.0, Sphere(1, 0.75), HALF_PI)
        assert cmp.hinge_audit_cone_apex(cone, 10_000, 3, tol).worst_excess <= 1e-9


class TestConvexityCheck:
    @pytest.mark.parametrize("k,r0", [(-1.0, 1.0), (0.0, 1.0), (1.0, PI / 4.0)])
    def test_model_ball_passes_at_its_own_profile(self, k, r0):
        lam0 = cmp.model_lambda0(k, r0)
        rep = cmp.convexity_check(ModelBall(k, r0, 3), lam0, probes=500)
        assert rep.passed

    @pytest.mark.parametrize("k,r0", [(-1.0, 1.0), (0.0, 1.0), (1.0, PI / 4.0)])
    def test_model_ball_fails_inflated_profile(self, k, r0):
        lam0 = cmp.model_lambda0(k, r0)
        rep = cmp.convexity_check(ModelBall(k, r0, 3), 1.5 * lam0, probes=500)
        assert not rep.passed
        # the limiting defect ratio is (lam0 - 1.5 lam0)/2
        assert rep.worst_ratio == pytest.approx(-lam0 / 4.0, rel=0.05)

    def test_lens_fails_every_positive_profile(self):
        for lam0 in (0.5, 1.0, 2.0):
            rep = cmp.convexity_check(Lens(2, 1.0), lam0, probes=400)
            assert not rep.passed
            assert rep.worst_ratio == pytest.approx(-lam0 / 2.0, abs=1e-6)

    def test_boundaryless_rejected(self):
        with pytest.raises(PreconditionError):
            cmp.convexity_check(Sphere(2, 1.0), 1.0)


class TestTraces:
    def test_radial_equality_all_curvatures(self):
        step = 1e-3
        for k, r0 in [(-1.0, 1.0), (0.0, 1.0), (1.0, PI / 4.0)]:
            ball = ModelBall(k, r0, 3)
            lam0 = cmp.model_lambda0(k, r0)
            path = cmp.ball_radial_path(ball, np.array([0.0, 1.0, 0.0]), step)
            tr = cmp.comparison_trace(ball, lam0, k, path, step)
            assert tr.max_equality_gap <= 5.0 * step
            assert tr.max_violation <= 5.0 * step

    def test_chords_stay_below_model_solution(self):
        step = 1e-3
        for k, r0 in [(-1.0, 1.0), (0.0, 1.0), (1.0, PI / 4.0)]:
            ball = ModelBall(k, r0, 3)
            lam0 = cmp.model_lambda0(k, r0)
            for i, rho in enumerate((0.2, 0.5, 0.8)):
                path = cmp.ball_chord_path(ball, rho * r0, step, seed=i)
                tr = cmp.comparison_trace(ball, lam0, k, path, step)
                assert tr.max_violation <= 5.0 * step

    def test_cone_equality_case(self):
        step = 1e-3
        cone = Cone(1.0, Sphere(1, 0.75), HALF_PI)
        lam0 = cmp.model_lambda0(1.0, HALF_PI)
        path = cmp.cone_developed_path(cone, 0.4, 0.9, 1.8, 1.3, step)
        assert path is not None
        tr = cmp.comparison_trace(cone, lam0, 1.0, path, step)
        assert tr.max_equality_gap <= 5.0 * step
        radial = cmp.cone_radial_path(cone, np.array([0.0, 1.0]), step)
        tr2 = cmp.comparison_trace(cone, lam0, 1.0, radial, step)
        assert tr2.max_equality_gap <= 5.0 * step

    def test_non_unit_speed_rejected(self):
        ball = ModelBall(0.0, 1.0, 2)
        path = cmp.ball_radial_path(ball, np.array([1.0, 0.0]), 1e-3)
        path[3] = (path[3][0] + 5e-4, path[3][1])
        with pytest.raises(PreconditionError):
            cmp.comparison_trace(ball, 1.0, 0.0, path, 1e-3)

    def test_trace_csv_export(self, tmp_path):
        ball = ModelBall(0.0, 1.0, 2)
        path = cmp.ball_radial_path(ball, np.array([1.0, 0.0]), 1e-2)
        tr = cmp.comparison_trace(ball, 1.0, 0.0, path, 1e-2)
        out = tmp_path / "trace.csv"
        tr.to_csv(out)
        rows = np.loadtxt(out, delimiter=",", skiprows=1)
        assert rows.shape == (len(path), 4)
        assert np.allclose(rows[:, 1], tr.f_vals)
