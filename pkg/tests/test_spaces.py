"""Distance formulas against independent embedding and reduction oracles."""

import math

import numpy as np
import pytest

from alexgeo import embeddings as emb
from alexgeo import nets, spaces
from alexgeo.errors import ConstructionError, DomainError, UnsupportedConstructionError
from alexgeo.spaces import (
    Cone,
    Ellipsoid,
    Interval,
    Join,
    Lens,
    ModelBall,
    Sphere,
    Suspension,
    cone_distance,
    distance,
    double_join,
    interval_distance,
    join_distance,
    lens_distance,
    points_equal,
    sphere_distance,
    suspension_distance,
    track_clamping,
    validate_point,
)

PI = math.pi
HALF_PI = math.pi / 2.0


def _rand_unit(rng, d):
    v = rng.standard_normal(d)
    return v / np.linalg.norm(v)


class TestSphereDistance:
    def test_antipodal(self):
        assert sphere_distance(np.array([1.0, 0.0]), np.array([-1.0, 0.0]), 1.0) == pytest.approx(PI)

    def test_identity(self):
        u = np.array([0.6, 0.8])
        assert sphere_distance(u, u, 0.5) == 0.0

    def test_quarter_arc_half_radius(self):
        # arccos(0) * (1/2) from the chord/angle relation
        d = sphere_distance(np.array([1.0, 0.0, 0.0]), np.array([0.0, 1.0, 0.0]), 0.5)
        assert d == pytest.approx(PI / 4.0, abs=1e-15)

    def test_non_unit_rejected_with_vector_in_message(self):
        with pytest.raises(DomainError, match="0.5"):
            sphere_distance(np.array([0.5, 0.0]), np.array([1.0, 0.0]))

    def test_range(self):
        rng = np.random.default_rng(0)
        for _ in range(200):
            d = sphere_distance(_rand_unit(rng, 4), _rand_unit(rng, 4), 0.75)
            assert 0.0 <= d <= PI * 0.75 + 1e-15


class TestIntervalDistance:
    def test_endpoints(self):
        assert interval_distance(0.0, PI, PI) == pytest.approx(PI)

    def test_same_point(self):
        assert interval_distance(0.3, 0.3, PI) == 0.0

    def test_absolute_difference(self):
        assert interval_distance(0.1, 0.9, PI) == pytest.approx(0.8)

    def test_out_of_domain(self):
        with pytest.raises(DomainError):
            interval_distance(-0.5, 0.1, 1.0)


class TestJoinDistance:
    def test_latitude_zero_reduces_to_left_factor(self):
        rng = np.random.default_rng(1)
        for _ in range(50):
            u, v = _rand_unit(rng, 2), _rand_unit(rng, 2)
            p = (u, 0.0, 0.5)
            q = (v, 0.0, 0.9)
            d = join_distance(p, q, lambda a, b: sphere_distance(a, b, 1.0),
                              lambda a, b: abs(a - b))
            assert d == pytest.approx(sphere_distance(u, v), abs=1e-12)

    def test_orthogonal_factors(self):
        p = (np.array([1.0, 0.0]), 0.0, 0.2)
        q = (np.array([-1.0, 0.0]), HALF_PI, 0.9)
        d = join_distance(p, q, lambda a, b: sphere_distance(a, b, 1.0), lambda a, b: abs(a - b))
        assert d == pytest.approx(HALF_PI, abs=1e-15)

    def test_circle_join_matches_three_sphere(self):
        # explicit isometric embedding into the unit 3-sphere as the oracle
        rng = np.random.default_rng(42)
        J = Join(Sphere(1, 1.0), Sphere(1, 1.0))
        pts = nets.random_points(J, 2000, rng)
        worst = 0.0
        for p, q in zip(pts[::2], pts[1::2]):
            d = distance(J, p, q)
            d_oracle = emb.sphere_chord_distance(
                emb.embed_join_circle_circle(p), emb.embed_join_circle_circle(q)
            )
            worst = max(worst, abs(d - d_oracle))
        assert worst <= 1e-12

    def test_bad_latitude(self):
        with pytest.raises(DomainError):
            join_distance((0.0, 2.0, 0.0), (0.0, 0.1, 0.0), lambda a, b: abs(a - b),
                          lambda a, b: abs(a - b))


class TestConeDistance:
    def test_apex_distance_is_radial(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            y0, y1 = _rand_unit(rng, 2), _rand_unit(rng, 2)
            for k in (-1.0, 0.0, 1.0):
                d = cone_distance(k, (0.0, y0), (0.7, y1),
                                  lambda a, b: sphere_distance(a, b, 1.0), 1.0 if k <= 0 else 1.2)
                assert d == pytest.approx(0.7, abs=1e-12)

    def test_flat_cone_degenerates_to_line(self):
        y0, y1 = np.array([1.0, 0.0]), np.array([-1.0, 0.0])
        d = cone_distance(0.0, (1.0, y0), (1.0, y1), lambda a, b: sphere_distance(a, b, 1.0), 2.0)
        assert d == pytest.approx(2.0, abs=1e-12)

    def test_spherical_cone_is_join_with_point(self):
        # C_1(S^2(1))(pi/2) against the join formula with a single-point factor,
        # matching latitudes via tau = pi/2 - t
        rng = np.random.default_rng(4)
        base = Sphere(2, 1.0)
        cone = Cone(1.0, base, HALF_PI)
        worst = 0.0
        for _ in range(5000):
            t0, t1 = rng.uniform(0.0, HALF_PI, 2)
            y0, y1 = _rand_unit(rng, 3), _rand_unit(rng, 3)
            d_cone = distance(cone, (t0, y0), (t1, y1))
            d_join = join_distance(
                (y0, HALF_PI - t0, None),
                (y1, HALF_PI - t1, None),
                lambda a, b: sphere_distance(a, b, 1.0),
                lambda a, b: 0.0,
            )
            worst = max(worst, abs(d_cone - d_join))
        assert worst <= 1e-12

    def test_cap_constraint_for_positive_curvature(self):
        with pytest.raises(ConstructionError):
            Cone(1.0, Sphere(1, 1.0), 2.0)
        with pytest.raises(DomainError):
            cone_distance(1.0, (0.1, np.array([1.0, 0.0])), (3.0, np.array([1.0, 0.0])),
                          lambda a, b: sphere_distance(a, b, 1.0), 1.5)


class TestSuspensionDistance:
    def test_pole_to_pole(self):
        d = suspension_distance((0.0, 0.1), (PI, 0.9), lambda a, b: abs(a - b))
        assert d == pytest.approx(PI, abs=1e-15)

    def test_equator_matches_base_up_to_pi(self):
        d = suspension_distance((HALF_PI, 0.1), (HALF_PI, 0.9), lambda a, b: abs(a - b))
        assert d == pytest.approx(0.8, abs=1e-12)

    def test_circle_suspension_matches_two_sphere(self):
        rng = np.random.default_rng(5)
        S = Suspension(Sphere(1, 1.0))
        pts = nets.random_points(S, 2000, rng)
        worst = 0.0
        for p, q in zip(pts[::2], pts[1::2]):
            d = distance(S, p, q)
            d_oracle = emb.sphere_chord_distance(
                emb.embed_suspension_circle(p), emb.embed_suspension_circle(q)
            )
            worst = max(worst, abs(d - d_oracle))
        assert worst <= 1e-12

    def test_suspension_equals_join_with_two_point_space(self):
        rng = np.random.default_rng(6)
        S = Suspension(Sphere(1, 1.0))
        J = Join(Sphere(0, 1.0), Sphere(1, 1.0))
        pts = nets.random_points(S, 400, rng)
        for p, q in zip(pts[::2], pts[1::2]):
            u1, y1 = p
            u2, y2 = q

            def to_join(u, y):
                if u <= HALF_PI:
                    return (np.array([1.0]), u, y)
                return (np.array([-1.0]), PI - u, y)

            assert distance(S, p, q) == pytest.approx(
                distance(J, to_join(u1, y1), to_join(u2, y2)), abs=1e-12
            )


class TestLensDistance:
    def test_hemisphere_matches_ambient_sphere(self):
        rng = np.random.default_rng(7)
        lens = Lens(2, PI)
        pts = nets.random_points(lens, 1000, rng)
        for p, q in zip(pts[::2], pts[1::2]):
            d = distance(lens, p, q)
            d_oracle = emb.sphere_chord_distance(emb.embed_lens(lens, p), emb.embed_lens(lens, q))
            assert d == pytest.approx(d_oracle, abs=1e-12)

    def test_sphere_factor_poles_realize_pi(self):
        lens = Lens(3, 1.0)
        p = (np.array([1.0, 0.0]), 0.0, 0.5)
        q = (np.array([-1.0, 0.0]), 0.0, 0.5)
        assert distance(lens, p, q) == pytest.approx(PI, abs=1e-15)

    def test_embedding_oracle_lens_2_in_three_sphere(self):
        rng = np.random.default_rng(8)
        lens = Lens(3, 2.0)
        pts = nets.random_points(lens, 20_000, rng)
        worst = 0.0
        for p, q in zip(pts[::2], pts[1::2]):
            worst = max(
                worst,
                abs(
                    distance(lens, p, q)
                    - emb.sphere_chord_distance(emb.embed_lens(lens, p), emb.embed_lens(lens, q))
                ),
            )
        assert worst <= 1e-12

    def test_alpha_domain(self):
        with pytest.raises(DomainError):
            Lens(3, -0.2)
        with pytest.raises(DomainError):
            lens_distance(3, 4.0, None, None)


class TestQuotientDistance:
    def test_trivial_group(self):
        from alexgeo.actions import GroupAction, identity_for

        base = Sphere(1, 1.0)
        act = GroupAction(space=base, elements=(identity_for(base),))
        Q = spaces.Quotient(base, act)
        u, v = np.array([1.0, 0.0]), np.array([0.0, 1.0])
        assert distance(Q, u, v) == pytest.approx(HALF_PI)

    def test_antipodal_identification(self):
        from alexgeo.actions import GroupAction, antipodal_map, identity_for

        base = Sphere(1, 1.0)
        act = GroupAction(space=base, elements=(identity_for(base), antipodal_map(base)))
        Q = spaces.Quotient(base, act)
        u = np.array([1.0, 0.0])
        assert distance(Q, u, -u) == 0.0

    def test_empty_action_rejected(self):
        class Empty:
            elements = ()

        with pytest.raises(ConstructionError):
            spaces.Quotient(Sphere(1, 1.0), Empty())

    def test_folded_lune_pole_to_tip_against_graph_geodesic(self):
        # brute-force min over the two elements, checked against a shortest
        # path through the net graph (independent length-structure oracle)
        from alexgeo.harness import projective_lens_quotient

        Q = projective_lens_quotient(2, 2.0)
        pole = (0.0, 1.0)
        tip = (HALF_PI, 2.0)
        d = distance(Q, pole, tip)
        assert d == pytest.approx(HALF_PI, abs=1e-12)
        net = nets.epsilon_net(Q, 0.04, 11)
        i = nets.nearest_index(net, pole)
        j = nets.nearest_index(net, tip)
        assert net.dist[i, j] == pytest.approx(HALF_PI, abs=2.0 * net.epsilon_effective)
        via_graph = nets.graph_geodesic(net, i, j)
        assert via_graph == pytest.approx(net.dist[i, j], abs=3.0 * net.epsilon_effective)


class TestDegeneratePoints:
    def test_cone_apex_ignores_base_coordinate(self):
        cone = Cone(1.0, Sphere(1, 1.0), 1.0)
        p = (0.0, np.array([1.0, 0.0]))
        q = (0.0, np.array([0.0, 1.0]))
        assert points_equal(cone, p, q)

    def test_join_latitude_zero_ignores_right(self):
        J = Join(Sphere(1, 1.0), Interval(1.0))
        u = np.array([1.0, 0.0])
        assert points_equal(J, (u, 0.0, 0.2), (u, 0.0, 0.9))

    def test_suspension_pole_ignores_base(self):
        S = Suspension(Sphere(1, 1.0))
        assert points_equal(S, (0.0, np.array([1.0, 0.0])), (0.0, np.array([0.0, 1.0])))


class TestDoubleJoin:
    def test_interval_doubles_to_circle(self):
        dbl = double_join(Interval(PI))
        assert dbl == Sphere(1, 1.0)  # circumference 2*pi

    def test_lens_doubles_to_sphere_join(self):
        dbl = double_join(Lens(3, PI))
        assert dbl == Join(Sphere(1, 1.0), Sphere(1, 1.0))

    def test_fundamental_domain_is_isometric(self):
        rng = np.random.default_rng(9)
        J = Join(Sphere(1, 1.0), Interval(2.0))
        dbl = double_join(J)
        pts = nets.random_points(J, 2000, rng)
        worst = 0.0
        for p, q in zip(pts[::2], pts[1::2]):
            (x1, t1, s1), (x2, t2, s2) = p, q
            pd = (x1, t1, emb.interval_point_on_double(s1, 2.0))
            qd = (x2, t2, emb.interval_point_on_double(s2, 2.0))
            worst = max(worst, abs(distance(J, p, q) - distance(dbl, pd, qd)))
        assert worst <= 1e-12

    def test_non_interval_right_factor_rejected(self):
        with pytest.raises(UnsupportedConstructionError):
            double_join(Join(Sphere(1, 1.0), Sphere(1, 1.0)))


class TestReassociation:
    def test_interval_joins_agree_under_correspondence(self):
        rng = np.random.default_rng(10)
        J1 = Join(Interval(PI), Interval(PI))
        J2 = Join(Interval(HALF_PI), Sphere(1, 1.0))
        pts = nets.random_points(J1, 20_000, rng)
        worst = 0.0
        for p, q in zip(pts[::2], pts[1::2]):
            d1 = distance(J1, p, q)
            d2 = distance(J2, emb.reassociate_interval_join(p), emb.reassociate_interval_join(q))
            worst = max(worst, abs(d1 - d2))
        assert worst <= 1e-9


class TestValidation:
    def test_join_factor_radius_window(self):
        with pytest.raises(ConstructionError):
            Join(Sphere(1, 0.4), Interval(1.0))
        with pytest.raises(ConstructionError):
            Join(Sphere(1, 1.2), Interval(1.0))
        Join(Sphere(1, 0.5), Interval(1.0))
        Join(Sphere(1, 1.0), Interval(1.0))

    def test_ellipsoid_join_factor_rejected(self):
        with pytest.raises(UnsupportedConstructionError):
            Join(Ellipsoid(0.6, 0.5, 0.4), Interval(1.0))

    def test_interval_length_window(self):
        with pytest.raises(ConstructionError):
            Interval(4.0)
        with pytest.raises(ConstructionError):
            Interval(0.0)

    def test_validate_point_surface_check(self):
        e = Ellipsoid(0.6, 1.0 / 3.0, 0.25)
        validate_point(e, np.array([0.6, 0.0, 0.0]))
        with pytest.raises(DomainError):
            validate_point(e, np.array([0.7, 0.0, 0.0]))

    def test_model_ball_cap(self):
        with pytest.raises(ConstructionError):
            ModelBall(1.0, 2.0, 2)


class TestClampInstrumentation:
    def test_valid_inputs_clamp_below_1e_12(self):
        rng = np.random.default_rng(12)
        J = Join(Sphere(1, 1.0), Sphere(1, 1.0))
        pts = nets.random_points(J, 2000, rng)
        with track_clamping() as stats:
            for p, q in zip(pts[::2], pts[1::2]):
                distance(J, p, q)
            net = nets.epsilon_net(Sphere(2, 1.0), 0.2, 3)
        assert stats.max_excess <= 1e-12


class TestBoundaryDistance:
    def test_ball_and_cone_are_radial(self):
        ball = ModelBall(1.0, 1.2, 2)
        assert spaces.boundary_distance(ball, (0.3, np.array([1.0, 0.0]))) == pytest.approx(0.9)
        cone = Cone(0.0, Sphere(1, 1.0), 2.0)
        assert spaces.boundary_distance(cone, (0.5, np.array([1.0, 0.0]))) == pytest.approx(1.5)

    def test_lens_matches_net_boundary_distance(self):
        lens = Lens(2, 1.5)
        net = nets.epsilon_net(lens, 0.04, 21)
        rng = np.random.default_rng(13)
        bdry = net.boundary_indices()
        for p in nets.random_points(lens, 40, rng):
            analytic = spaces.boundary_distance(lens, p)
            pk = spaces.pack_points(lens, [p])
            d = spaces.cross_distance(lens, pk, net.coords)[0]
            observed = float(d[bdry].min())
            assert observed == pytest.approx(analytic, abs=2.0 * net.epsilon_effective)
