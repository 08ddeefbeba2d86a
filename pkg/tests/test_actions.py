"""Group action construction, validation, and the cyclic surrogate."""

import math

import numpy as np
import pytest

from alexgeo import actions, nets, spaces
from alexgeo.errors import ConstructionError
from alexgeo.spaces import Cone, Interval, Join, Quotient, Sphere, Suspension, distance

PI = math.pi
HALF_PI = math.pi / 2.0


def _z2_join(length=1.0):
    base = Join(Sphere(1, 1.0), Interval(length))
    g = actions.JoinMap(actions.antipodal_map(Sphere(1, 1.0)), actions.IntervalReflection(length))
    return base, actions.GroupAction(space=base, elements=(actions.identity_for(base), g))


class TestValidation:
    def test_z2_join_action_passes(self):
        base, act = _z2_join()
        audit = actions.validate_action(base, act, n_pairs=300)
        assert audit.passed
        assert audit.has_identity
        assert audit.closure_defect <= 1e-9
        assert audit.isometry_defect <= 1e-9

    def test_latitude_preserved_exactly(self):
        base, act = _z2_join()
        audit = actions.validate_action(base, act, n_pairs=200)
        assert audit.latitude_defect == 0.0

    def test_non_closed_list_fails(self):
        base = Sphere(1, 1.0)
        rot = actions.OrthogonalMap(actions.rotation_matrix(2.0 * PI / 3.0))
        act = actions.GroupAction(space=base, elements=(actions.identity_for(base), rot))
        audit = actions.validate_action(base, act, n_pairs=50)
        assert not audit.passed  # missing rot^2

    def test_generator_closure(self):
        base = Sphere(1, 1.0)
        rot = actions.OrthogonalMap(actions.rotation_matrix(2.0 * PI / 5.0))
        act = actions.group_from_generators(base, [rot])
        assert act.order == 5
        audit = actions.validate_action(base, act, n_pairs=100)
        assert audit.passed


class TestCyclicApproximation:
    def test_order_validation(self):
        with pytest.raises(ConstructionError):
            actions.cyclic_approximation(Sphere(1, 1.0), 1)

    def test_m2_on_circle_is_antipodal(self):
        base = Sphere(1, 1.0)
        act = actions.cyclic_approximation(base, 2)
        Q = Quotient(base, act)
        net = nets.epsilon_net(Q, 0.05, 3)
        # the antipodal circle quotient is a circle of half circumference
        assert net.dist.max() == pytest.approx(HALF_PI, abs=2.0 * net.epsilon_effective)

    def test_monotone_in_subgroup_chain(self):
        base = Sphere(3, 1.0)
        rng = np.random.default_rng(0)
        pairs = [(p, q) for p, q in zip(nets.random_points(base, 60, rng),
                                        nets.random_points(base, 60, rng))]
        for m in (8, 16, 32):
            small = actions.cyclic_approximation(base, m)
            big = actions.cyclic_approximation(base, 2 * m)
            for x, y in pairs:
                d_small = spaces.quotient_distance(
                    lambda a, b: distance(base, a, b), small, x, y
                )
                d_big = spaces.quotient_distance(lambda a, b: distance(base, a, b), big, x, y)
                assert d_big <= d_small + 1e-12
                assert d_small - d_big <= 2.0 * PI / m + 1e-12

    def test_hopf_orbits_have_unit_speed(self):
        base = Sphere(3, 1.0)
        act = actions.cyclic_approximation(base, 64)
        rng = np.random.default_rng(1)
        p = nets.random_points(base, 1, rng)[0]
        g = act.elements[1]
        assert distance(base, p, g.apply_point(p)) == pytest.approx(2.0 * PI / 64, abs=1e-12)

    def test_unsupported_base(self):
        with pytest.raises(ConstructionError):
            actions.cyclic_approximation(Sphere(2, 1.0), 8)


class TestJsonGenerators:
    def test_factor_shorthand(self):
        base = Join(Sphere(1, 1.0), Interval(1.0))
        act = actions.action_from_json(
            base,
            {"generators": [
                {"type": "antipodal", "factor": "left"},
                {"type": "reflection", "factor": "right"},
            ]},
        )
        # the two commuting involutions generate the Klein four-group
        assert act.order == 4
        assert actions.validate_action(base, act, n_pairs=100).passed

    def test_structured_generator(self):
        base = Suspension(Interval(1.0))
        act = actions.action_from_json(
            base,
            {"generators": [{"type": "suspension_map", "flip": True,
                             "base": {"type": "reflection"}}],
             "order": 2},
        )
        assert act.order == 2

    def test_declared_order_mismatch(self):
        base = Sphere(1, 1.0)
        with pytest.raises(ConstructionError):
            actions.action_from_json(
                base, {"generators": [{"type": "rotation", "order": 6}], "order": 5}
            )

    def test_round_trip_through_descriptor_json(self):
        from alexgeo import serialize

        base, act = _z2_join()
        Q = Quotient(base, act)
        payload = serialize.space_to_json(Q)
        Q2 = serialize.space_from_json(payload)
        rng = np.random.default_rng(2)
        for p, q in zip(nets.random_points(base, 40, rng), nets.random_points(base, 40, rng)):
            assert distance(Q, p, q) == pytest.approx(distance(Q2, p, q), abs=1e-12)

    def test_hopf_generator(self):
        base = Sphere(3, 1.0)
        act = actions.action_from_json(base, {"generators": [{"type": "hopf", "order": 8}]})
        assert act.order == 8


class TestConeActions:
    def test_cap_rotation_preserves_radial_coordinate(self):
        cap = Cone(1.0, Sphere(1, 1.0), 1.0)
        g = actions.ConeMap(actions.OrthogonalMap(actions.rotation_matrix(PI)))
        p = (0.4, np.array([1.0, 0.0]))
        t, y = g.apply_point(p)
        assert t == 0.4
        assert np.allclose(y, [-1.0, 0.0])

    def test_cap_reflection_is_isometry(self):
        cap = Cone(1.0, Sphere(1, 1.0), 1.0)
        g = actions.ConeMap(actions.OrthogonalMap(actions.circle_reflection_matrix()))
        act = actions.GroupAction(space=cap, elements=(actions.identity_for(cap), g))
        audit = actions.validate_action(cap, act, n_pairs=300)
        assert audit.passed
