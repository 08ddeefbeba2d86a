"""Space descriptors and their closed-form distance functions.

A descriptor is an immutable, recursive description of a metric space:
primitive factors (round spheres, intervals, ellipsoid surfaces) and
composite constructions (spherical join, curvature-k cone, suspension,
finite isometric quotient, lens, model ball).  Every descriptor except
the ellipsoid evaluates distances by an explicit formula; the ellipsoid
is handled by a graph geodesic engine built on a surface net (see
``alexgeo.nets``).

Point conventions per kind:

* ``Sphere(d, r)``    -- unit vector in R^(d+1); the radius scales the metric.
* ``Interval(L)``     -- scalar in [0, L].
* ``Ellipsoid``       -- Cartesian surface point in R^3.
* ``Join``            -- triple ``(left_point, t, right_point)``, t in [0, pi/2].
* ``Cone``            -- pair ``(t, base_point)``, t in [0, r0]; t = 0 is the apex.
* ``Suspension``      -- pair ``(u, base_point)``, colatitude u in [0, pi].
* ``Quotient``        -- a point of the base (an orbit representative).
* ``Lens(n, alpha)``  -- join coordinates over Sphere(n-2) * Interval(alpha).
* ``ModelBall``       -- pair ``(t, direction)``, polar coordinates about the center.

Degenerate coordinates compare equal through the distance function: the
cone apex ignores its base coordinate, a join point at latitude 0 ignores
its right coordinate, and so on.
"""

from __future__ import annotations

import math
from contextlib import contextmanager
from dataclasses import dataclass

import numpy as np

from .errors import ConstructionError, DomainError, UnsupportedConstructionError

PI = math.pi
HALF_PI = math.pi / 2.0

# ---------------------------------------------------------------------------
# clamp instrumentation
#
# arccos/arccosh arguments are clamped to their closed domains before
# evaluation.  On valid inputs the clamp magnitude stays below ~1e-12; the
# tracker lets tests assert that.
# ---------------------------------------------------------------------------


class _ClampStats:
    __slots__ = ("enabled", "max_excess", "count")

    def __init__(self):
        self.enabled = False
        self.max_excess = 0.0
        self.count = 0

    def reset(self):
        self.max_excess = 0.0
        self.count = 0


clamp_stats = _ClampStats()


@contextmanager
def track_clamping():
    """Context manager that records the worst arccos/arccosh clamp excess."""
    clamp_stats.reset()
    clamp_stats.enabled = True
    try:
        yield clamp_stats
    finally:
        clamp_stats.enabled = False


def _record_excess(excess: float):
    if excess > 0.0:
        clamp_stats.count += 1
        if excess > clamp_stats.max_excess:
            clamp_stats.max_excess = excess


def clamped_arccos(x):
    """arccos with the argument clamped to [-1, 1] (tracked when enabled)."""
    if np.isscalar(x) or isinstance(x, float):
        if clamp_stats.enabled:
            _record_excess(abs(float(x)) - 1.0)
        return math.acos(min(1.0, max(-1.0, float(x))))
    x = np.asarray(x, dtype=float)
    if clamp_stats.enabled and x.size:
        _record_excess(float(np.max(np.abs(x))) - 1.0)
    return np.arccos(np.clip(x, -1.0, 1.0))


def clamped_arccosh(x):
    """arccosh with the argument clamped to [1, inf) (tracked when enabled)."""
    if np.isscalar(x) or isinstance(x, float):
        if clamp_stats.enabled:
            _record_excess(1.0 - float(x))
        return math.acosh(max(1.0, float(x)))
    x = np.asarray(x, dtype=float)
    if clamp_stats.enabled and x.size:
        _record_excess(1.0 - float(np.min(x)))
    return np.arccosh(np.maximum(x, 1.0))


# ---------------------------------------------------------------------------
# descriptors
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Sphere:
    """Round sphere S^dim of the given radius, points as unit vectors."""

    dim: int
    radius: float = 1.0

    def __post_init__(self):
        if int(self.dim) != self.dim or self.dim < 0:
            raise ConstructionError(f"sphere dimension must be an integer >= 0, got {self.dim}")
        if not self.radius > 0.0:
            raise ConstructionError(f"sphere radius must be positive, got {self.radius}")
        object.__setattr__(self, "dim", int(self.dim))
        object.__setattr__(self, "radius", float(self.radius))

    @property
    def ambient_dim(self) -> int:
        return self.dim + 1


@dataclass(frozen=True)
class Interval:
    """Interval [0, length] with |s - t| distance; length restricted to (0, pi]."""

    length: float

    def __post_init__(self):
        if not (0.0 < self.length <= PI + 1e-12):
            raise ConstructionError(f"interval length must lie in (0, pi], got {self.length}")
        object.__setattr__(self, "length", float(min(self.length, PI)))


@dataclass(frozen=True)
class Ellipsoid:
    """Surface x^2/a^2 + y^2/b^2 + z^2/c^2 = 1 with its intrinsic metric."""

    a: float
    b: float
    c: float

    def __post_init__(self):
        for name in ("a", "b", "c"):
            v = float(getattr(self, name))
            if not v > 0.0:
                raise ConstructionError(f"ellipsoid semi-axis {name} must be positive, got {v}")
            object.__setattr__(self, name, v)

    @property
    def axes(self):
        return np.array([self.a, self.b, self.c])


@dataclass(frozen=True)
class Join:
    """Spherical join left * right with the cosine distance formula."""

    left: "SpaceDescriptor"
    right: "SpaceDescriptor"

    def __post_init__(self):
        _validate_join_factor(self.left, "left")
        _validate_join_factor(self.right, "right")


@dataclass(frozen=True)
class Cone:
    """Curvature-k cone over `base`, radial coordinate capped at r0."""

    k: float
    base: "SpaceDescriptor"
    r0: float

    def __post_init__(self):
        object.__setattr__(self, "k", float(self.k))
        object.__setattr__(self, "r0", float(self.r0))
        if not self.r0 > 0.0:
            raise ConstructionError(f"cone cap r0 must be positive, got {self.r0}")
        if self.k > 0.0 and self.r0 > HALF_PI / math.sqrt(self.k) + 1e-12:
            raise ConstructionError(
                f"cone with k={self.k} requires r0 <= pi/(2*sqrt(k)) = "
                f"{HALF_PI / math.sqrt(self.k):.6f}, got r0={self.r0}"
            )
        _validate_cone_base(self.base)


@dataclass(frozen=True)
class Suspension:
    """Spherical suspension of `base`: the join with a two-point space."""

    base: "SpaceDescriptor"

    def __post_init__(self):
        _validate_join_factor(self.base, "suspension base")


@dataclass(frozen=True, eq=False)
class Quotient:
    """Quotient of `base` by a finite isometry group (min-over-orbit metric)."""

    base: "SpaceDescriptor"
    action: object  # actions.GroupAction; typed loosely to avoid an import cycle

    def __post_init__(self):
        elements = getattr(self.action, "elements", None)
        if not elements:
            raise ConstructionError("quotient requires a group action with a nonempty element list")


@dataclass(frozen=True)
class Lens:
    """Lens of dihedral angle alpha in S^dim, stored with a half-angle interval.

    Join coordinates over Sphere(dim-2, 1) * Interval(alpha); the interval
    coordinate s runs over [0, alpha] and the two bounding faces sit at
    s = 0 and s = alpha.  alpha = pi gives exactly the closed hemisphere.
    """

    dim: int
    alpha: float

    def __post_init__(self):
        if int(self.dim) != self.dim or self.dim < 2:
            raise ConstructionError(f"lens dimension must be an integer >= 2, got {self.dim}")
        if not (0.0 < self.alpha <= PI + 1e-12):
            raise DomainError(f"lens angle must lie in (0, pi], got {self.alpha}")
        object.__setattr__(self, "dim", int(self.dim))
        object.__setattr__(self, "alpha", float(min(self.alpha, PI)))

    def as_join(self) -> Join:
        return Join(Sphere(self.dim - 2, 1.0), Interval(self.alpha))


@dataclass(frozen=True)
class ModelBall:
    """Closed ball of radius r0 in the constant-curvature-k space form."""

    k: float
    r0: float
    dim: int

    def __post_init__(self):
        object.__setattr__(self, "k", float(self.k))
        object.__setattr__(self, "r0", float(self.r0))
        if int(self.dim) != self.dim or self.dim < 1:
            raise ConstructionError(f"model ball dimension must be an integer >= 1, got {self.dim}")
        object.__setattr__(self, "dim", int(self.dim))
        if not self.r0 > 0.0:
            raise ConstructionError(f"model ball radius must be positive, got {self.r0}")
        if self.k > 0.0 and self.r0 > HALF_PI / math.sqrt(self.k) + 1e-12:
            raise ConstructionError(
                f"model ball with k={self.k} requires r0 <= pi/(2*sqrt(k)), got r0={self.r0}"
            )

    def as_cone(self) -> Cone:
        return Cone(self.k, Sphere(self.dim - 1, 1.0), self.r0)


SpaceDescriptor = (
    Sphere | Interval | Ellipsoid | Join | Cone | Suspension | Quotient | Lens | ModelBall
)


def _validate_join_factor(desc, side: str):
    """Factors of joins/suspensions must be unit-diameter-bounded curv >= 1 pieces."""
    if isinstance(desc, Sphere):
        if not (0.5 - 1e-12 <= desc.radius <= 1.0 + 1e-12):
            raise ConstructionError(
                f"{side} factor sphere radius must lie in [1/2, 1] for a curv >= 1 join, "
                f"got {desc.radius}"
            )
    elif isinstance(desc, (Interval, Lens)):
        pass
    elif isinstance(desc, Join):
        pass  # factors were validated on construction
    elif isinstance(desc, Suspension):
        pass
    elif isinstance(desc, Cone):
        if abs(desc.k - 1.0) > 1e-12 or desc.r0 > HALF_PI + 1e-12:
            raise ConstructionError(
                f"{side} factor cone must have k = 1 and r0 <= pi/2 to sit in a curv >= 1 join"
            )
    elif isinstance(desc, ModelBall):
        if abs(desc.k - 1.0) > 1e-12:
            raise ConstructionError(f"{side} factor model ball must have k = 1")
    elif isinstance(desc, Quotient):
        _validate_join_factor(desc.base, side)
    elif isinstance(desc, Ellipsoid):
        raise UnsupportedConstructionError(
            "ellipsoid factors are not supported in joins (no closed-form distance)"
        )
    else:
        raise ConstructionError(f"unsupported {side} join factor: {desc!r}")


def _validate_cone_base(desc):
    if isinstance(desc, Sphere):
        if desc.radius > 1.0 + 1e-12:
            raise ConstructionError(
                f"cone base sphere radius must be <= 1 (diameter <= pi), got {desc.radius}"
            )
    elif isinstance(desc, (Interval, Join, Suspension, Lens)):
        pass
    elif isinstance(desc, Quotient):
        _validate_cone_base(desc.base)
    elif isinstance(desc, Ellipsoid):
        raise UnsupportedConstructionError("ellipsoid cone bases are not supported")
    elif isinstance(desc, (Cone, ModelBall)):
        raise UnsupportedConstructionError("iterated cones are not supported")
    else:
        raise ConstructionError(f"unsupported cone base: {desc!r}")


# ---------------------------------------------------------------------------
# structural helpers
# ---------------------------------------------------------------------------


def space_dim(space) -> int:
    """Topological dimension of the described space."""
    if isinstance(space, Sphere):
        return space.dim
    if isinstance(space, Interval):
        return 1
    if isinstance(space, Ellipsoid):
        return 2
    if isinstance(space, Join):
        return space_dim(space.left) + space_dim(space.right) + 1
    if isinstance(space, (Cone, Suspension)):
        return space_dim(space.base) + 1
    if isinstance(space, Quotient):
        return space_dim(space.base)
    if isinstance(space, Lens):
        return space.dim
    if isinstance(space, ModelBall):
        return space.dim
    raise ConstructionError(f"unknown descriptor {space!r}")


def has_boundary(space) -> bool:
    if isinstance(space, (Sphere, Ellipsoid)):
        return False
    if isinstance(space, Interval):
        return True
    if isinstance(space, Join):
        return has_boundary(space.left) or has_boundary(space.right)
    if isinstance(space, Cone):
        return True  # the cap t = r0 (plus any base boundary)
    if isinstance(space, Suspension):
        return has_boundary(space.base)
    if isinstance(space, Quotient):
        return has_boundary(space.base)
    if isinstance(space, (Lens, ModelBall)):
        return True
    raise ConstructionError(f"unknown descriptor {space!r}")


def diameter_bound(space) -> float:
    """Cheap upper bound for the diameter, used for argument validation."""
    if isinstance(space, Sphere):
        return PI * space.radius
    if isinstance(space, Interval):
        return space.length
    if isinstance(space, Ellipsoid):
        return PI * max(space.a, space.b, space.c)
    if isinstance(space, (Join, Suspension, Lens)):
        return PI
    if isinstance(space, Cone):
        if space.k > 0:
            return PI / math.sqrt(space.k)
        return 2.0 * space.r0 if space.k == 0 else 2.0 * space.r0
    if isinstance(space, Quotient):
        return diameter_bound(space.base)
    if isinstance(space, ModelBall):
        return diameter_bound(space.as_cone())
    raise ConstructionError(f"unknown descriptor {space!r}")


# ---------------------------------------------------------------------------
# scalar distance operations
# ---------------------------------------------------------------------------

_UNIT_TOL = 1e-12


def sphere_distance(u, v, radius: float = 1.0) -> float:
    """Great-circle distance radius * arccos(<u, v>) between unit vectors."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    for name, w in (("u", u), ("v", v)):
        nrm = float(np.linalg.norm(w))
        if abs(nrm - 1.0) > _UNIT_TOL:
            raise DomainError(f"sphere point {name} = {w.tolist()} is not a unit vector (|{name}| = {nrm!r})")
    if not radius > 0.0:
        raise DomainError(f"sphere radius must be positive, got {radius}")
    return radius * clamped_arccos(float(np.dot(u, v)))


def interval_distance(s: float, t: float, length: float) -> float:
    """|s - t| with a domain check against [0, length]."""
    for name, x in (("s", s), ("t", t)):
        if not (-1e-12 <= x <= length + 1e-12):
            raise DomainError(f"interval coordinate {name} = {x} outside [0, {length}]")
    return abs(float(s) - float(t))


def join_distance(p, q, left_metric, right_metric) -> float:
    """Join distance: cos d = cos t1 cos t2 cos dL + sin t1 sin t2 cos dR.

    Factor distances are clamped at pi before taking cosines so a sloppy
    base metric cannot push the law of cosines outside its domain.
    """
    x1, t1, y1 = p
    x2, t2, y2 = q
    for name, t in (("t1", t1), ("t2", t2)):
        if not (-1e-12 <= t <= HALF_PI + 1e-12):
            raise DomainError(f"join latitude {name} = {t} outside [0, pi/2]")
    dl = min(float(left_metric(x1, x2)), PI)
    dr = min(float(right_metric(y1, y2)), PI)
    c = math.cos(t1) * math.cos(t2) * math.cos(dl) + math.sin(t1) * math.sin(t2) * math.cos(dr)
    return clamped_arccos(c)


def cone_distance(k: float, p, q, base_metric, r0: float) -> float:
    """Law-of-cosines distance in the curvature-k cone with cap r0."""
    t0, y0 = p
    t1, y1 = q
    if k > 0.0 and r0 > HALF_PI / math.sqrt(k) + 1e-12:
        raise ConstructionError(f"cone with k={k} requires r0 <= pi/(2*sqrt(k))")
    for name, t in (("t0", t0), ("t1", t1)):
        if not (-1e-12 <= t <= r0 + 1e-12):
            raise DomainError(f"cone radial coordinate {name} = {t} outside [0, {r0}]")
    theta = min(float(base_metric(y0, y1)), PI)
    return _cone_law(k, float(t0), float(t1), math.cos(theta))


def _cone_law(k: float, t0: float, t1: float, ctheta: float) -> float:
    if k == 0.0:
        v = t0 * t0 + t1 * t1 - 2.0 * t0 * t1 * ctheta
        return math.sqrt(max(v, 0.0))
    if k > 0.0:
        s = math.sqrt(k)
        c = math.cos(s * t0) * math.cos(s * t1) + math.sin(s * t0) * math.sin(s * t1) * ctheta
        return clamped_arccos(c) / s
    s = math.sqrt(-k)
    c = math.cosh(s * t0) * math.cosh(s * t1) - math.sinh(s * t0) * math.sinh(s * t1) * ctheta
    return clamped_arccosh(c) / s


def suspension_distance(p, q, base_metric) -> float:
    """Suspension distance via colatitudes: cos d = cos u1 cos u2 + sin sin cos dY."""
    u1, y1 = p
    u2, y2 = q
    for name, u in (("u1", u1), ("u2", u2)):
        if not (-1e-12 <= u <= PI + 1e-12):
            raise DomainError(f"suspension colatitude {name} = {u} outside [0, pi]")
    theta = min(float(base_metric(y1, y2)), PI)
    c = math.cos(u1) * math.cos(u2) + math.sin(u1) * math.sin(u2) * math.cos(theta)
    return clamped_arccos(c)


def quotient_distance(base_metric, action, x, y) -> float:
    """min over group elements g of d(x, g y)."""
    elements = getattr(action, "elements", None)
    if not elements:
        raise ConstructionError("quotient distance requires a nonempty group element list")
    return min(float(base_metric(x, g.apply_point(y))) for g in elements)


def lens_distance(n: int, alpha: float, p, q) -> float:
    """Distance in the lens L_alpha^n via its join coordinates."""
    lens = Lens(n, alpha)
    sphere = Sphere(lens.dim - 2, 1.0)
    return join_distance(
        p,
        q,
        lambda a, b: sphere_distance(a, b, sphere.radius),
        lambda a, b: interval_distance(a, b, lens.alpha),
    )


def double_join(space):
    """Double of a join-with-interval space: the interval closes into a circle.

    D(A * I_len) = A * S^1(len/pi), a circle of circumference 2*len.  A bare
    interval doubles to the circle itself.  Anything else is rejected: gluing
    along a general boundary is a different algorithm class.
    """
    if isinstance(space, Interval):
        return Sphere(1, space.length / PI)
    if isinstance(space, Lens):
        space = space.as_join()
    if isinstance(space, Join) and isinstance(space.right, Interval):
        return Join(space.left, Sphere(1, space.right.length / PI))
    raise UnsupportedConstructionError(
        "doubling is implemented only for intervals and join-with-interval spaces"
    )


def distance(space, p, q) -> float:
    """Generic scalar distance dispatcher for closed-form descriptors."""
    if isinstance(space, Sphere):
        return sphere_distance(p, q, space.radius)
    if isinstance(space, Interval):
        return interval_distance(p, q, space.length)
    if isinstance(space, Join):
        return join_distance(
            p, q, lambda a, b: distance(space.left, a, b), lambda a, b: distance(space.right, a, b)
        )
    if isinstance(space, Cone):
        return cone_distance(space.k, p, q, lambda a, b: distance(space.base, a, b), space.r0)
    if isinstance(space, Suspension):
        return suspension_distance(p, q, lambda a, b: distance(space.base, a, b))
    if isinstance(space, Quotient):
        return quotient_distance(lambda a, b: distance(space.base, a, b), space.action, p, q)
    if isinstance(space, Lens):
        return lens_distance(space.dim, space.alpha, p, q)
    if isinstance(space, ModelBall):
        cone = space.as_cone()
        return cone_distance(cone.k, p, q, lambda a, b: distance(cone.base, a, b), cone.r0)
    if isinstance(space, Ellipsoid):
        from .nets import ellipsoid_distance

        return ellipsoid_distance(p, q, space.a, space.b, space.c)
    raise ConstructionError(f"unknown descriptor {space!r}")


def points_equal(space, p, q, tol: float = 1e-12) -> bool:
    """Metric equality of points (handles degenerate coordinates)."""
    return distance(space, p, q) <= tol


def validate_point(space, p):
    """Raise DomainError when p violates the descriptor's coordinate domain."""
    if isinstance(space, Sphere):
        v = np.asarray(p, dtype=float)
        if v.shape != (space.ambient_dim,):
            raise DomainError(f"sphere point must have {space.ambient_dim} components, got {v.shape}")
        if abs(float(np.linalg.norm(v)) - 1.0) > _UNIT_TOL:
            raise DomainError(f"sphere point {v.tolist()} is not a unit vector")
    elif isinstance(space, Interval):
        if not (-1e-12 <= p <= space.length + 1e-12):
            raise DomainError(f"interval coordinate {p} outside [0, {space.length}]")
    elif isinstance(space, Ellipsoid):
        v = np.asarray(p, dtype=float)
        lvl = float(np.sum((v / space.axes) ** 2))
        if abs(lvl - 1.0) > 1e-9:
            raise DomainError(f"point {v.tolist()} is off the ellipsoid surface (level {lvl!r})")
    elif isinstance(space, Join):
        x, t, y = p
        if not (-1e-12 <= t <= HALF_PI + 1e-12):
            raise DomainError(f"join latitude {t} outside [0, pi/2]")
        validate_point(space.left, x)
        validate_point(space.right, y)
    elif isinstance(space, Cone):
        t, y = p
        if not (-1e-12 <= t <= space.r0 + 1e-12):
            raise DomainError(f"cone radial coordinate {t} outside [0, {space.r0}]")
        validate_point(space.base, y)
    elif isinstance(space, Suspension):
        u, y = p
        if not (-1e-12 <= u <= PI + 1e-12):
            raise DomainError(f"suspension colatitude {u} outside [0, pi]")
        validate_point(space.base, y)
    elif isinstance(space, Quotient):
        validate_point(space.base, p)
    elif isinstance(space, Lens):
        x, t, s = p
        if not (-1e-12 <= t <= HALF_PI + 1e-12):
            raise DomainError(f"lens latitude {t} outside [0, pi/2]")
        validate_point(Sphere(space.dim - 2, 1.0), x)
        if not (-1e-12 <= s <= space.alpha + 1e-12):
            raise DomainError(f"lens interval coordinate {s} outside [0, {space.alpha}]")
    elif isinstance(space, ModelBall):
        t, u = p
        if not (-1e-12 <= t <= space.r0 + 1e-12):
            raise DomainError(f"ball radial coordinate {t} outside [0, {space.r0}]")
        validate_point(Sphere(space.dim - 1, 1.0), u)
    else:
        raise ConstructionError(f"unknown descriptor {space!r}")


def boundary_distance(space, p) -> float:
    """Analytic distance to the boundary (model ball, cone, lens only)."""
    if isinstance(space, ModelBall):
        t, _ = p
        return space.r0 - float(t)
    if isinstance(space, Cone):
        if has_boundary(space.base):
            raise UnsupportedConstructionError(
                "analytic boundary distance supports cones over boundaryless bases only"
            )
        t, _ = p
        return space.r0 - float(t)
    if isinstance(space, Lens):
        _, t, s = p
        return _lens_boundary_distance(float(t), float(s), space.alpha)
    raise UnsupportedConstructionError(
        f"no analytic boundary distance for {type(space).__name__}"
    )


def _lens_boundary_distance(t: float, s: float, alpha: float) -> float:
    # distance to the face at gap ds is arcsin(sin t sin ds) while the foot
    # stays interior (ds <= pi/2); beyond that the rim (t' = 0) is closest.
    def face(ds: float) -> float:
        if ds >= HALF_PI:
            return t
        return math.asin(min(1.0, math.sin(t) * math.sin(ds)))

    return min(face(s), face(alpha - s))


# ---------------------------------------------------------------------------
# packed coordinates and vectorized cross-distances
# ---------------------------------------------------------------------------


@dataclass
class JoinCoords:
    left: object
    t: np.ndarray
    right: object


@dataclass
class ConeCoords:
    t: np.ndarray
    base: object


@dataclass
class SuspCoords:
    u: np.ndarray
    base: object


def pack_points(space, points):
    """Pack a list of scalar points into column arrays for vectorized work."""
    if isinstance(space, Sphere):
        return np.asarray([np.asarray(p, dtype=float) for p in points], dtype=float).reshape(
            len(points), space.ambient_dim
        )
    if isinstance(space, Interval):
        return np.asarray([float(p) for p in points], dtype=float)
    if isinstance(space, Ellipsoid):
        return np.asarray([np.asarray(p, dtype=float) for p in points], dtype=float).reshape(
            len(points), 3
        )
    if isinstance(space, Join):
        return JoinCoords(
            left=pack_points(space.left, [p[0] for p in points]),
            t=np.asarray([float(p[1]) for p in points], dtype=float),
            right=pack_points(space.right, [p[2] for p in points]),
        )
    if isinstance(space, Cone):
        return ConeCoords(
            t=np.asarray([float(p[0]) for p in points], dtype=float),
            base=pack_points(space.base, [p[1] for p in points]),
        )
    if isinstance(space, Suspension):
        return SuspCoords(
            u=np.asarray([float(p[0]) for p in points], dtype=float),
            base=pack_points(space.base, [p[1] for p in points]),
        )
    if isinstance(space, Quotient):
        return pack_points(space.base, points)
    if isinstance(space, Lens):
        j = space.as_join()
        return pack_points(j, points)
    if isinstance(space, ModelBall):
        return pack_points(space.as_cone(), points)
    raise ConstructionError(f"unknown descriptor {space!r}")


def coords_len(space, coords) -> int:
    if isinstance(space, (Sphere, Interval, Ellipsoid)):
        return int(np.asarray(coords).shape[0])
    if isinstance(space, Join):
        return coords.t.shape[0]
    if isinstance(space, Cone):
        return coords.t.shape[0]
    if isinstance(space, Suspension):
        return coords.u.shape[0]
    if isinstance(space, Quotient):
        return coords_len(space.base, coords)
    if isinstance(space, Lens):
        return coords.t.shape[0]
    if isinstance(space, ModelBall):
        return coords.t.shape[0]
    raise ConstructionError(f"unknown descriptor {space!r}")


def coords_take(space, coords, idx):
    """Sub-select packed coordinates by an index array or slice."""
    if isinstance(space, (Sphere, Interval, Ellipsoid)):
        return np.asarray(coords)[idx]
    if isinstance(space, Join):
        return JoinCoords(
            coords_take(space.left, coords.left, idx),
            coords.t[idx],
            coords_take(space.right, coords.right, idx),
        )
    if isinstance(space, Cone):
        return ConeCoords(coords.t[idx], coords_take(space.base, coords.base, idx))
    if isinstance(space, Suspension):
        return SuspCoords(coords.u[idx], coords_take(space.base, coords.base, idx))
    if isinstance(space, Quotient):
        return coords_take(space.base, coords, idx)
    if isinstance(space, Lens):
        j = space.as_join()
        return coords_take(j, coords, idx)
    if isinstance(space, ModelBall):
        return coords_take(space.as_cone(), coords, idx)
    raise ConstructionError(f"unknown descriptor {space!r}")


def coords_concat(space, parts):
    if isinstance(space, (Sphere, Interval, Ellipsoid)):
        return np.concatenate([np.asarray(p) for p in parts], axis=0)
    if isinstance(space, Join):
        return JoinCoords(
            coords_concat(space.left, [p.left for p in parts]),
            np.concatenate([p.t for p in parts]),
            coords_concat(space.right, [p.right for p in parts]),
        )
    if isinstance(space, Cone):
        return ConeCoords(
            np.concatenate([p.t for p in parts]),
            coords_concat(space.base, [p.base for p in parts]),
        )
    if isinstance(space, Suspension):
        return SuspCoords(
            np.concatenate([p.u for p in parts]),
            coords_concat(space.base, [p.base for p in parts]),
        )
    if isinstance(space, Quotient):
        return coords_concat(space.base, parts)
    if isinstance(space, Lens):
        return coords_concat(space.as_join(), parts)
    if isinstance(space, ModelBall):
        return coords_concat(space.as_cone(), parts)
    raise ConstructionError(f"unknown descriptor {space!r}")


def unpack_point(space, coords, i: int):
    if isinstance(space, (Sphere, Ellipsoid)):
        return np.asarray(coords)[i]
    if isinstance(space, Interval):
        return float(np.asarray(coords)[i])
    if isinstance(space, Join):
        return (
            unpack_point(space.left, coords.left, i),
            float(coords.t[i]),
            unpack_point(space.right, coords.right, i),
        )
    if isinstance(space, Cone):
        return (float(coords.t[i]), unpack_point(space.base, coords.base, i))
    if isinstance(space, Suspension):
        return (float(coords.u[i]), unpack_point(space.base, coords.base, i))
    if isinstance(space, Quotient):
        return unpack_point(space.base, coords, i)
    if isinstance(space, Lens):
        x, t, s = unpack_point(space.as_join(), coords, i)
        return (x, t, s)
    if isinstance(space, ModelBall):
        return unpack_point(space.as_cone(), coords, i)
    raise ConstructionError(f"unknown descriptor {space!r}")


def cross_distance(space, A, B) -> np.ndarray:
    """Pairwise distance matrix (len(A), len(B)) between packed coordinate sets."""
    if isinstance(space, Sphere):
        A2 = np.atleast_2d(np.asarray(A, dtype=float))
        B2 = np.atleast_2d(np.asarray(B, dtype=float))
        return space.radius * clamped_arccos(A2 @ B2.T)
    if isinstance(space, Interval):
        a = np.asarray(A, dtype=float)
        b = np.asarray(B, dtype=float)
        return np.abs(a[:, None] - b[None, :])
    if isinstance(space, Join):
        cl = np.cos(np.minimum(cross_distance(space.left, A.left, B.left), PI))
        cr = np.cos(np.minimum(cross_distance(space.right, A.right, B.right), PI))
        ca, sa = np.cos(A.t), np.sin(A.t)
        cb, sb = np.cos(B.t), np.sin(B.t)
        c = (ca[:, None] * cb[None, :]) * cl + (sa[:, None] * sb[None, :]) * cr
        return clamped_arccos(c)
    if isinstance(space, Cone):
        ctheta = np.cos(np.minimum(cross_distance(space.base, A.base, B.base), PI))
        return _cone_law_array(space.k, A.t, B.t, ctheta)
    if isinstance(space, Suspension):
        ctheta = np.cos(np.minimum(cross_distance(space.base, A.base, B.base), PI))
        c = np.cos(A.u)[:, None] * np.cos(B.u)[None, :] + np.sin(A.u)[:, None] * np.sin(B.u)[
            None, :
        ] * ctheta
        return clamped_arccos(c)
    if isinstance(space, Quotient):
        return _quotient_cross(space, A, B)
    if isinstance(space, Lens):
        return cross_distance(space.as_join(), A, B)
    if isinstance(space, ModelBall):
        return cross_distance(space.as_cone(), A, B)
    if isinstance(space, Ellipsoid):
        raise UnsupportedConstructionError(
            "ellipsoid distances require a net-backed geodesic engine, not a closed form"
        )
    raise ConstructionError(f"unknown descriptor {space!r}")


def _cone_law_array(k: float, ta, tb, ctheta) -> np.ndarray:
    ta = np.asarray(ta, dtype=float)
    tb = np.asarray(tb, dtype=float)
    if k == 0.0:
        v = ta[:, None] ** 2 + tb[None, :] ** 2 - 2.0 * (ta[:, None] * tb[None, :]) * ctheta
        return np.sqrt(np.maximum(v, 0.0))
    if k > 0.0:
        s = math.sqrt(k)
        c = np.cos(s * ta)[:, None] * np.cos(s * tb)[None, :] + np.sin(s * ta)[:, None] * np.sin(
            s * tb
        )[None, :] * ctheta
        return clamped_arccos(c) / s
    s = math.sqrt(-k)
    c = np.cosh(s * ta)[:, None] * np.cosh(s * tb)[None, :] - np.sinh(s * ta)[:, None] * np.sinh(
        s * tb
    )[None, :] * ctheta
    return clamped_arccosh(c) / s


def _quotient_cross(space: Quotient, A, B) -> np.ndarray:
    from .actions import apply_isometry  # local import to avoid a cycle

    base = space.base
    elements = space.action.elements
    # Spheres admit a fast path: min distance = radius * arccos(max cos).
    if isinstance(base, Sphere):
        A2 = np.atleast_2d(np.asarray(A, dtype=float))
        best = None
        for g in elements:
            gB = np.atleast_2d(np.asarray(apply_isometry(base, g, B), dtype=float))
            dots = A2 @ gB.T
            best = dots if best is None else np.maximum(best, dots)
        return base.radius * clamped_arccos(best)
    best = None
    for g in elements:
        gB = apply_isometry(base, g, B)
        d = cross_distance(base, A, gB)
        best = d if best is None else np.minimum(best, d)
    return best


def elementwise_distance(space, A, B) -> np.ndarray:
    """Distances between paired packed coordinates (equal lengths)."""
    if isinstance(space, Sphere):
        dots = np.einsum("ij,ij->i", np.atleast_2d(A), np.atleast_2d(B))
        return space.radius * clamped_arccos(dots)
    if isinstance(space, Interval):
        return np.abs(np.asarray(A, dtype=float) - np.asarray(B, dtype=float))
    if isinstance(space, Join):
        cl = np.cos(np.minimum(elementwise_distance(space.left, A.left, B.left), PI))
        cr = np.cos(np.minimum(elementwise_distance(space.right, A.right, B.right), PI))
        c = np.cos(A.t) * np.cos(B.t) * cl + np.sin(A.t) * np.sin(B.t) * cr
        return clamped_arccos(c)
    if isinstance(space, Cone):
        ct = np.cos(np.minimum(elementwise_distance(space.base, A.base, B.base), PI))
        k = space.k
        if k == 0.0:
            v = A.t**2 + B.t**2 - 2.0 * A.t * B.t * ct
            return np.sqrt(np.maximum(v, 0.0))
        if k > 0.0:
            s = math.sqrt(k)
            c = np.cos(s * A.t) * np.cos(s * B.t) + np.sin(s * A.t) * np.sin(s * B.t) * ct
            return clamped_arccos(c) / s
        s = math.sqrt(-k)
        c = np.cosh(s * A.t) * np.cosh(s * B.t) - np.sinh(s * A.t) * np.sinh(s * B.t) * ct
        return clamped_arccosh(c) / s
    if isinstance(space, Suspension):
        ct = np.cos(np.minimum(elementwise_distance(space.base, A.base, B.base), PI))
        c = np.cos(A.u) * np.cos(B.u) + np.sin(A.u) * np.sin(B.u) * ct
        return clamped_arccos(c)
    if isinstance(space, Quotient):
        from .actions import apply_isometry

        best = None
        for g in space.action.elements:
            d = elementwise_distance(space.base, A, apply_isometry(space.base, g, B))
            best = d if best is None else np.minimum(best, d)
        return best
    if isinstance(space, Lens):
        return elementwise_distance(space.as_join(), A, B)
    if isinstance(space, ModelBall):
        return elementwise_distance(space.as_cone(), A, B)
    raise ConstructionError(f"unknown descriptor {space!r}")


def self_distance_matrix(space, coords, block: int = 512) -> np.ndarray:
    """Full symmetric distance matrix, computed in row blocks to cap memory."""
    n = coords_len(space, coords)
    D = np.empty((n, n), dtype=float)
    for start in range(0, n, block):
        idx = np.arange(start, min(start + block, n))
        D[idx] = cross_distance(space, coords_take(space, coords, idx), coords)
    # canonicalize: the true matrix is symmetric with a zero diagonal, but
    # quotient factors may round differently across the diagonal (d(x, gy)
    # vs d(y, g^-1 x) evaluate in different orders)
    np.minimum(D, D.T, out=D)
    np.fill_diagonal(D, 0.0)
    return D
