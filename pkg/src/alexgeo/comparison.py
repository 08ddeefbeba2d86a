"""Model convexity functions, Riccati integration, and comparison audits.

The model triple (k, lambda0, r0) describes the constant-curvature ball
whose boundary has shape-operator eigenvalue -lambda0 for the inward
normal.  lambda(r) solves the Riccati equation lam' + lam^2 = -k from
lam(0) = -lambda0; phi solves phi'' + k phi = -lambda0 with phi(0) = 0,
phi'(0) = 1; fbar is the generic solution of the same ODE from arbitrary
initial data.  The audits compare f = phi(distance to boundary) along
analytically generated geodesics against fbar, probe the second-order
boundary-convexity inequality at sampled foot points, and check sampled
hinges against the constant-curvature law of cosines.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import spaces
from .errors import ConstructionError, DomainError, PreconditionError, SingularityError
from .nets import random_points
from .spaces import (
    Cone,
    Lens,
    ModelBall,
    PI,
    HALF_PI,
    Sphere,
    boundary_distance,
    clamped_arccos,
    distance,
)

_CANONICAL_K = (-1.0, 0.0, 1.0)


def _check_canonical_k(k: float):
    if float(k) not in _CANONICAL_K:
        raise DomainError(f"closed forms are exposed for k in {{-1, 0, 1}} only, got {k}")


def model_inradius(k: float, lambda0: float) -> float:
    """r0 with lambda0 = 1/r0 (k=0), cot r0 (k=1), coth r0 (k=-1)."""
    _check_canonical_k(k)
    if not lambda0 > 0.0:
        raise DomainError(f"lambda0 must be positive, got {lambda0}")
    if k == 0.0:
        return 1.0 / lambda0
    if k == 1.0:
        return math.atan(1.0 / lambda0)
    if lambda0 <= 1.0:
        raise DomainError(
            f"k=-1 admits a finite model ball only for lambda0 > 1, got {lambda0}"
        )
    return math.atanh(1.0 / lambda0)


def model_lambda0(k: float, r0: float) -> float:
    """The boundary convexity of the model ball of radius r0."""
    _check_canonical_k(k)
    if not r0 > 0.0:
        raise DomainError(f"r0 must be positive, got {r0}")
    if k == 0.0:
        return 1.0 / r0
    if k == 1.0:
        if r0 > HALF_PI + 1e-12:
            raise DomainError(f"k=1 model balls require r0 <= pi/2, got {r0}")
        return 1.0 / math.tan(r0)
    return 1.0 / math.tanh(r0)


@dataclass(frozen=True)
class ComparisonModel:
    """The triple (k, lambda0, r0) with lambda0 and r0 tied by the model relation."""

    k: float
    lambda0: float
    r0: float

    def __post_init__(self):
        _check_canonical_k(self.k)
        if not self.lambda0 > 0.0:
            raise ConstructionError(f"lambda0 must be positive, got {self.lambda0}")
        if self.lambda0**2 <= max(-self.k, 0.0):
            raise ConstructionError(
                f"need lambda0^2 > max(-k, 0); got lambda0={self.lambda0}, k={self.k}"
            )
        expected = model_inradius(self.k, self.lambda0)
        if abs(expected - self.r0) > 1e-9:
            raise ConstructionError(
                f"r0={self.r0} violates the model relation (expected {expected!r})"
            )

    @classmethod
    def from_lambda0(cls, k: float, lambda0: float) -> "ComparisonModel":
        return cls(k, lambda0, model_inradius(k, lambda0))

    @classmethod
    def from_r0(cls, k: float, r0: float) -> "ComparisonModel":
        return cls(k, model_lambda0(k, r0), r0)


def model_lambda(k: float, lambda0: float, r) -> float:
    """Shape-operator eigenvalue lambda(r) of the depth-r level set; lambda(0) = -lambda0."""
    _check_canonical_k(k)
    if not lambda0 > 0.0:
        raise DomainError(f"lambda0 must be positive, got {lambda0}")
    scalar = np.isscalar(r)
    r = np.asarray(r, dtype=float)
    if np.any(r < -1e-15):
        raise DomainError("r must be nonnegative")
    if k == 0.0:
        r0 = 1.0 / lambda0
        if np.any(r >= r0 - 1e-15):
            raise DomainError(f"r must stay below the focal radius r0 = {r0}")
        out = 1.0 / (r - r0)
    elif k == 1.0:
        r0 = math.atan(1.0 / lambda0)
        if np.any(r >= r0 - 1e-15):
            raise DomainError(f"r must stay below the focal radius r0 = {r0}")
        out = 1.0 / np.tan(r - r0)
    else:
        if lambda0 < 1.0:
            r0 = math.atanh(lambda0)
            out = np.tanh(r - r0)
        elif lambda0 == 1.0:
            out = np.full_like(r, -1.0)
        else:
            r0 = math.atanh(1.0 / lambda0)
            if np.any(r >= r0 - 1e-15):
                raise DomainError(f"r must stay below the focal radius r0 = {r0}")
            out = 1.0 / np.tanh(r - r0)
    return float(out) if scalar else out


def model_phi(k: float, lambda0: float, r):
    """phi(r) solving phi'' + k phi = -lambda0, phi(0) = 0, phi'(0) = 1."""
    _check_canonical_k(k)
    scalar = np.isscalar(r)
    r = np.asarray(r, dtype=float)
    if k == 0.0:
        out = r - 0.5 * lambda0 * r**2
    elif k == 1.0:
        out = np.sin(r) + lambda0 * np.cos(r) - lambda0
    else:
        out = np.sinh(r) - lambda0 * np.cosh(r) + lambda0
    return float(out) if scalar else out


def model_phi_prime(k: float, lambda0: float, r):
    _check_canonical_k(k)
    scalar = np.isscalar(r)
    r = np.asarray(r, dtype=float)
    if k == 0.0:
        out = 1.0 - lambda0 * r
    elif k == 1.0:
        out = np.cos(r) - lambda0 * np.sin(r)
    else:
        out = np.cosh(r) - lambda0 * np.sinh(r)
    return float(out) if scalar else out


def model_psi(k: float, t):
    """psi solving psi'' + k psi = 1, psi(0) = psi'(0) = 0 (general k by scaling)."""
    scalar = np.isscalar(t)
    t = np.asarray(t, dtype=float)
    if k == 0.0:
        out = 0.5 * t**2
    elif k > 0.0:
        out = (1.0 - np.cos(math.sqrt(k) * t)) / k
    else:
        out = (np.cosh(math.sqrt(-k) * t) - 1.0) / (-k)
    return float(out) if scalar else out


def riccati_integrate(k: float, lambda0: float, r: float, step: float) -> float:
    """Fixed-step RK4 for lam' = -k - lam^2 from lam(0) = -lambda0 up to r.

    Raises SingularityError when |lam| exceeds 1e6; the reported blow-up
    location tracks the focal radius to within a few steps.
    """
    if not step > 0.0:
        raise DomainError(f"step must be positive, got {step}")
    if r < 0.0:
        raise DomainError(f"r must be nonnegative, got {r}")

    def f(lam):
        return -k - lam * lam

    lam = -float(lambda0)
    s = 0.0
    while s < r - 1e-15:
        h = min(step, r - s)
        # stiffness guard: refine the step as the solution steepens toward
        # the focal blow-up so the fourth-order error bound keeps holding
        n_sub = max(1, min(128, math.ceil(h * (1.0 + lam * lam) / 0.1)))
        hs = h / n_sub
        for _ in range(n_sub):
            k1 = f(lam)
            k2 = f(lam + 0.5 * hs * k1)
            k3 = f(lam + 0.5 * hs * k2)
            k4 = f(lam + hs * k3)
            lam = lam + (hs / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        s += h
        if abs(lam) > 1e6:
            raise SingularityError(
                f"Riccati blow-up near r = {s:.6f} (|lambda| > 1e6)", location=s
            )
    return lam


def fbar(k: float, lambda0: float, f0: float, fdot0: float, t):
    """Unique solution of y'' + k y = -lambda0 with y(0) = f0, y'(0) = fdot0."""
    scalar = np.isscalar(t)
    t = np.asarray(t, dtype=float)
    if k == 0.0:
        out = f0 + fdot0 * t - 0.5 * lambda0 * t**2
    elif k > 0.0:
        s = math.sqrt(k)
        part = -lambda0 / k
        out = part + (f0 - part) * np.cos(s * t) + (fdot0 / s) * np.sin(s * t)
    else:
        s = math.sqrt(-k)
        part = -lambda0 / k
        out = part + (f0 - part) * np.cosh(s * t) + (fdot0 / s) * np.sinh(s * t)
    return float(out) if scalar else out


def hinge_comparison(k: float, a: float, b: float, gamma: float) -> float:
    """Law-of-cosines side opposite a hinge with sides a, b and angle gamma."""
    if a < 0.0 or b < 0.0:
        raise DomainError(f"hinge sides must be nonnegative, got a={a}, b={b}")
    if not (0.0 <= gamma <= PI + 1e-12):
        raise DomainError(f"hinge angle must lie in [0, pi], got {gamma}")
    if k > 0.0:
        s = math.sqrt(k)
        if a > PI / s + 1e-12 or b > PI / s + 1e-12:
            raise DomainError(f"for k={k} hinge sides must be <= pi/sqrt(k)")
        c = math.cos(s * a) * math.cos(s * b) + math.sin(s * a) * math.sin(s * b) * math.cos(gamma)
        return clamped_arccos(c) / s
    if k == 0.0:
        v = a * a + b * b - 2.0 * a * b * math.cos(gamma)
        return math.sqrt(max(v, 0.0))
    s = math.sqrt(-k)
    c = math.cosh(s * a) * math.cosh(s * b) - math.sinh(s * a) * math.sinh(s * b) * math.cos(gamma)
    return math.acosh(max(1.0, c)) / s


# ---------------------------------------------------------------------------
# analytic geodesics (model balls and circle cones); never net-searched
# ---------------------------------------------------------------------------


def ball_radial_path(ball: ModelBall, direction, step: float):
    """Unit-speed radial geodesic from the center to the boundary."""
    u = np.asarray(direction, dtype=float)
    u = u / np.linalg.norm(u)
    n = int(math.floor(ball.r0 / step)) + 1
    return [(i * step, u) for i in range(n)]


def cone_radial_path(cone: Cone, base_point, step: float):
    n = int(math.floor(cone.r0 / step)) + 1
    return [(i * step, base_point) for i in range(n)]


def ball_chord_path(ball: ModelBall, rho: float, step: float, seed: int = 0):
    """Unit-speed chord whose closest approach to the center is rho > 0.

    Parameterized from the closest point: the geodesic starts there with a
    tangent perpendicular to the radial direction and is sampled symmetrically
    out to the boundary.
    """
    if not (0.0 < rho < ball.r0):
        raise DomainError(f"chord offset must lie in (0, r0), got {rho}")
    rng = np.random.default_rng(seed)
    e1, e2 = _random_frame(rng, ball.dim)
    k, r0 = ball.k, ball.r0

    if k == 0.0:
        s_exit = math.sqrt(r0 * r0 - rho * rho)

        def at(s):
            v = rho * e1 + s * e2
            t = float(np.linalg.norm(v))
            return (t, v / t)

    elif k > 0.0:
        # c(s) = cos(s) P0 + sin(s) W on the scaled sphere; colatitude from the
        # center satisfies cos(sqrt(k) t) = cos(sqrt(k) s) cos(sqrt(k) rho)
        sq = math.sqrt(k)
        s_exit = clamped_arccos(math.cos(sq * r0) / math.cos(sq * rho)) / sq

        def at(s):
            t = clamped_arccos(math.cos(sq * s) * math.cos(sq * rho)) / sq
            v = math.cos(sq * s) * math.sin(sq * rho) * e1 + math.sin(sq * s) * e2
            n = float(np.linalg.norm(v))
            return (t, v / n if n > 0 else e1)

    else:
        sq = math.sqrt(-k)
        s_exit = math.acosh(max(1.0, math.cosh(sq * r0) / math.cosh(sq * rho))) / sq

        def at(s):
            t = math.acosh(max(1.0, math.cosh(sq * s) * math.cosh(sq * rho))) / sq
            v = math.cosh(sq * s) * math.sinh(sq * rho) * e1 + math.sinh(sq * s) * e2
            n = float(np.linalg.norm(v))
            return (t, v / n if n > 0 else e1)

    n_steps = int(math.floor(2.0 * s_exit / step)) + 1
    return [at(-s_exit + i * step) for i in range(n_steps)]


def _random_frame(rng, d: int):
    if d == 1:
        raise DomainError("chords off the center need dimension >= 2")
    a = rng.standard_normal((d, 2))
    q, _ = np.linalg.qr(a)
    return q[:, 0], q[:, 1]


def cone_developed_path(cone: Cone, psi0: float, t0: float, psi1: float, t1: float,
                        step: float):
    """Geodesic of a k=1 cone over a circle, built by local development.

    Away from the apex the cone over S^1(r) is locally round; developing
    longitude lam = r * psi turns geodesics into great-circle arcs.  The arc
    is rejected (returns None) if it strays too close to the apex or winds
    outside the developed sector, where the unrolling is no longer valid.
    """
    if not isinstance(cone.base, Sphere) or cone.base.dim != 1:
        raise ConstructionError("developed geodesics support cones over circles only")
    if abs(cone.k - 1.0) > 1e-12:
        raise ConstructionError("developed geodesics are implemented for k = 1")
    r = cone.base.radius
    dpsi = (psi1 - psi0) % (2.0 * PI)
    if dpsi > PI:  # go the short way around the base circle
        dpsi = 2.0 * PI - dpsi
        sgn = -1.0
    else:
        sgn = 1.0
    lam = r * dpsi
    if lam > PI - 1e-6:
        return None
    A = np.array([math.sin(t0), 0.0, math.cos(t0)])
    B = np.array([math.sin(t1) * math.cos(lam), math.sin(t1) * math.sin(lam), math.cos(t1)])
    L = clamped_arccos(float(A @ B))
    if L < 4.0 * step:
        return None
    W = B - float(A @ B) * A
    W = W / np.linalg.norm(W)
    n = int(math.floor(L / step)) + 1
    pts = []
    for i in range(n):
        s = i * step
        c = math.cos(s) * A + math.sin(s) * W
        t = clamped_arccos(c[2])
        if t < 0.05 or t > cone.r0 + 1e-9:
            return None
        lam_s = math.atan2(c[1], c[0])
        if lam_s < -1e-6 or lam_s > lam + 1e-6:
            return None
        psi = psi0 + sgn * lam_s / r
        pts.append((t, np.array([math.cos(psi), math.sin(psi)])))
    return pts


# ---------------------------------------------------------------------------
# the comparison trace f <= fbar
# ---------------------------------------------------------------------------


@dataclass
class ComparisonTrace:
    ts: np.ndarray
    f_vals: np.ndarray
    fbar_vals: np.ndarray
    max_violation: float

    @property
    def max_equality_gap(self) -> float:
        return float(np.max(np.abs(self.f_vals - self.fbar_vals)))

    def to_csv(self, path):
        rows = np.column_stack(
            [self.ts, self.f_vals, self.fbar_vals, np.maximum(self.f_vals - self.fbar_vals, 0.0)]
        )
        np.savetxt(path, rows, delimiter=",", header="t,f,fbar,violation", comments="")


def comparison_trace(space, lambda0: float, k: float, path, step: float) -> ComparisonTrace:
    """Trace f(t) = phi(distance to boundary) against the model solution fbar.

    `path` must be a discretized unit-speed geodesic: consecutive gaps are
    checked against `step` to 1e-6.  fbar is launched from f(0) with the
    right derivative estimated by a second-order one-sided difference.
    """
    if len(path) < 3:
        raise PreconditionError("path needs at least three samples")
    pk = spaces.pack_points(space, list(path))
    n = len(path)
    head = spaces.coords_take(space, pk, np.arange(0, n - 1))
    tail = spaces.coords_take(space, pk, np.arange(1, n))
    gaps = spaces.elementwise_distance(space, head, tail)
    worst = float(np.max(np.abs(gaps - step)))
    if worst > 1e-6:
        raise PreconditionError(
            f"path is not unit-speed at the declared step: worst gap deviation {worst!r}"
        )
    r = np.array([boundary_distance(space, p) for p in path])
    f = model_phi(k, lambda0, r)
    ts = step * np.arange(len(path))
    fdot0 = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * step)
    fb = fbar(k, lambda0, float(f[0]), float(fdot0), ts)
    violation = float(np.max(np.maximum(f - fb, 0.0)))
    return ComparisonTrace(ts=ts, f_vals=f, fbar_vals=fb, max_violation=violation)


# ---------------------------------------------------------------------------
# metric boundary convexity probe
# ---------------------------------------------------------------------------


@dataclass
class ConvexityReport:
    lambda0: float
    scales: list
    worst_ratio_by_scale: list
    tol: float
    n_probes: int

    @property
    def worst_ratio(self) -> float:
        return self.worst_ratio_by_scale[-1]

    @property
    def passed(self) -> bool:
        # second-order defect ratio must be nonnegative in the limit: require
        # it above -tol at the finest scale and non-worsening as h shrinks
        return (
            self.worst_ratio_by_scale[-1] >= -self.tol
            and self.worst_ratio_by_scale[-1] >= self.worst_ratio_by_scale[0] - self.tol
        )


def convexity_check(space, lambda0: float, probes: int = 1000, h: float = 1e-2,
                    seed: int = 11, tol: float = 1e-3) -> ConvexityReport:
    """Probe |pq| cos(angle(px, pq)) - (lambda0/2)|pq|^2 >= o(|pq|^2) at foot points.

    For each probe: an interior x, its nearest boundary point p, and a
    boundary point q at scale ~h near p.  The defect divided by |pq|^2 is
    evaluated at h, h/2, h/4; the boundary is accepted as lambda0-convex if
    the worst ratio at the finest scale is >= -tol and did not worsen.
    """
    if not spaces.has_boundary(space):
        raise PreconditionError(f"{type(space).__name__} has no boundary to probe")
    scales = [h, h / 2.0, h / 4.0]
    worst = []
    for scale in scales:
        rng = np.random.default_rng(seed)
        if isinstance(space, (ModelBall, Cone)):
            vals = _convexity_probe_cone(space, lambda0, probes, scale, rng)
        elif isinstance(space, Lens):
            vals = _convexity_probe_lens(space, lambda0, probes, scale, rng)
        else:
            raise PreconditionError(
                f"convexity probes support model balls, cones, and lenses, not "
                f"{type(space).__name__}"
            )
        worst.append(float(np.min(vals)))
    return ConvexityReport(
        lambda0=lambda0, scales=scales, worst_ratio_by_scale=worst, tol=tol, n_probes=probes
    )


def _convexity_probe_cone(space, lambda0: float, probes: int, scale: float, rng):
    cone = space.as_cone() if isinstance(space, ModelBall) else space
    if spaces.has_boundary(cone.base):
        raise PreconditionError("convexity probes need a boundaryless cone base")
    k, r0 = cone.k, cone.r0
    sn = _sn_value(k, r0)
    delta = scale / sn
    theta = rng.uniform(0.5 * delta, 1.5 * delta, probes)  # base angle between p and q
    # triangle apex-p-q in the developed sector: side |pq| and angle at p
    if k == 0.0:
        c = 2.0 * r0 * np.sin(theta / 2.0)
        cosb = np.sin(theta / 2.0)
    elif k > 0.0:
        s = math.sqrt(k)
        cr, sr = math.cos(s * r0), math.sin(s * r0)
        cc = cr * cr + sr * sr * np.cos(theta)
        c = np.arccos(np.clip(cc, -1.0, 1.0)) / s
        cosb = cr * (1.0 - cc) / np.maximum(sr * np.sin(s * c), 1e-300)
    else:
        s = math.sqrt(-k)
        cr, sr = math.cosh(s * r0), math.sinh(s * r0)
        cc = cr * cr - sr * sr * np.cos(theta)
        c = np.arccosh(np.maximum(cc, 1.0)) / s
        cosb = cr * (cc - 1.0) / np.maximum(sr * np.sinh(s * c), 1e-300)
    defect = c * cosb - 0.5 * lambda0 * c**2
    return defect / c**2


def _sn_value(k: float, t: float) -> float:
    if k == 0.0:
        return t
    if k > 0.0:
        s = math.sqrt(k)
        return math.sin(s * t) / s
    s = math.sqrt(-k)
    return math.sinh(s * t) / s


def _convexity_probe_lens(space: Lens, lambda0: float, probes: int, scale: float, rng):
    n, alpha = space.dim, space.alpha
    vals = np.empty(probes)
    got = 0
    while got < probes:
        t = rng.uniform(0.35, HALF_PI - 0.05)
        s = rng.uniform(alpha * 0.55, alpha - 0.05 * alpha)
        if alpha - s >= s:  # want the s = alpha face strictly nearest
            continue
        x_sphere = _unit(rng.standard_normal(n - 1))
        x_emb = _lens_embed(n, alpha, x_sphere, t, s)
        normal = np.zeros(n + 1)
        normal[-2] = -math.sin(alpha / 2.0)
        normal[-1] = math.cos(alpha / 2.0)
        foot = x_emb - float(x_emb @ normal) * normal
        nf = float(np.linalg.norm(foot))
        if nf < 1e-9:
            continue
        foot /= nf
        # random tangent to the face at the foot
        w = rng.standard_normal(n + 1)
        w -= float(w @ foot) * foot
        w -= float(w @ normal) * normal
        wn = float(np.linalg.norm(w))
        if wn < 1e-9:
            continue
        w /= wn
        q = math.cos(scale) * foot + math.sin(scale) * w
        d_px = clamped_arccos(float(x_emb @ foot))
        u_x = x_emb - math.cos(d_px) * foot
        u_x /= np.linalg.norm(u_x)
        cosang = float(u_x @ w)
        defect = scale * cosang - 0.5 * lambda0 * scale**2
        vals[got] = defect / scale**2
        got += 1
    return vals


def _unit(v):
    return v / np.linalg.norm(v)


def _lens_embed(n: int, alpha: float, x_sphere, t: float, s: float) -> np.ndarray:
    phi = s - alpha / 2.0
    return np.concatenate(
        [math.cos(t) * np.asarray(x_sphere, dtype=float),
         [math.sin(t) * math.cos(phi), math.sin(t) * math.sin(phi)]]
    )


# ---------------------------------------------------------------------------
# hinge audits against the law of cosines
# ---------------------------------------------------------------------------


@dataclass
class HingeAudit:
    space_label: str
    k: float
    n_hinges: int
    worst_excess: float   # max(observed - model side); <= 0 means no violation
    tol: float

    @property
    def passed(self) -> bool:
        return self.worst_excess <= self.tol


def hinge_audit_sphere(n_hinges: int, seed: int, tol: float) -> HingeAudit:
    """Hinges on S^2(1): two great-circle legs from a common vertex."""
    rng = np.random.default_rng(seed)
    worst = -math.inf
    for _ in range(n_hinges):
        p = _unit(rng.standard_normal(3))
        u = rng.standard_normal(3)
        u = _unit(u - float(u @ p) * p)
        w = _unit(np.cross(p, u))
        gamma = rng.uniform(0.0, PI)
        a, b = rng.uniform(0.05, PI - 0.05, 2)
        x = math.cos(a) * p + math.sin(a) * u
        y = math.cos(b) * p + math.sin(b) * (math.cos(gamma) * u + math.sin(gamma) * w)
        observed = clamped_arccos(float(x @ y))
        model = hinge_comparison(1.0, a, b, gamma)
        worst = max(worst, observed - model)
    return HingeAudit("S2(1)", 1.0, n_hinges, worst, tol)


def hinge_audit_lens(n: int, alpha: float, n_hinges: int, seed: int, tol: float) -> HingeAudit:
    """Hinges in a lens via the ambient embedding (legs are ambient great arcs)."""
    rng = np.random.default_rng(seed)
    lens = Lens(n, alpha)
    worst = -math.inf
    got = 0
    while got < n_hinges:
        pts = random_points(lens, 3, rng)
        emb = [_lens_embed(n, alpha, x, t, s) for (x, t, s) in pts]
        p, x, y = emb
        a = clamped_arccos(float(p @ x))
        b = clamped_arccos(float(p @ y))
        if a < 1e-3 or b < 1e-3 or a > PI - 1e-3 or b > PI - 1e-3:
            continue
        u_x = _unit(x - math.cos(a) * p)
        u_y = _unit(y - math.cos(b) * p)
        gamma = clamped_arccos(float(u_x @ u_y))
        observed = distance(lens, pts[1], pts[2])
        model = hinge_comparison(1.0, a, b, gamma)
        worst = max(worst, observed - model)
        got += 1
    return HingeAudit(f"L_{alpha:g}^{n}", 1.0, n_hinges, worst, tol)


def hinge_audit_cone_apex(cone: Cone, n_hinges: int, seed: int, tol: float) -> HingeAudit:
    """Hinges at the cone apex: radial legs with the base distance as angle."""
    if not isinstance(cone.base, Sphere) or cone.base.dim != 1:
        raise ConstructionError("apex hinge audit supports cones over circles")
    rng = np.random.default_rng(seed)
    r = cone.base.radius
    worst = -math.inf
    for _ in range(n_hinges):
        t0, t1 = rng.uniform(0.02, cone.r0, 2)
        psi0, psi1 = rng.uniform(0.0, 2.0 * PI, 2)
        y0 = np.array([math.cos(psi0), math.sin(psi0)])
        y1 = np.array([math.cos(psi1), math.sin(psi1)])
        gamma = min(spaces.sphere_distance(y0, y1, r), PI)
        observed = distance(cone, (t0, y0), (t1, y1))
        model = hinge_comparison(cone.k, t0, t1, gamma)
        worst = max(worst, observed - model)
    return HingeAudit(f"C_{cone.k:g}(S1({r:g}))({cone.r0:g})", cone.k, n_hinges, worst, tol)
