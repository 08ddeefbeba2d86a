"""Finite epsilon-nets over space descriptors, plus the metric-axiom audit.

Strategies: uniform grids on intervals and circles, a Fibonacci lattice on
2-spheres, a Hopf-coordinate lattice on 3-spheres, latitude-layered product
grids on joins, cones, and suspensions (point density follows the volume
element), farthest-point subsampling on ellipsoid surfaces, and base-net
transport for quotients.  Nets are deterministic given (space, epsilon,
seed) and immutable after construction.

A net records both the requested resolution and the effective covering
target actually built.  When the point budget cannot support the requested
resolution the builder either raises CapacityError or, with
``allow_degrade=True``, coarsens uniformly and reports the effective value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path
from scipy.spatial import cKDTree

from . import spaces
from .errors import CapacityError, ConstructionError, DomainError, PreconditionError
from .spaces import (
    Cone,
    ConeCoords,
    Ellipsoid,
    Interval,
    Join,
    JoinCoords,
    Lens,
    ModelBall,
    PI,
    HALF_PI,
    Quotient,
    Sphere,
    SuspCoords,
    Suspension,
    coords_concat,
    coords_len,
    coords_take,
    cross_distance,
    diameter_bound,
    has_boundary,
    self_distance_matrix,
    space_dim,
    unpack_point,
)

DEFAULT_BUDGET = 5000

# Fibonacci-lattice covering radius is about _FIB_C / sqrt(N) on the unit
# 2-sphere; calibrated by probe measurement.
_FIB_C = 2.85
_GOLDEN = (1.0 + math.sqrt(5.0)) / 2.0


@dataclass
class FiniteNet:
    """An epsilon-net: packed coordinates, boundary flags, distance matrix."""

    space: object
    coords: object
    is_boundary: np.ndarray
    dist: np.ndarray
    epsilon: float            # requested resolution
    epsilon_effective: float  # covering target the construction guarantees
    seed: int
    meta: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return int(self.is_boundary.shape[0])

    def point(self, i: int):
        if self.coords is None:
            raise PreconditionError("net was loaded without coordinates")
        return unpack_point(self.space, self.coords, i)

    def boundary_indices(self) -> np.ndarray:
        return np.flatnonzero(self.is_boundary)

    def interior_indices(self) -> np.ndarray:
        return np.flatnonzero(~self.is_boundary)


# ---------------------------------------------------------------------------
# random samplers (probe points, action validation, Monte Carlo)
# ---------------------------------------------------------------------------


def random_points(space, n: int, rng: np.random.Generator):
    """n independent sample points with full support in the space."""
    if isinstance(space, Sphere):
        v = rng.standard_normal((n, space.ambient_dim))
        v /= np.linalg.norm(v, axis=1, keepdims=True)
        return [v[i] for i in range(n)]
    if isinstance(space, Interval):
        return [float(x) for x in rng.uniform(0.0, space.length, n)]
    if isinstance(space, Ellipsoid):
        v = rng.standard_normal((n, 3))
        v /= np.linalg.norm(v, axis=1, keepdims=True)
        return [v[i] * space.axes for i in range(n)]
    if isinstance(space, Join):
        dl, dr = space_dim(space.left), space_dim(space.right)
        ts = _sample_latitudes(rng, n, dl, dr)
        ls = random_points(space.left, n, rng)
        rs = random_points(space.right, n, rng)
        return [(ls[i], float(ts[i]), rs[i]) for i in range(n)]
    if isinstance(space, Cone):
        d = space_dim(space.base)
        ts = _sample_radii(rng, n, space.k, space.r0, d)
        bs = random_points(space.base, n, rng)
        return [(float(ts[i]), bs[i]) for i in range(n)]
    if isinstance(space, Suspension):
        d = space_dim(space.base)
        us = _rejection_sample(rng, n, 0.0, PI, lambda u: np.sin(u) ** d)
        bs = random_points(space.base, n, rng)
        return [(float(us[i]), bs[i]) for i in range(n)]
    if isinstance(space, Quotient):
        return random_points(space.base, n, rng)
    if isinstance(space, Lens):
        return random_points(space.as_join(), n, rng)
    if isinstance(space, ModelBall):
        return random_points(space.as_cone(), n, rng)
    raise ConstructionError(f"unknown descriptor {space!r}")


def _rejection_sample(rng, n, lo, hi, weight):
    out = np.empty(n)
    got = 0
    while got < n:
        cand = rng.uniform(lo, hi, 2 * (n - got) + 8)
        w = weight(cand)
        keep = cand[rng.uniform(0.0, 1.0, cand.shape[0]) * 1.0 <= w]
        take = min(n - got, keep.shape[0])
        out[got : got + take] = keep[:take]
        got += take
    return out


def _sample_latitudes(rng, n, dim_left, dim_right):
    # density proportional to the join volume element cos^dl(t) sin^dr(t)
    return _rejection_sample(
        rng, n, 0.0, HALF_PI, lambda t: np.cos(t) ** dim_left * np.sin(t) ** dim_right
    )


def _sn(k: float, t):
    if k == 0.0:
        return np.asarray(t, dtype=float)
    if k > 0.0:
        s = math.sqrt(k)
        return np.sin(s * np.asarray(t, dtype=float)) / s
    s = math.sqrt(-k)
    return np.sinh(s * np.asarray(t, dtype=float)) / s


def _sample_radii(rng, n, k, r0, base_dim):
    wmax = float(_sn(k, r0)) ** base_dim if base_dim > 0 else 1.0
    return _rejection_sample(
        rng, n, 0.0, r0, lambda t: (_sn(k, t) ** base_dim) / max(wmax, 1e-300)
    )


def canonical_point(space):
    """A fixed valid point, used as the single representative of a collapsed factor."""
    if isinstance(space, Sphere):
        e = np.zeros(space.ambient_dim)
        e[0] = 1.0
        return e
    if isinstance(space, Interval):
        return space.length / 2.0
    if isinstance(space, Join):
        return (canonical_point(space.left), 0.0, canonical_point(space.right))
    if isinstance(space, Cone):
        return (0.0, canonical_point(space.base))
    if isinstance(space, Suspension):
        return (0.0, canonical_point(space.base))
    if isinstance(space, Quotient):
        return canonical_point(space.base)
    if isinstance(space, Lens):
        return canonical_point(space.as_join())
    if isinstance(space, ModelBall):
        return canonical_point(space.as_cone())
    if isinstance(space, Ellipsoid):
        return np.array([space.a, 0.0, 0.0])
    raise ConstructionError(f"unknown descriptor {space!r}")


# ---------------------------------------------------------------------------
# coordinate generation per strategy
# ---------------------------------------------------------------------------


def _gen(space, eps, rng, phase: float = 0.0):
    """Generate (coords, flags) with covering radius <= eps by construction."""
    if isinstance(space, Sphere):
        return _gen_sphere(space, eps, phase)
    if isinstance(space, Interval):
        n = max(2, math.ceil(space.length / eps))
        grid = np.linspace(0.0, space.length, n)
        flags = np.zeros(n, dtype=bool)
        flags[0] = flags[-1] = True
        return grid, flags
    if isinstance(space, Join):
        return _gen_join(space.left, space.right, eps, rng, lens_like=False)
    if isinstance(space, Cone):
        return _gen_cone(space, eps, rng)
    if isinstance(space, Suspension):
        return _gen_suspension(space, eps, rng)
    if isinstance(space, Quotient):
        return _gen(space.base, eps, rng, phase)
    if isinstance(space, Lens):
        return _gen_join(Sphere(space.dim - 2, 1.0), Interval(space.alpha), eps, rng, lens_like=True)
    if isinstance(space, ModelBall):
        return _gen_cone(space.as_cone(), eps, rng)
    if isinstance(space, Ellipsoid):
        raise ConstructionError("ellipsoid nets are built by farthest-point sampling; internal error")
    raise ConstructionError(f"unknown descriptor {space!r}")


def _gen_sphere(space: Sphere, eps, phase=0.0):
    r = space.radius
    if space.dim == 0:
        pts = np.array([[1.0], [-1.0]])
        return pts, np.zeros(2, dtype=bool)
    if space.dim == 1:
        n = max(3, math.ceil(PI * r / eps))
        ang = phase + 2.0 * PI * np.arange(n) / n
        pts = np.column_stack([np.cos(ang), np.sin(ang)])
        return pts, np.zeros(n, dtype=bool)
    if space.dim == 2:
        n = max(8, math.ceil((_FIB_C * r / eps) ** 2))
        pts = _fibonacci_sphere(n)
        return pts, np.zeros(n, dtype=bool)
    if space.dim == 3:
        return _gen_sphere3(space, eps)
    raise ConstructionError(f"no net strategy for Sphere(dim={space.dim}); supported dims are 0..3")


def _fibonacci_sphere(n: int) -> np.ndarray:
    i = np.arange(n, dtype=float)
    z = 1.0 - 2.0 * (i + 0.5) / n
    theta = 2.0 * PI * i / _GOLDEN
    s = np.sqrt(np.maximum(1.0 - z * z, 0.0))
    return np.column_stack([s * np.cos(theta), s * np.sin(theta), z])


def _gen_sphere3(space: Sphere, eps):
    # Hopf-coordinate lattice: eta layers, two staggered circle grids per layer
    r = space.radius
    e = eps / r  # work on the unit sphere
    dt = 1.10 * e
    cov = 0.55 * e
    n_t = max(2, math.ceil(HALF_PI / dt) + 1)
    etas = np.linspace(0.0, HALF_PI, n_t)
    blocks = []
    for j, eta in enumerate(etas):
        ce, se = math.cos(eta), math.sin(eta)
        n1 = max(1, math.ceil(PI * ce / cov))
        n2 = max(1, math.ceil(PI * se / cov))
        a1 = 2.0 * PI * (np.arange(n1) + (j * _GOLDEN % 1.0)) / n1
        a2 = 2.0 * PI * (np.arange(n2) + (j * _GOLDEN * _GOLDEN % 1.0)) / n2
        A1 = np.repeat(a1, n2)
        A2 = np.tile(a2, n1)
        blocks.append(
            np.column_stack(
                [ce * np.cos(A1), ce * np.sin(A1), se * np.cos(A2), se * np.sin(A2)]
            )
        )
    pts = np.concatenate(blocks, axis=0)
    return pts, np.zeros(pts.shape[0], dtype=bool)


def _gen_join(left, right, eps, rng, lens_like: bool):
    dt = 1.10 * eps
    cov = 0.55 * eps
    n_t = max(2, math.ceil(HALF_PI / dt) + 1)
    ts = np.linspace(0.0, HALF_PI, n_t)
    diam_l = diameter_bound(left)
    diam_r = diameter_bound(right)
    part_coords, part_flags, part_ts = [], [], []
    join_desc = Join(left, right)
    for j, t in enumerate(ts):
        ct, st = math.cos(t), math.sin(t)
        if ct * diam_l <= 2.0 * cov:
            lc = spaces.pack_points(left, [canonical_point(left)])
            lf = np.zeros(1, dtype=bool)
        else:
            lc, lf = _gen(left, cov / ct, rng, phase=j * _GOLDEN)
        if st * diam_r <= 2.0 * cov:
            rc = spaces.pack_points(right, [canonical_point(right)])
            rf = np.zeros(1, dtype=bool)
        else:
            rc, rf = _gen(right, cov / st, rng, phase=j * _GOLDEN * _GOLDEN)
        nl = coords_len(left, lc)
        nr = coords_len(right, rc)
        li = np.repeat(np.arange(nl), nr)
        ri = np.tile(np.arange(nr), nl)
        flags = lf[li] | rf[ri]
        if t == 0.0 and has_boundary(right):
            flags = np.ones(nl * nr, dtype=bool)
        if t == ts[-1] and has_boundary(left):
            flags = np.ones(nl * nr, dtype=bool)
        part_coords.append(
            JoinCoords(coords_take(left, lc, li), np.full(nl * nr, t), coords_take(right, rc, ri))
        )
        part_flags.append(flags)
        part_ts.append(t)
    coords = coords_concat(join_desc, part_coords)
    return coords, np.concatenate(part_flags)


def _gen_cone(space: Cone, eps, rng):
    dt = eps
    cov = 0.85 * eps
    n_t = max(2, math.ceil(space.r0 / dt) + 1)
    ts = np.linspace(0.0, space.r0, n_t)
    diam_b = diameter_bound(space.base)
    base_has_bdry = has_boundary(space.base)
    part_coords, part_flags = [], []
    for j, t in enumerate(ts):
        scale = float(_sn(space.k, t))
        if scale * diam_b <= 2.0 * cov:
            bc = spaces.pack_points(space.base, [canonical_point(space.base)])
            bf = np.zeros(1, dtype=bool)
        else:
            bc, bf = _gen(space.base, cov / scale, rng, phase=j * _GOLDEN)
        nb = coords_len(space.base, bc)
        flags = bf.copy() if base_has_bdry else np.zeros(nb, dtype=bool)
        if t == ts[-1]:
            flags = np.ones(nb, dtype=bool)  # the cap t = r0
        if t == 0.0 and base_has_bdry:
            flags = np.ones(nb, dtype=bool)
        part_coords.append(ConeCoords(np.full(nb, t), bc))
        part_flags.append(flags)
    coords = coords_concat(space, part_coords)
    return coords, np.concatenate(part_flags)


def _gen_suspension(space: Suspension, eps, rng):
    dt = eps
    cov = 0.85 * eps
    n_u = max(3, math.ceil(PI / dt) + 1)
    us = np.linspace(0.0, PI, n_u)
    diam_b = diameter_bound(space.base)
    base_has_bdry = has_boundary(space.base)
    part_coords, part_flags = [], []
    for j, u in enumerate(us):
        scale = math.sin(u)
        if scale * diam_b <= 2.0 * cov:
            bc = spaces.pack_points(space.base, [canonical_point(space.base)])
            bf = np.zeros(1, dtype=bool)
        else:
            bc, bf = _gen(space.base, cov / scale, rng, phase=j * _GOLDEN)
        nb = coords_len(space.base, bc)
        flags = bf.copy() if base_has_bdry else np.zeros(nb, dtype=bool)
        if (u == 0.0 or u == us[-1]) and base_has_bdry:
            flags = np.ones(nb, dtype=bool)  # poles lie in the closure of the boundary
        part_coords.append(SuspCoords(np.full(nb, u), bc))
        part_flags.append(flags)
    coords = coords_concat(space, part_coords)
    return coords, np.concatenate(part_flags)


# ---------------------------------------------------------------------------
# ellipsoid nets: farthest-point sampling plus a surface graph
# ---------------------------------------------------------------------------


def _ellipsoid_area(e: Ellipsoid) -> float:
    p = 1.6075  # Thomsen's approximation, ~1% accurate
    a, b, c = e.a, e.b, e.c
    return 4.0 * PI * (((a * b) ** p + (a * c) ** p + (b * c) ** p) / 3.0) ** (1.0 / p)


def _ellipsoid_candidates(e: Ellipsoid, m: int, rng) -> np.ndarray:
    v = rng.standard_normal((m, 3))
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    pts = v * e.axes
    extremes = np.array(
        [
            [e.a, 0, 0],
            [-e.a, 0, 0],
            [0, e.b, 0],
            [0, -e.b, 0],
            [0, 0, e.c],
            [0, 0, -e.c],
        ]
    )
    return np.concatenate([extremes, pts], axis=0)


def _farthest_point_sample(cands: np.ndarray, eps: float, budget: int):
    """Greedy FPS on chord distances until covering <= 0.92*eps or budget hit."""
    m = cands.shape[0]
    chosen = [0]
    mind = np.linalg.norm(cands - cands[0], axis=1)
    while len(chosen) < budget:
        i = int(np.argmax(mind))
        radius = float(mind[i])
        if radius <= 0.92 * eps:
            break
        chosen.append(i)
        np.minimum(mind, np.linalg.norm(cands - cands[i], axis=1), out=mind)
    return np.array(chosen, dtype=int), float(np.max(mind))


def _chord_corrected_weights(e: Ellipsoid, pts: np.ndarray, rows, cols):
    # arc ~= chord * (1 + (chord*kappa)^2 / 24) with kappa the normal curvature
    # of the quadric along the chord direction at the midpoint
    A = 1.0 / e.axes**2
    pi_, pj = pts[rows], pts[cols]
    chord_vec = pj - pi_
    chord = np.linalg.norm(chord_vec, axis=1)
    mid = 0.5 * (pi_ + pj)
    grad = mid * A  # ~ normal direction * |A x|
    with np.errstate(invalid="ignore", divide="ignore"):
        v = chord_vec / np.maximum(chord[:, None], 1e-300)
        kappa = np.einsum("ij,ij->i", v * A, v) / np.maximum(np.linalg.norm(grad, axis=1), 1e-300)
    # the correction is meaningful for short chords only; long chords (where
    # the midpoint may leave the surface) are gated out by the caller
    kappa = np.minimum(kappa, 1e3)
    return chord * (1.0 + (chord * kappa) ** 2 / 24.0)


class EllipsoidEngine:
    """Net-backed geodesic engine: k-NN surface graph plus all-pairs Dijkstra."""

    def __init__(self, space: Ellipsoid, epsilon: float, seed: int, budget: int = DEFAULT_BUDGET,
                 knn: int = 12):
        self.space = space
        self.epsilon = epsilon
        self.seed = seed
        self.knn = knn
        rng = np.random.default_rng(seed)
        target = math.ceil(_ellipsoid_area(space) / (2.2 * epsilon**2)) + 6
        m = min(60000, max(4000, 30 * target))
        cands = _ellipsoid_candidates(space, m, rng)
        chosen, radius = _farthest_point_sample(cands, epsilon, budget)
        self.points = cands[chosen]
        self.covering = radius
        self.tree = cKDTree(self.points)
        n = self.points.shape[0]
        k = min(knn + 1, n)
        _, nbr = self.tree.query(self.points, k=k)
        rows = np.repeat(np.arange(n), k - 1)
        cols = nbr[:, 1:].ravel()
        w = _chord_corrected_weights(space, self.points, rows, cols)
        graph = csr_matrix((w, (rows, cols)), shape=(n, n))
        D = shortest_path(graph, method="D", directed=False)
        if not np.all(np.isfinite(D)):
            raise ConstructionError(
                "ellipsoid surface graph is disconnected; increase the point budget or epsilon"
            )
        self.dist = np.minimum(D, D.T)
        np.fill_diagonal(self.dist, 0.0)

    def _attach(self, p):
        p = np.asarray(p, dtype=float)
        k = min(self.knn, self.points.shape[0])
        d, idx = self.tree.query(p, k=k)
        w = _chord_corrected_weights(
            self.space, np.vstack([self.points, p[None, :]]),
            np.full(k, self.points.shape[0]), np.asarray(idx),
        )
        return np.asarray(idx), w

    def distance(self, p, q) -> float:
        spaces.validate_point(self.space, p)
        spaces.validate_point(self.space, q)
        ip, wp = self._attach(p)
        iq, wq = self._attach(q)
        through = float(np.min(wp[:, None] + self.dist[np.ix_(ip, iq)] + wq[None, :]))
        direct = float(
            _chord_corrected_weights(
                self.space,
                np.vstack([np.asarray(p, dtype=float), np.asarray(q, dtype=float)]),
                np.array([0]),
                np.array([1]),
            )[0]
        )
        if direct <= 3.0 * self.covering:
            return min(through, direct)
        return through


_ENGINE_CACHE: dict = {}


def ellipsoid_engine(a: float, b: float, c: float, epsilon: float = 0.05, seed: int = 42,
                     budget: int = DEFAULT_BUDGET) -> EllipsoidEngine:
    key = (round(a, 12), round(b, 12), round(c, 12), round(epsilon, 12), seed, budget)
    if key not in _ENGINE_CACHE:
        _ENGINE_CACHE[key] = EllipsoidEngine(Ellipsoid(a, b, c), epsilon, seed, budget)
    return _ENGINE_CACHE[key]


def ellipsoid_distance(p, q, a: float, b: float, c: float, epsilon: float = 0.05,
                       seed: int = 42) -> float:
    """Intrinsic surface distance via the graph geodesic engine, accurate to O(epsilon)."""
    return ellipsoid_engine(a, b, c, epsilon, seed).distance(p, q)


# ---------------------------------------------------------------------------
# the net builder
# ---------------------------------------------------------------------------


def epsilon_net(space, epsilon: float, seed: int, *, budget: int = DEFAULT_BUDGET,
                allow_degrade: bool = False, dedupe_tol: float = 1e-9) -> FiniteNet:
    """Build a deterministic epsilon-net with its full distance matrix.

    The construction targets covering radius <= epsilon.  If that would
    exceed `budget` points, a CapacityError reports the required count
    unless `allow_degrade` is set, in which case the resolution is coarsened
    uniformly and recorded in `epsilon_effective`.
    """
    if not epsilon > 0.0:
        raise DomainError(f"epsilon must be positive, got {epsilon}")
    if epsilon >= diameter_bound(space):
        raise DomainError(
            f"epsilon {epsilon} is not below the diameter bound {diameter_bound(space)}"
        )

    if isinstance(space, Ellipsoid):
        eng = ellipsoid_engine(space.a, space.b, space.c, epsilon, seed, budget)
        n = eng.points.shape[0]
        if eng.covering > 1.05 * epsilon and not allow_degrade:
            required = math.ceil(n * (eng.covering / epsilon) ** 2)
            raise CapacityError(
                f"ellipsoid net needs about {required} points for epsilon={epsilon}, "
                f"budget is {budget}",
                required=required,
                budget=budget,
            )
        net = FiniteNet(
            space=space,
            coords=eng.points,
            is_boundary=np.zeros(n, dtype=bool),
            dist=eng.dist,
            epsilon=epsilon,
            epsilon_effective=max(epsilon, eng.covering),
            seed=seed,
            meta={"strategy": "fps+graph", "knn": eng.knn},
        )
        _freeze(net)
        return net

    rng = np.random.default_rng(seed)
    eff = float(epsilon)
    coords, flags = _gen(space, eff, rng)
    n = coords_len(space, coords)
    if n > budget:
        if not allow_degrade:
            raise CapacityError(
                f"net for {type(space).__name__} at epsilon={epsilon} needs {n} points, "
                f"budget is {budget}; pass allow_degrade=True to coarsen",
                required=n,
                budget=budget,
            )
        dim = max(1, space_dim(space))
        for _ in range(24):
            eff *= 1.03 * (n / budget) ** (1.0 / dim)
            rng = np.random.default_rng(seed)
            coords, flags = _gen(space, eff, rng)
            n = coords_len(space, coords)
            if n <= budget:
                break
        else:
            raise CapacityError(
                f"could not fit a net for {type(space).__name__} within budget {budget}",
                required=n,
                budget=budget,
            )

    D = self_distance_matrix(space, coords)

    if isinstance(space, Quotient):
        keep = _dedupe_indices(D, dedupe_tol)
        if keep.shape[0] < n:
            coords = coords_take(space, coords, keep)
            flags = flags[keep]
            D = D[np.ix_(keep, keep)]
            n = keep.shape[0]

    net = FiniteNet(
        space=space,
        coords=coords,
        is_boundary=flags,
        dist=D,
        epsilon=float(epsilon),
        epsilon_effective=eff,
        seed=seed,
        meta={"strategy": type(space).__name__.lower()},
    )
    _freeze(net)
    return net


def _dedupe_indices(D: np.ndarray, tol: float) -> np.ndarray:
    n = D.shape[0]
    keep = np.ones(n, dtype=bool)
    for i in range(n):
        if keep[i]:
            dup = D[i] <= tol
            dup[: i + 1] = False
            keep[dup] = False
    return np.flatnonzero(keep)


def _freeze(net: FiniteNet):
    net.dist.setflags(write=False)
    net.is_boundary.setflags(write=False)


# ---------------------------------------------------------------------------
# metric-axiom audit
# ---------------------------------------------------------------------------


@dataclass
class MetricAudit:
    n_points: int
    symmetry_defect: float
    diagonal_defect: float
    triangle_defect: float
    witness: tuple
    exhaustive: bool
    n_triples: int
    tol: float

    @property
    def passed(self) -> bool:
        return (
            self.symmetry_defect <= self.tol
            and self.diagonal_defect <= self.tol
            and self.triangle_defect <= self.tol
        )


def verify_metric(net_or_matrix, tol: float = 1e-9, *, full_threshold: int = 600,
                  n_triples: int = 2_000_000, seed: int = 0) -> MetricAudit:
    """Audit symmetry and the triangle inequality of a distance matrix.

    Exhaustive over all triples up to `full_threshold` points; above that,
    a seeded sample of `n_triples` random triples is scanned and the audit
    is marked non-exhaustive.  Reports the worst negative-triangle defect
    max(d(i,k) - d(i,j) - d(j,k)) and its witness triple.
    """
    D = net_or_matrix.dist if isinstance(net_or_matrix, FiniteNet) else np.asarray(net_or_matrix)
    n = D.shape[0]
    if n == 0:
        raise PreconditionError("empty net")
    sym = float(np.max(np.abs(D - D.T))) if n > 1 else 0.0
    diag = float(np.max(np.abs(np.diag(D))))

    best = -math.inf
    witness = (0, 0, 0)
    if n <= full_threshold:
        for j in range(n):
            M = D - D[:, j][:, None] - D[j, :][None, :]
            i, k = np.unravel_index(int(np.argmax(M)), M.shape)
            if M[i, k] > best:
                best = float(M[i, k])
                witness = (int(i), int(j), int(k))
        exhaustive = True
        checked = n * n * n
    else:
        rng = np.random.default_rng(seed)
        checked = int(n_triples)
        for start in range(0, checked, 500_000):
            m = min(500_000, checked - start)
            i = rng.integers(0, n, m)
            j = rng.integers(0, n, m)
            k = rng.integers(0, n, m)
            vals = D[i, k] - D[i, j] - D[j, k]
            a = int(np.argmax(vals))
            if vals[a] > best:
                best = float(vals[a])
                witness = (int(i[a]), int(j[a]), int(k[a]))
        exhaustive = False
    return MetricAudit(
        n_points=n,
        symmetry_defect=sym,
        diagonal_defect=diag,
        triangle_defect=best,
        witness=witness,
        exhaustive=exhaustive,
        n_triples=checked,
        tol=tol,
    )


def covering_check(net: FiniteNet, n_probes: int = 10_000, seed: int = 1234) -> float:
    """Spot-check the covering radius with random probes; returns the worst gap."""
    rng = np.random.default_rng(seed)
    probes = random_points(net.space, n_probes, rng)
    if isinstance(net.space, Ellipsoid):
        P = np.asarray(probes)
        d, _ = cKDTree(np.asarray(net.coords)).query(P)
        return float(np.max(d))
    pk = spaces.pack_points(net.space, probes)
    worst = 0.0
    block = max(1, 2_000_000 // max(net.n, 1))
    for start in range(0, n_probes, block):
        idx = np.arange(start, min(start + block, n_probes))
        d = cross_distance(net.space, coords_take(net.space, pk, idx), net.coords)
        worst = max(worst, float(np.max(np.min(d, axis=1))))
    return worst


def nearest_index(net: FiniteNet, point) -> int:
    """Index of the net point closest to `point` (lowest index on ties)."""
    if isinstance(net.space, Ellipsoid):
        _, i = cKDTree(np.asarray(net.coords)).query(np.asarray(point, dtype=float))
        return int(i)
    pk = spaces.pack_points(net.space, [point])
    d = cross_distance(net.space, pk, net.coords)[0]
    return int(np.argmin(d))


def graph_geodesic(net: FiniteNet, i: int, j: int, knn: int = 12) -> float:
    """Shortest-path length between net nodes through the k-NN graph.

    Edges carry the closed-form distances of the descriptor; this is an
    independent length-structure oracle for the global formulas.
    """
    D = net.dist
    n = D.shape[0]
    k = min(knn + 1, n)
    nbr = np.argsort(D, axis=1)[:, 1:k]
    rows = np.repeat(np.arange(n), nbr.shape[1])
    cols = nbr.ravel()
    graph = csr_matrix((D[rows, cols], (rows, cols)), shape=(n, n))
    dist = shortest_path(graph, method="D", directed=False, indices=[i])[0]
    return float(dist[j])
