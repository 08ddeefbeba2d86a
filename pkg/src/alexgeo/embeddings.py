"""Closed-form isometric embeddings used as independent distance oracles.

Each map sends descriptor coordinates to unit vectors of a round sphere,
where the distance is a single arccos of a dot product.  These are the
reference values that the join/suspension/lens formulas are audited
against; they deliberately avoid the formula code paths.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DomainError
from .spaces import Lens, PI, clamped_arccos


def sphere_chord_distance(e1: np.ndarray, e2: np.ndarray, radius: float = 1.0) -> float:
    return radius * clamped_arccos(float(np.dot(e1, e2)))


def embed_join_circle_circle(p) -> np.ndarray:
    """S^1(1) * S^1(1) -> S^3(1): (u, t, v) -> (cos t * u, sin t * v)."""
    u, t, v = p
    return np.concatenate([math.cos(t) * np.asarray(u, float), math.sin(t) * np.asarray(v, float)])


def embed_suspension_circle(p) -> np.ndarray:
    """Suspension of S^1(1) -> S^2(1): colatitude u over the circle."""
    u, y = p
    y = np.asarray(y, float)
    return np.array([math.sin(u) * y[0], math.sin(u) * y[1], math.cos(u)])


def embed_lens(lens: Lens, p) -> np.ndarray:
    """L_alpha^n -> S^n(1): faces land at angles +-alpha/2 about the rim."""
    x, t, s = p
    phi = s - lens.alpha / 2.0
    return np.concatenate(
        [math.cos(t) * np.asarray(x, float), [math.sin(t) * math.cos(phi), math.sin(t) * math.sin(phi)]]
    )


def embed_join_sphere_circle(p) -> np.ndarray:
    """S^(m)(1) * S^1(1) -> S^(m+2)(1), used for doubled lenses."""
    x, t, y = p
    return np.concatenate([math.cos(t) * np.asarray(x, float), math.sin(t) * np.asarray(y, float)])


def interval_point_on_double(s: float, length: float) -> np.ndarray:
    """Where the interval coordinate lands on the doubling circle S^1(length/pi)."""
    if not (-1e-12 <= s <= length + 1e-12):
        raise DomainError(f"interval coordinate {s} outside [0, {length}]")
    ang = PI * s / length
    return np.array([math.cos(ang), math.sin(ang)])


def reassociate_interval_join(p):
    """Identify [0,pi] * [0,pi] with [0,pi/2] * S^1(1).

    Both spaces are convex pieces of S^3(1) cut out by two orthogonal
    half-space conditions; an orthogonal permutation of the ambient axes
    carries one onto the other.  Returns the corresponding point
    (interval coordinate in [0, pi/2], latitude, circle unit vector).
    """
    s, t, u = p
    if not (-1e-12 <= s <= PI + 1e-12 and -1e-12 <= u <= PI + 1e-12):
        raise DomainError("interval coordinates must lie in [0, pi]")
    x1, y1 = math.cos(t) * math.cos(s), math.cos(t) * math.sin(s)
    x2, y2 = math.sin(t) * math.cos(u), math.sin(t) * math.sin(u)
    # axis permutation: (x1, y1, x2, y2) -> (y1, y2, x1, x2)
    a1, b1 = y1, y2
    a2, b2 = x1, x2
    r1 = math.hypot(a1, b1)
    r2 = math.hypot(a2, b2)
    tau = math.atan2(r2, r1)
    v = math.atan2(b1, a1) if r1 > 1e-300 else 0.0
    theta = math.atan2(b2, a2) if r2 > 1e-300 else 0.0
    return (v, tau, np.array([math.cos(theta), math.sin(theta)]))
