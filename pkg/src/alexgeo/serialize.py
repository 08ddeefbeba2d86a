"""JSON and CSV interchange for descriptors and nets.

Descriptors serialize to tagged JSON objects; quotient actions carry their
generator list and optional declared order.  Nets export as a CSV distance
matrix alongside a JSON metadata file (descriptor, resolution, seed,
boundary flags, coordinates).  Serialization is byte-stable: identical
inputs produce identical bytes.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from . import actions as actions_mod
from . import spaces
from .errors import ConstructionError
from .nets import FiniteNet
from .spaces import (
    Cone,
    ConeCoords,
    Ellipsoid,
    Interval,
    Join,
    JoinCoords,
    Lens,
    ModelBall,
    Quotient,
    Sphere,
    SuspCoords,
    Suspension,
)


def space_to_json(space) -> dict:
    if isinstance(space, Sphere):
        return {"kind": "sphere", "dim": space.dim, "radius": space.radius}
    if isinstance(space, Interval):
        return {"kind": "interval", "length": space.length}
    if isinstance(space, Ellipsoid):
        return {"kind": "ellipsoid", "a": space.a, "b": space.b, "c": space.c}
    if isinstance(space, Join):
        return {"kind": "join", "left": space_to_json(space.left), "right": space_to_json(space.right)}
    if isinstance(space, Cone):
        return {"kind": "cone", "k": space.k, "base": space_to_json(space.base), "r0": space.r0}
    if isinstance(space, Suspension):
        return {"kind": "suspension", "base": space_to_json(space.base)}
    if isinstance(space, Quotient):
        return {
            "kind": "quotient",
            "base": space_to_json(space.base),
            "action": actions_mod.action_to_json(space.action),
        }
    if isinstance(space, Lens):
        return {"kind": "lens", "dim": space.dim, "alpha": space.alpha}
    if isinstance(space, ModelBall):
        return {"kind": "model_ball", "k": space.k, "r0": space.r0, "dim": space.dim}
    raise ConstructionError(f"cannot serialize {space!r}")


def space_from_json(payload: dict):
    kind = payload.get("kind")
    if kind == "sphere":
        return Sphere(int(payload["dim"]), float(payload.get("radius", 1.0)))
    if kind == "interval":
        return Interval(float(payload["length"]))
    if kind == "ellipsoid":
        return Ellipsoid(float(payload["a"]), float(payload["b"]), float(payload["c"]))
    if kind == "join":
        return Join(space_from_json(payload["left"]), space_from_json(payload["right"]))
    if kind == "cone":
        return Cone(float(payload["k"]), space_from_json(payload["base"]), float(payload["r0"]))
    if kind == "suspension":
        return Suspension(space_from_json(payload["base"]))
    if kind == "quotient":
        base = space_from_json(payload["base"])
        action = actions_mod.action_from_json(base, payload["action"])
        return Quotient(base, action)
    if kind == "lens":
        return Lens(int(payload["dim"]), float(payload["alpha"]))
    if kind == "model_ball":
        return ModelBall(float(payload["k"]), float(payload["r0"]), int(payload["dim"]))
    raise ConstructionError(f"unknown descriptor kind {kind!r}")


def coords_to_json(space, coords):
    if isinstance(space, (Sphere, Ellipsoid)):
        return np.asarray(coords).tolist()
    if isinstance(space, Interval):
        return np.asarray(coords).tolist()
    if isinstance(space, Join):
        return {
            "left": coords_to_json(space.left, coords.left),
            "t": coords.t.tolist(),
            "right": coords_to_json(space.right, coords.right),
        }
    if isinstance(space, Cone):
        return {"t": coords.t.tolist(), "base": coords_to_json(space.base, coords.base)}
    if isinstance(space, Suspension):
        return {"u": coords.u.tolist(), "base": coords_to_json(space.base, coords.base)}
    if isinstance(space, Quotient):
        return coords_to_json(space.base, coords)
    if isinstance(space, Lens):
        return coords_to_json(space.as_join(), coords)
    if isinstance(space, ModelBall):
        return coords_to_json(space.as_cone(), coords)
    raise ConstructionError(f"cannot serialize coordinates for {space!r}")


def coords_from_json(space, payload):
    if isinstance(space, (Sphere, Ellipsoid, Interval)):
        return np.asarray(payload, dtype=float)
    if isinstance(space, Join):
        return JoinCoords(
            coords_from_json(space.left, payload["left"]),
            np.asarray(payload["t"], dtype=float),
            coords_from_json(space.right, payload["right"]),
        )
    if isinstance(space, Cone):
        return ConeCoords(
            np.asarray(payload["t"], dtype=float), coords_from_json(space.base, payload["base"])
        )
    if isinstance(space, Suspension):
        return SuspCoords(
            np.asarray(payload["u"], dtype=float), coords_from_json(space.base, payload["base"])
        )
    if isinstance(space, Quotient):
        return coords_from_json(space.base, payload)
    if isinstance(space, Lens):
        return coords_from_json(space.as_join(), payload)
    if isinstance(space, ModelBall):
        return coords_from_json(space.as_cone(), payload)
    raise ConstructionError(f"cannot deserialize coordinates for {space!r}")


def stable_dumps(obj) -> str:
    """Deterministic JSON text: sorted keys, full-precision floats."""

    def convert(o):
        if isinstance(o, dict):
            return {k: convert(o[k]) for k in o}
        if isinstance(o, (list, tuple)):
            return [convert(x) for x in o]
        if isinstance(o, np.ndarray):
            return [convert(x) for x in o.tolist()]
        if isinstance(o, (np.floating,)):
            return float(o)
        if isinstance(o, (np.integer,)):
            return int(o)
        if isinstance(o, (np.bool_,)):
            return bool(o)
        return o

    return json.dumps(convert(obj), sort_keys=True, separators=(",", ":"))


def net_metadata(net: FiniteNet) -> dict:
    return {
        "space": space_to_json(net.space),
        "epsilon": net.epsilon,
        "epsilon_effective": net.epsilon_effective,
        "seed": net.seed,
        "n": net.n,
        "is_boundary": [int(b) for b in net.is_boundary],
        "coords": coords_to_json(net.space, net.coords),
        "meta": net.meta,
    }


def net_to_bytes(net: FiniteNet) -> bytes:
    """Canonical serialized form (metadata + matrix) for determinism checks."""
    meta = stable_dumps(net_metadata(net)).encode()
    return meta + b"\n" + net.dist.tobytes()


def write_net(net: FiniteNet, csv_path) -> Path:
    """Write the distance matrix as CSV and the metadata JSON alongside it."""
    csv_path = Path(csv_path)
    np.savetxt(csv_path, net.dist, delimiter=",", fmt="%.17g")
    meta_path = csv_path.with_suffix(csv_path.suffix + ".json")
    meta_path.write_text(stable_dumps(net_metadata(net)) + "\n")
    return meta_path


def read_net(csv_path) -> FiniteNet:
    """Load a net written by `write_net` (coordinates restored when present)."""
    csv_path = Path(csv_path)
    D = np.loadtxt(csv_path, delimiter=",", ndmin=2)
    meta_path = csv_path.with_suffix(csv_path.suffix + ".json")
    meta = json.loads(meta_path.read_text())
    space = space_from_json(meta["space"])
    coords = coords_from_json(space, meta["coords"]) if "coords" in meta else None
    net = FiniteNet(
        space=space,
        coords=coords,
        is_boundary=np.asarray(meta["is_boundary"], dtype=bool),
        dist=D,
        epsilon=float(meta["epsilon"]),
        epsilon_effective=float(meta["epsilon_effective"]),
        seed=int(meta["seed"]),
        meta=dict(meta.get("meta", {})),
    )
    return net
