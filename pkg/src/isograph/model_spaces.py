"""Constant-curvature target spaces: sphere, Euclidean, hyperbolic (hyperboloid model)."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

SPHERE = "sphere"
EUCLIDEAN = "euclidean"
HYPERBOLIC = "hyperbolic"

#: absolute slack beyond the legal arccos/arccosh interval before we refuse to clamp
CLAMP_SLACK = 1e-9

#: default absolute tolerance for the dual-point test
DUAL_POINT_TOL = 1e-9


class ClampError(ArithmeticError):
    """An inner-product argument fell too far outside its legal interval."""


@dataclass(frozen=True)
class ModelSpace:
    kind: str
    dim: int
    radius: Optional[float] = None

    def __post_init__(self):
        if self.kind not in (SPHERE, EUCLIDEAN, HYPERBOLIC):
            raise ValueError(f"unknown space kind {self.kind!r}")
        if self.dim < 1:
            raise ValueError("dim must be >= 1")
        if self.kind == SPHERE:
            if self.radius is None or self.radius <= 0:
                raise ValueError("sphere radius must be positive")
        elif self.radius is not None:
            raise ValueError(f"{self.kind} space takes no radius")

    @property
    def ambient_dim(self) -> int:
        return self.dim if self.kind == EUCLIDEAN else self.dim + 1

    @property
    def diameter(self) -> float:
        """Largest realizable distance (inf for the flat and hyperbolic cases)."""
        if self.kind == SPHERE:
            return math.pi * self.radius
        return math.inf


def sphere(n: int, r: float) -> ModelSpace:
    return ModelSpace(SPHERE, n, r)


def euclidean(n: int) -> ModelSpace:
    return ModelSpace(EUCLIDEAN, n)


def hyperbolic(n: int) -> ModelSpace:
    return ModelSpace(HYPERBOLIC, n)


def minkowski_product(x: np.ndarray, y: np.ndarray) -> float:
    """Lorentzian inner product; the last coordinate is timelike."""
    x = np.asarray(x, float)
    y = np.asarray(y, float)
    return float(np.dot(x[:-1], y[:-1]) - x[-1] * y[-1])


def validate_point(space: ModelSpace, p) -> Optional[str]:
    """None when p lies on the space, else a description of the violation."""
    p = np.asarray(p, dtype=float)
    if p.shape != (space.ambient_dim,):
        raise ValueError(
            f"expected {space.ambient_dim} coordinates, got shape {p.shape}"
        )
    if space.kind == EUCLIDEAN:
        return None
    if space.kind == SPHERE:
        r = space.radius
        err = abs(float(np.linalg.norm(p)) - r)
        if err > 1e-9 * r:
            return f"norm off sphere by {err:.3e}"
        return None
    # hyperboloid sheet: <p,p>_M = -1, last coordinate >= 1
    q = minkowski_product(p, p)
    if abs(q + 1.0) > 1e-9:
        return f"Minkowski self-product {q:.12g} != -1 (off by {abs(q + 1.0):.3e})"
    if p[-1] < 1.0 - 1e-9:
        return f"timelike coordinate {p[-1]:.12g} below the upper sheet"
    return None


def require_valid(space: ModelSpace, p) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    msg = validate_point(space, p)
    if msg is not None:
        raise ValueError(f"invalid {space.kind} point: {msg}")
    return p


def _clamp(x: float, lo: float, hi: float, slack: float = CLAMP_SLACK) -> float:
    if x < lo - slack or x > hi + slack:
        raise ClampError(
            f"value {x!r} exceeds [{lo}, {hi}] by more than {slack}"
        )
    return min(max(x, lo), hi)


def geodesic_distance(space: ModelSpace, p, q) -> float:
    p = require_valid(space, p)
    q = require_valid(space, q)
    if space.kind == EUCLIDEAN:
        return float(np.linalg.norm(p - q))
    if space.kind == SPHERE:
        r = space.radius
        # reject invalid inner products, then evaluate the arc angle through
        # the chord form, which stays accurate near 0 and near pi
        _clamp(float(np.dot(p, q)) / (r * r), -1.0, 1.0)
        ang = 2.0 * math.atan2(
            float(np.linalg.norm(p - q)), float(np.linalg.norm(p + q))
        )
        return r * ang
    _clamp(-minkowski_product(p, q), 1.0, math.inf)
    # arccosh(m) = 2 asinh(sqrt((m-1)/2)); the Minkowski chord gives 2(m-1)
    chord_sq = max(0.0, minkowski_product(p - q, p - q))
    return 2.0 * math.asinh(0.5 * math.sqrt(chord_sq))


def has_dual_points_at(space: ModelSpace, l: float, tol: float = DUAL_POINT_TOL) -> bool:
    """Whether some pair of points at distance l is joined by >= 2 shortest geodesics.

    On a sphere only antipodal pairs (distance pi*r) qualify; the flat and
    hyperbolic spaces have unique shortest geodesics everywhere.
    """
    if l <= 0:
        raise ValueError("l must be positive")
    if space.kind == SPHERE:
        return abs(l - math.pi * space.radius) <= tol
    return False


def random_point(space: ModelSpace, seed: int, box: float = 1.0) -> np.ndarray:
    """Deterministic pseudo-random point of the space."""
    rng = np.random.default_rng(seed)
    if space.kind == EUCLIDEAN:
        return rng.uniform(-box, box, size=space.dim)
    if space.kind == SPHERE:
        v = rng.standard_normal(space.dim + 1)
        n = np.linalg.norm(v)
        while n < 1e-12:  # pragma: no cover - probability zero
            v = rng.standard_normal(space.dim + 1)
            n = np.linalg.norm(v)
        return space.radius * v / n
    # exponential map at the hyperboloid apex
    v = rng.uniform(-box, box, size=space.dim)
    t = float(np.linalg.norm(v))
    if t < 1e-15:
        return np.concatenate([np.zeros(space.dim), [1.0]])
    direction = v / t
    return np.concatenate([math.sinh(t) * direction, [math.cosh(t)]])


# ---------------------------------------------------------------------------
# JSON

def space_to_dict(space: ModelSpace) -> dict:
    d = {"kind": space.kind, "dim": space.dim}
    if space.radius is not None:
        d["radius"] = space.radius
    return d


def space_from_dict(d: dict) -> ModelSpace:
    return ModelSpace(d["kind"], d["dim"], d.get("radius"))


def point_to_json(space: ModelSpace, p) -> str:
    p = require_valid(space, p)
    return json.dumps({"space": space_to_dict(space), "coords": list(map(float, p))})


def point_from_json(text: str):
    obj = json.loads(text)
    space = space_from_dict(obj["space"])
    return space, require_valid(space, np.array(obj["coords"], dtype=float))
