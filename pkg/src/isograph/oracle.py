"""Numerical feasibility oracles and witness construction for exact-distance embeddings.

Three spectral tests (classical MDS, spherical cosine Gram, Lorentzian Gram),
an independent stress-minimization cross-oracle, exact verification of
candidate embeddings, and orthogonal alignment of witnesses.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .eigen import symmetric_eigendecomposition
from .graph_core import DistanceMatrix
from .model_spaces import (
    EUCLIDEAN,
    HYPERBOLIC,
    SPHERE,
    ModelSpace,
    geodesic_distance,
    minkowski_product,
    random_point,
    space_from_dict,
    space_to_dict,
    validate_point,
)

#: default relative tolerance for PSD / rank / signature decisions
DEFAULT_TOL = 1e-9

NEGATIVE_EIGENVALUE = "negative_eigenvalue"
RANK_EXCEEDS_DIM = "rank_exceeds_dim"
DISTANCE_EXCEEDS_DIAMETER = "distance_exceeds_diameter"
INFINITE_DISTANCE = "infinite_distance"
WRONG_SIGNATURE = "wrong_signature"


@dataclass(frozen=True)
class Embedding:
    """One ambient coordinate row per vertex index."""

    space: ModelSpace
    points: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != self.space.ambient_dim:
            raise ValueError(
                f"points must be (m, {self.space.ambient_dim}), got {pts.shape}"
            )
        for row in pts:
            msg = validate_point(self.space, row)
            if msg is not None:
                raise ValueError(f"invalid point in embedding: {msg}")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @property
    def size(self) -> int:
        return self.points.shape[0]

    def pairwise_distances(self) -> np.ndarray:
        m = self.size
        d = np.zeros((m, m))
        for i in range(m):
            for j in range(i + 1, m):
                d[i, j] = d[j, i] = geodesic_distance(
                    self.space, self.points[i], self.points[j]
                )
        return d


@dataclass(frozen=True)
class ResidualReport:
    max_error: float
    mean_error: float
    min_pairwise: float
    tol: float

    @property
    def passes(self) -> bool:
        return self.max_error <= self.tol and self.min_pairwise > self.tol


@dataclass(frozen=True)
class EmbedCertificate:
    feasible: bool
    eigenvalues: tuple
    rank: int
    witness: Optional[Embedding] = None
    residual: Optional[float] = None
    reason: Optional[str] = None

    def __post_init__(self):
        if self.feasible and self.witness is None:
            raise ValueError("feasible certificate requires a witness")
        if not self.feasible and self.reason is None:
            raise ValueError("infeasible certificate requires a reason")


def default_verify_tol(d: DistanceMatrix) -> float:
    return 1e-8 * (1.0 + d.max_finite)


def verify_isometric(embedding: Embedding, d: DistanceMatrix, tol: float) -> ResidualReport:
    """Compare realized geodesic distances against the target matrix."""
    if d.has_infinite:
        raise ValueError("cannot verify against infinite distances")
    if embedding.size != d.size:
        raise ValueError(
            f"embedding has {embedding.size} points, matrix has {d.size}"
        )
    m = d.size
    if m <= 1:
        return ResidualReport(0.0, 0.0, math.inf, tol)
    realized = embedding.pairwise_distances()
    iu = np.triu_indices(m, 1)
    errs = np.abs(realized[iu] - d.values[iu])
    return ResidualReport(
        max_error=float(errs.max()),
        mean_error=float(errs.mean()),
        min_pairwise=float(realized[iu].min()),
        tol=tol,
    )


def _threshold(eigenvalues: np.ndarray, tol: float) -> float:
    mx = float(np.abs(eigenvalues).max(initial=0.0))
    return tol * mx


def _finite_or_reject(d: DistanceMatrix, eigs=()):
    if d.size == 0:
        raise ValueError("empty distance matrix")
    if d.has_infinite:
        return EmbedCertificate(
            feasible=False,
            eigenvalues=tuple(eigs),
            rank=0,
            reason=INFINITE_DISTANCE,
        )
    return None


def euclidean_feasibility(d: DistanceMatrix, n: int, tol: float = DEFAULT_TOL) -> EmbedCertificate:
    """Classical MDS test: double-centered squared distances must be PSD of rank <= n."""
    reject = _finite_or_reject(d)
    if reject is not None:
        return reject
    m = d.size
    sq = d.values**2
    j = np.eye(m) - np.ones((m, m)) / m
    b = -0.5 * j @ sq @ j
    eigenvalues, vectors = symmetric_eigendecomposition(b)
    tau = _threshold(eigenvalues, tol)
    rank = int(np.sum(eigenvalues > tau))
    if eigenvalues.min(initial=0.0) < -tau:
        return EmbedCertificate(
            False, tuple(eigenvalues), rank, reason=NEGATIVE_EIGENVALUE
        )
    if rank > n:
        return EmbedCertificate(
            False, tuple(eigenvalues), rank, reason=RANK_EXCEEDS_DIM
        )
    coords = np.zeros((m, n))
    for k in range(rank):
        coords[:, k] = vectors[:, k] * math.sqrt(max(0.0, eigenvalues[k]))
    witness = Embedding(ModelSpace(EUCLIDEAN, n), coords)
    report = verify_isometric(witness, d, default_verify_tol(d))
    if not report.passes and m > 1:
        raise ArithmeticError(
            f"MDS witness failed verification (residual {report.max_error:.3e})"
        )
    return EmbedCertificate(
        True, tuple(eigenvalues), rank, witness=witness, residual=report.max_error
    )


def sphere_feasibility(
    d: DistanceMatrix, n: int, r: float, tol: float = DEFAULT_TOL
) -> EmbedCertificate:
    """Cosine Gram test: r^2 cos(D/r) must be PSD of rank <= n+1, entries <= pi*r."""
    if r <= 0:
        raise ValueError("radius must be positive")
    reject = _finite_or_reject(d)
    if reject is not None:
        return reject
    m = d.size
    if d.max_finite > math.pi * r + tol:
        return EmbedCertificate(
            False, (), 0, reason=DISTANCE_EXCEEDS_DIAMETER
        )
    c = r * r * np.cos(d.values / r)
    eigenvalues, vectors = symmetric_eigendecomposition(c)
    tau = _threshold(eigenvalues, tol)
    rank = int(np.sum(eigenvalues > tau))
    if eigenvalues.min(initial=0.0) < -tau:
        return EmbedCertificate(
            False, tuple(eigenvalues), rank, reason=NEGATIVE_EIGENVALUE
        )
    if rank > n + 1:
        return EmbedCertificate(
            False, tuple(eigenvalues), rank, reason=RANK_EXCEEDS_DIM
        )
    coords = np.zeros((m, n + 1))
    for k in range(rank):
        coords[:, k] = vectors[:, k] * math.sqrt(max(0.0, eigenvalues[k]))
    # C_ii = r^2 puts each row at norm r up to the clipped mass; snap exactly
    norms = np.linalg.norm(coords, axis=1)
    if np.any(norms < 0.5 * r):  # pragma: no cover - would need C_ii far from r^2
        raise ArithmeticError("degenerate spherical witness row")
    coords = coords * (r / norms)[:, None]
    witness = Embedding(ModelSpace(SPHERE, n, r), coords)
    report = verify_isometric(witness, d, default_verify_tol(d))
    if not report.passes and m > 1:
        raise ArithmeticError(
            f"spherical witness failed verification (residual {report.max_error:.3e})"
        )
    return EmbedCertificate(
        True, tuple(eigenvalues), rank, witness=witness, residual=report.max_error
    )


def hyperbolic_feasibility(
    d: DistanceMatrix, n: int, tol: float = DEFAULT_TOL
) -> EmbedCertificate:
    """Lorentzian Gram test: cosh(D) with one positive and <= n negative eigenvalues.

    The algebraic signature condition is necessary; sufficiency comes from
    verifying the assembled hyperboloid witness, so a signature that cannot be
    realized on one sheet is downgraded to infeasible.
    """
    reject = _finite_or_reject(d)
    if reject is not None:
        return reject
    m = d.size
    h = np.cosh(d.values)
    eigenvalues, vectors = symmetric_eigendecomposition(h)
    tau = _threshold(eigenvalues, tol)
    positives = int(np.sum(eigenvalues > tau))
    negatives = int(np.sum(eigenvalues < -tau))
    rank = positives + negatives
    if positives != 1:
        return EmbedCertificate(
            False, tuple(eigenvalues), rank, reason=WRONG_SIGNATURE
        )
    if negatives > n:
        return EmbedCertificate(
            False, tuple(eigenvalues), rank, reason=RANK_EXCEEDS_DIM
        )
    timelike = vectors[:, 0] * math.sqrt(eigenvalues[0])
    if timelike.sum() < 0:
        timelike = -timelike
    coords = np.zeros((m, n + 1))
    coords[:, -1] = timelike
    neg_idx = [k for k in range(m) if eigenvalues[k] < -tau]
    for col, k in enumerate(neg_idx):
        coords[:, col] = vectors[:, k] * math.sqrt(-eigenvalues[k])
    # renormalize onto the sheet; a non-positive self-product cannot be repaired
    space = ModelSpace(HYPERBOLIC, n)
    for i in range(m):
        q = -minkowski_product(coords[i], coords[i])
        if q <= 0 or coords[i, -1] <= 0:
            return EmbedCertificate(
                False, tuple(eigenvalues), rank, reason=WRONG_SIGNATURE
            )
        coords[i] /= math.sqrt(q)
    witness = Embedding(space, coords)
    report = verify_isometric(witness, d, default_verify_tol(d))
    if not report.passes and m > 1:
        return EmbedCertificate(
            False, tuple(eigenvalues), rank, reason=WRONG_SIGNATURE
        )
    return EmbedCertificate(
        True, tuple(eigenvalues), rank, witness=witness, residual=report.max_error
    )


# ---------------------------------------------------------------------------
# stress cross-oracle

def _pair_gradients(space: ModelSpace, x: np.ndarray, target: np.ndarray):
    """Stress value and Euclidean-ambient gradient for a configuration."""
    m = x.shape[0]
    grad = np.zeros_like(x)
    stress = 0.0
    eps = 1e-7
    for i in range(m):
        for j in range(i + 1, m):
            if space.kind == EUCLIDEAN:
                diff = x[i] - x[j]
                dist = float(np.linalg.norm(diff))
                direction = diff / max(dist, 1e-12)
                gi = direction
            elif space.kind == SPHERE:
                r = space.radius
                u = float(np.dot(x[i], x[j])) / (r * r)
                u = min(1.0, max(-1.0, u))
                dist = r * math.acos(u)
                denom = max(math.sqrt(max(0.0, 1.0 - u * u)), eps)
                gi = -x[j] / (r * denom)
            else:
                mprod = -minkowski_product(x[i], x[j])
                mprod = max(1.0, mprod)
                dist = math.acosh(mprod)
                denom = max(math.sqrt(max(0.0, mprod * mprod - 1.0)), eps)
                eta_xj = x[j].copy()
                eta_xj[-1] = -eta_xj[-1]
                gi = -eta_xj / denom
            delta = dist - target[i, j]
            stress += delta * delta
            grad[i] += 2.0 * delta * gi
            if space.kind == EUCLIDEAN:
                grad[j] -= 2.0 * delta * gi
            elif space.kind == SPHERE:
                denom_j = denom
                grad[j] += 2.0 * delta * (-x[i] / (space.radius * denom_j))
            else:
                eta_xi = x[i].copy()
                eta_xi[-1] = -eta_xi[-1]
                grad[j] += 2.0 * delta * (-eta_xi / denom)
    return stress, grad


def _project_tangent(space: ModelSpace, x: np.ndarray, grad: np.ndarray) -> np.ndarray:
    if space.kind == EUCLIDEAN:
        return grad
    out = grad.copy()
    if space.kind == SPHERE:
        r2 = space.radius**2
        for i in range(x.shape[0]):
            out[i] -= (np.dot(out[i], x[i]) / r2) * x[i]
        return out
    # hyperboloid: flip the ambient gradient with the metric, then project
    out[:, -1] = -out[:, -1]
    for i in range(x.shape[0]):
        out[i] += minkowski_product(out[i], x[i]) * x[i]
    return out


def _retract(space: ModelSpace, x: np.ndarray):
    """Pull a stepped configuration back onto the manifold; None if unrecoverable."""
    if space.kind == EUCLIDEAN:
        return x
    y = x.copy()
    if space.kind == SPHERE:
        norms = np.linalg.norm(y, axis=1)
        if np.any(norms < 1e-12):
            return None
        return y * (space.radius / norms)[:, None]
    for i in range(y.shape[0]):
        q = -minkowski_product(y[i], y[i])
        if q <= 1e-12 or y[i, -1] <= 0:
            return None
        y[i] /= math.sqrt(q)
    return y


def _stress_value(space: ModelSpace, x: np.ndarray, target: np.ndarray) -> float:
    m = x.shape[0]
    stress = 0.0
    for i in range(m):
        for j in range(i + 1, m):
            if space.kind == EUCLIDEAN:
                dist = float(np.linalg.norm(x[i] - x[j]))
            elif space.kind == SPHERE:
                r = space.radius
                u = float(np.dot(x[i], x[j])) / (r * r)
                dist = r * math.acos(min(1.0, max(-1.0, u)))
            else:
                mprod = max(1.0, -minkowski_product(x[i], x[j]))
                dist = math.acosh(mprod)
            delta = dist - target[i, j]
            stress += delta * delta
    return stress


def _descend(space, x, target, iters):
    stress, grad = _pair_gradients(space, x, target)
    prev_x = None
    prev_g = None
    step = 1.0
    for _ in range(iters):
        if stress < 1e-18:
            break
        g = _project_tangent(space, x, grad)
        # slope of the stress along -g; equals |g|^2 in the flat and sphere
        # cases and the Minkowski norm of the Riemannian gradient otherwise
        gnorm2 = float(np.sum(grad * g))
        if gnorm2 < 1e-26:
            break
        # Barzilai-Borwein estimate seeds the backtracking line search
        if prev_x is not None:
            s_vec = (x - prev_x).ravel()
            y_vec = (g - prev_g).ravel()
            sy = float(np.dot(s_vec, y_vec))
            yy = float(np.dot(y_vec, y_vec))
            if sy > 0 and yy > 0:
                step = min(max(sy / yy, 1e-8), 1e3)
        improved = False
        alpha = step
        for _ in range(50):
            cand = _retract(space, x - alpha * g)
            if cand is not None:
                s = _stress_value(space, cand, target)
                if s <= stress - 1e-4 * alpha * gnorm2:
                    prev_x, prev_g = x, g
                    x = cand
                    stress, grad = _pair_gradients(space, x, target)
                    step = alpha * 2.0
                    improved = True
                    break
            alpha *= 0.5
        if not improved:
            break
    return x, stress


def stress_minimize(
    d: DistanceMatrix,
    space: ModelSpace,
    restarts: int = 10,
    iters: int = 300,
    seed: int = 0,
):
    """Best projected-gradient stress minimizer over deterministic random restarts."""
    if d.has_infinite:
        raise ValueError("stress oracle rejects infinite distances")
    m = d.size
    target = d.values
    box = max(1.0, 0.75 * d.max_finite)
    best_x = None
    best_stress = math.inf
    for k in range(restarts):
        x = np.stack(
            [
                random_point(space, seed * 1000003 + k * 8191 + i, box=box)
                for i in range(m)
            ]
        )
        x, stress = _descend(space, x, target, iters)
        if stress < best_stress:
            best_stress = stress
            best_x = x
    return Embedding(space, best_x), best_stress


# ---------------------------------------------------------------------------
# alignment

def _orthonormal_completion(basis_cols: np.ndarray, dim: int) -> np.ndarray:
    """Extend orthonormal columns to a full basis by Gram-Schmidt over e_k."""
    cols = [basis_cols[:, k] for k in range(basis_cols.shape[1])]
    for k in range(dim):
        v = np.zeros(dim)
        v[k] = 1.0
        for u in cols:
            v -= np.dot(u, v) * u
        norm = np.linalg.norm(v)
        if norm > 1e-8:
            cols.append(v / norm)
        if len(cols) == dim:
            break
    return np.stack(cols, axis=1)


def procrustes_align(space: ModelSpace, a: Embedding, b: Embedding):
    """Orthogonal map phi minimizing sum |phi(b_i) - a_i|^2; returns (matrix, residual).

    Spheres align about the center; Euclidean configurations are centered
    first. Hyperbolic alignment is not supported.
    """
    if space.kind == HYPERBOLIC:
        raise ValueError("hyperbolic alignment is not supported")
    if a.space != space or b.space != space:
        raise ValueError("embeddings must live in the given space")
    if a.size != b.size:
        raise ValueError("embeddings must have the same number of points")
    p = np.array(a.points)
    q = np.array(b.points)
    if space.kind == EUCLIDEAN:
        p = p - p.mean(axis=0)
        q = q - q.mean(axis=0)
    dim = p.shape[1]
    cross = q.T @ p  # maximize tr(R @ cross)
    sq_v = cross.T @ cross
    eigenvalues, v = symmetric_eigendecomposition(sq_v)
    sigma = np.sqrt(np.clip(eigenvalues, 0.0, None))
    cutoff = 1e-12 * max(1.0, sigma.max(initial=0.0))
    nz = int(np.sum(sigma > cutoff))
    u_cols = np.stack(
        [cross @ v[:, k] / sigma[k] for k in range(nz)], axis=1
    ) if nz else np.zeros((dim, 0))
    u_full = _orthonormal_completion(u_cols, dim)
    v_full = _orthonormal_completion(v[:, :nz], dim)
    rotation = v_full @ u_full.T
    mapped = q @ rotation.T
    residual = float(np.linalg.norm(mapped - p, axis=1).max(initial=0.0))
    return rotation, residual


# ---------------------------------------------------------------------------
# JSON

def embedding_to_dict(e: Embedding, residual: Optional[float] = None) -> dict:
    d = {
        "space": space_to_dict(e.space),
        "points": [[float(x) for x in row] for row in e.points],
    }
    if residual is not None:
        d["residual"] = float(residual)
    return d


def embedding_from_dict(d: dict) -> Embedding:
    return Embedding(space_from_dict(d["space"]), np.array(d["points"], dtype=float))


def _sig12(x: float) -> float:
    if x == 0.0 or not math.isfinite(x):
        return x
    return float(f"{x:.12g}")


def certificate_to_dict(c: EmbedCertificate) -> dict:
    d = {
        "feasible": c.feasible,
        "eigenvalues": [_sig12(float(x)) for x in c.eigenvalues],
        "rank": c.rank,
        "residual": c.residual,
        "reason": c.reason,
    }
    if c.witness is not None:
        d["witness"] = embedding_to_dict(c.witness, c.residual)
    return d
