"""Symmetric eigendecomposition by cyclic Jacobi rotations.

Small dense matrices only; the corpora here never exceed ~16 vertices.
"""
from __future__ import annotations

import math

import numpy as np


class JacobiConvergenceError(ArithmeticError):
    """Off-diagonal mass failed to vanish within the sweep cap."""


def symmetric_eigendecomposition(a, tol: float = 1e-14, max_sweeps: int = 100):
    """Diagonalize a symmetric matrix.

    Returns (eigenvalues, eigenvectors) with eigenvalues descending and the
    k-th column of the eigenvector matrix paired with the k-th eigenvalue.
    Sweeps run until the off-diagonal Frobenius mass drops below tol * ||a||_F.
    """
    a = np.array(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("matrix must be square")
    n = a.shape[0]
    scale = max(1.0, float(np.abs(a).max(initial=0.0)))
    if np.abs(a - a.T).max(initial=0.0) > 1e-12 * scale:
        raise ValueError("matrix is not symmetric")
    a = 0.5 * (a + a.T)
    v = np.eye(n)
    norm = float(np.linalg.norm(a))
    if n == 1 or norm == 0.0:
        return a.diagonal().copy(), v

    threshold = tol * norm
    for _ in range(max_sweeps):
        off = math.sqrt(max(0.0, norm * norm - float(np.sum(a.diagonal() ** 2))))
        off = float(np.linalg.norm(a - np.diag(a.diagonal())))
        if off <= threshold:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= 1e-300:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                if abs(theta) > 1e150:
                    t = 1.0 / (2.0 * theta)
                else:
                    t = math.copysign(1.0, theta) / (
                        abs(theta) + math.sqrt(theta * theta + 1.0)
                    )
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                rot_p = c * a[:, p] - s * a[:, q]
                rot_q = s * a[:, p] + c * a[:, q]
                a[:, p], a[:, q] = rot_p, rot_q
                rot_p = c * a[p, :] - s * a[q, :]
                rot_q = s * a[p, :] + c * a[q, :]
                a[p, :], a[q, :] = rot_p, rot_q
                a[p, q] = a[q, p] = 0.0
                rot_p = c * v[:, p] - s * v[:, q]
                rot_q = s * v[:, p] + c * v[:, q]
                v[:, p], v[:, q] = rot_p, rot_q
    else:
        raise JacobiConvergenceError(
            f"no convergence after {max_sweeps} sweeps (off-diagonal {off:.3e})"
        )

    eigenvalues = a.diagonal().copy()
    order = np.argsort(-eigenvalues, kind="stable")
    return eigenvalues[order], v[:, order]
