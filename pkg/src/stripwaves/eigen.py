"""Dense symmetric eigensolver by cyclic Jacobi rotations.

Rotations are applied in round-robin order: each round pairs every index
with exactly one partner, so the n/2 rotations of a round act on disjoint
rows and columns and are applied together as array operations. A sweep
of n - 1 rounds visits every pair once. The schedule is fixed, so results
are deterministic.
"""

from __future__ import annotations

import numpy as np

MAX_SWEEPS = 100


class EigenConvergenceError(RuntimeError):
    pass


def _schedule(n: int):
    """Round-robin pairings of 0..n-1 (n even)."""
    others = list(range(1, n))
    rounds = []
    for r in range(n - 1):
        rot = others[r:] + others[:r]
        order = [0] + rot
        p = np.array(order[: n // 2])
        q = np.array(order[n - 1 : n // 2 - 1 : -1])
        rounds.append((p, q))
    return rounds


def off_norm(A: np.ndarray) -> float:
    off = A - np.diag(np.diag(A))
    return float(np.linalg.norm(off))


def jacobi_eigh(A, tol: float = 1e-12, max_sweeps: int = MAX_SWEEPS):
    """Eigenvalues (ascending) and orthonormal eigenvectors of symmetric A.

    Iterates until the off-diagonal Frobenius norm falls below
    ``tol * ||A||_F``, then performs one more sweep; convergence is
    quadratic, so the final sweep drives the residuals to rounding level.
    """
    A = np.array(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("matrix must be square")
    n0 = A.shape[0]
    if n0 == 0:
        return np.zeros(0), np.zeros((0, 0))
    A = (A + A.T) / 2
    n = n0 + (n0 % 2)
    if n != n0:
        # isolated padding index; its rotations are identities
        A = np.pad(A, ((0, 1), (0, 1)))
    V = np.eye(n)
    scale = float(np.linalg.norm(A))
    target = tol * scale
    rounds = _schedule(n)
    sweeps = 0
    polish = False
    while True:
        if off_norm(A) <= target:
            if polish:
                break
            polish = True
        if sweeps >= max_sweeps:
            raise EigenConvergenceError(f"Jacobi did not converge in {max_sweeps} sweeps")
        for p, q in rounds:
            apq = A[p, q]
            app, aqq = A[p, p], A[q, q]
            active = np.abs(apq) > 1e-150 * (np.abs(app) + np.abs(aqq) + 1e-300)
            with np.errstate(divide="ignore", invalid="ignore"):
                tau = np.where(active, (aqq - app) / (2 * np.where(active, apq, 1.0)), 0.0)
            t = np.where(tau >= 0, 1.0, -1.0) / (np.abs(tau) + np.sqrt(1.0 + tau**2))
            t = np.where(active, t, 0.0)
            c = 1.0 / np.sqrt(1.0 + t**2)
            s = t * c
            Ap, Aq = A[:, p], A[:, q]
            A[:, p], A[:, q] = c * Ap - s * Aq, s * Ap + c * Aq
            Ap, Aq = A[p, :], A[q, :]
            A[p, :], A[q, :] = c[:, None] * Ap - s[:, None] * Aq, s[:, None] * Ap + c[:, None] * Aq
            A[p, q] = 0.0
            A[q, p] = 0.0
            Vp, Vq = V[:, p], V[:, q]
            V[:, p], V[:, q] = c * Vp - s * Vq, s * Vp + c * Vq
        sweeps += 1
    evals = np.diag(A)[:n0].copy()
    V = V[:n0, :n0] if n != n0 else V
    idx = np.argsort(evals, kind="stable")
    return evals[idx], V[:, idx]
