"""Projected-gradient machinery for multiplier recovery and the Slater LP.

One solver, two uses: a structured least-squares program over
simplex x free x nonnegative blocks, and a box-constrained feasibility
program whose optimum decides existence of a strictly feasible direction.
Both are convex with Lipschitz gradients; constant step 1/L with L from
power iteration guarantees a non-increasing objective.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class StructuredLSResult:
    lam: np.ndarray
    z1: np.ndarray
    z2_active: np.ndarray
    residual: float
    converged: bool
    iterations: int


def project_simplex(v) -> np.ndarray:
    """Euclidean projection onto the probability simplex (sort-based)."""
    v = np.asarray(v, dtype=float)
    k = v.size
    u = np.sort(v)[::-1]
    css = np.cumsum(u) - 1.0
    idx = np.arange(1, k + 1)
    cond = u - css / idx > 0
    rho = int(idx[cond][-1])
    theta = css[rho - 1] / rho
    return np.maximum(v - theta, 0.0)


def spectral_upper_step(H) -> float:
    """1 / lambda_max(H) via 100 power-iteration steps; 0.0 for a zero matrix."""
    H = np.asarray(H, dtype=float)
    d = H.shape[0]
    # fixed pseudo-random start: almost surely not orthogonal to the top eigenspace
    v = np.random.default_rng(0).standard_normal(d)
    v /= np.linalg.norm(v)
    lam = 0.0
    for _ in range(100):
        w = H @ v
        nrm = float(np.linalg.norm(w))
        if nrm == 0.0:
            return 0.0
        lam = nrm
        v = w / nrm
    return 1.0 / lam


def solve_structured_ls(G, J1=None, J2_active=None, iter_cap=50000, tol=1e-10) -> StructuredLSResult:
    """Minimize ||G lam + J1^T z1 + J2_active^T z2||^2 over the product set
    simplex(k) x R^m x R^a_{>=0} by projected gradient descent.

    G is n x k (columns are subdifferential samples); J1 is m x n; J2_active
    is a x n.  Terminates when the projected-gradient norm drops below tol
    or at iter_cap (then converged=False).
    """
    G = np.asarray(G, dtype=float)
    n, k = G.shape
    if k < 1:
        raise ValueError("need at least one subdifferential sample")
    J1 = np.zeros((0, n)) if J1 is None else np.asarray(J1, dtype=float).reshape(-1, n)
    J2a = np.zeros((0, n)) if J2_active is None else np.asarray(J2_active, dtype=float).reshape(-1, n)
    m, a = J1.shape[0], J2a.shape[0]
    A = np.hstack([G, J1.T, J2a.T])

    def project(x):
        out = x.copy()
        out[:k] = project_simplex(out[:k])
        out[k + m:] = np.maximum(out[k + m:], 0.0)
        return out

    x = np.zeros(k + m + a)
    x[:k] = 1.0 / k
    H = 2.0 * (A.T @ A)
    step = spectral_upper_step(H)
    if step == 0.0:
        # zero quadratic: any feasible point is optimal
        x = project(x)
        residual = float(np.linalg.norm(A @ x))
        return StructuredLSResult(x[:k], x[k:k + m], x[k + m:], residual, True, 0)

    converged = False
    iterations = 0
    prev_obj = np.inf
    for it in range(1, iter_cap + 1):
        grad = H @ x
        x_new = project(x - step * grad)
        pg_norm = float(np.linalg.norm(x - x_new)) / step
        x = x_new
        iterations = it
        if it % 100 == 0:
            obj = float(x @ (H @ x)) / 2.0
            assert obj <= prev_obj + 1e-12 * (1.0 + abs(prev_obj)), "objective increased"
            prev_obj = obj
        if pg_norm <= tol:
            converged = True
            break
    residual = float(np.linalg.norm(A @ x))
    return StructuredLSResult(x[:k], x[k:k + m], x[k + m:], residual, converged, iterations)


def slater_direction(J1, J2_active, bound=1e3, iter_cap=50000, tol=1e-12):
    """Search for phi with J1 phi = 0 and (J2_active phi)_i <= -1, |phi|_inf <= bound.

    Minimizes ||J1 phi||^2 + sum_i max(0, (J2_active phi)_i + 1)^2 over the
    box by projected gradient.  Returns (phi, converged); feasibility is for
    the caller to verify on phi.
    """
    J2a = np.asarray(J2_active, dtype=float)
    a, n = J2a.shape
    J1 = np.zeros((0, n)) if J1 is None else np.asarray(J1, dtype=float).reshape(-1, n)
    if a == 0:
        return np.zeros(n), True
    H = 2.0 * (J1.T @ J1 + J2a.T @ J2a)
    step = spectral_upper_step(H)
    if step == 0.0:
        return np.zeros(n), True
    phi = np.zeros(n)
    for _ in range(iter_cap):
        eq_res = J1 @ phi
        hinge = np.maximum(0.0, J2a @ phi + 1.0)
        grad = 2.0 * (J1.T @ eq_res + J2a.T @ hinge)
        phi_new = np.clip(phi - step * grad, -bound, bound)
        pg_norm = float(np.linalg.norm(phi - phi_new)) / step
        phi = phi_new
        if pg_norm <= tol:
            return phi, True
    return phi, False
