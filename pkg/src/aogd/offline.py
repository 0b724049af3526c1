"""Offline optima and exact feasible-set projections for regret accounting.

The online learner never projects onto the feasible set; these projections
exist only to compute the comparator x* = argmin over the feasible set of
the average loss on a stream prefix, by projected gradient descent with
backtracking. Birkhoff-polytope projection uses Dykstra's alternating
projections (plain alternating projection would converge to a feasible
point, not the Euclidean projection); the elastic-net ball projection
reduces to a 1-D bisection on the KKT multiplier.
"""

from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class OfflineSolution:
    x_star: np.ndarray
    objective: float
    iterations: int
    tolerance_met: bool


def _project_doubly_stochastic_affine(X: np.ndarray) -> np.ndarray:
    """Closed-form projection onto {X : X @ 1 = 1, X.T @ 1 = 1}."""
    p = X.shape[0]
    r = X.sum(axis=1) - 1.0
    c = X.sum(axis=0) - 1.0
    s = X.sum() - p
    return X - (r[:, None] + c[None, :]) / p + s / p**2


def project_birkhoff(A: np.ndarray, tol: float = 1e-10,
                     max_iter: int = 10000) -> np.ndarray:
    """Euclidean projection of A onto the doubly-stochastic matrices.

    Dykstra's algorithm alternating between the affine set {X1=1, X.T 1=1}
    (closed form) and the nonnegative orthant, with the correction term on
    the orthant half-step. Stops when successive full sweeps differ by less
    than tol in Frobenius norm.
    """
    A = np.asarray(A, dtype=float)
    if not np.all(np.isfinite(A)):
        raise ValueError("input matrix must be finite")
    if tol <= 0:
        raise ValueError("tol must be positive")
    X = A.copy()
    q = np.zeros_like(A)  # correction for the orthant (the non-affine set)
    prev = X.copy()
    for _ in range(max_iter):
        Y = _project_doubly_stochastic_affine(X)
        Z = np.maximum(Y + q, 0.0)
        q = Y + q - Z
        X = Z
        if np.linalg.norm(X - prev) < tol:
            return X
        prev = X.copy()
    return X


def _soft_threshold(v: np.ndarray, nu: float) -> np.ndarray:
    return np.sign(v) * np.maximum(np.abs(v) - nu, 0.0)


def elasticnet_value(x: np.ndarray) -> float:
    return float(np.sum(np.abs(x)) + 0.5 * float(x @ x))


def project_elasticnet_ball(v: np.ndarray, rho: float, tol: float = 1e-12,
                            max_iter: int = 200) -> np.ndarray:
    """Euclidean projection onto {x : ||x||_1 + 0.5 ||x||_2^2 <= rho}.

    For infeasible v the projection is x(nu) = soft_threshold(v, nu)/(1+nu)
    with nu > 0 the multiplier at which the constraint is tight; h(nu) =
    ||x(nu)||_1 + 0.5||x(nu)||_2^2 - rho is strictly decreasing, so nu is
    found by bisection to |h| < tol.
    """
    v = np.asarray(v, dtype=float)
    if rho <= 0:
        raise ValueError("rho must be positive")
    if elasticnet_value(v) <= rho:
        return v.copy()

    def h(nu):
        x = _soft_threshold(v, nu) / (1.0 + nu)
        return elasticnet_value(x) - rho

    lo, hi = 0.0, float(np.max(np.abs(v)))  # h(lo) > 0, x(hi) = 0 so h(hi) = -rho < 0
    if not (h(lo) > 0 and h(hi) < 0):
        raise RuntimeError("bisection bracket failure in elastic-net projection")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        hm = h(mid)
        if abs(hm) < tol:
            lo = hi = mid
            break
        if hm > 0:
            lo = mid
        else:
            hi = mid
    nu = 0.5 * (lo + hi)
    return _soft_threshold(v, nu) / (1.0 + nu)


def solve_offline(problem, t: int, tol: float = 1e-8,
                  max_iter: int = 5000) -> OfflineSolution:
    """Minimize the average loss of the first t rounds over the feasible set.

    Projected gradient descent with backtracking line search on the step
    size; terminates when the gradient-mapping norm falls below tol. The
    problem must have its first t rounds materialized.
    """
    if t < 1:
        raise ValueError("t must be >= 1")

    def objective_grad(x):
        total, grad = 0.0, np.zeros_like(x)
        for s in range(1, t + 1):
            v, g = problem.loss(s, x)
            total += v
            grad += g
        return total / t, grad / t

    x = problem.project_feasible(np.zeros(problem.dim))
    step = 1.0
    fx, gx = objective_grad(x)
    for it in range(1, max_iter + 1):
        # backtracking on the projected step
        while True:
            x_new = problem.project_feasible(x - step * gx)
            diff = x_new - x
            f_new = objective_grad(x_new)[0]
            if f_new <= fx + gx @ diff + 0.5 / step * float(diff @ diff) + 1e-14:
                break
            step *= 0.5
            if step < 1e-14:
                break
        mapping_norm = float(np.linalg.norm(x_new - x)) / step
        x = x_new
        fx, gx = objective_grad(x)
        if mapping_norm < tol:
            return OfflineSolution(x_star=x, objective=fx, iterations=it,
                                   tolerance_met=True)
        step = min(step * 2.0, 1.0)
    return OfflineSolution(x_star=x, objective=fx, iterations=max_iter,
                           tolerance_met=False)


def cache_path(cache_dir: str, problem_id: str, t: int) -> str:
    return os.path.join(cache_dir, f"{problem_id}_t{t}.json")


def solve_offline_cached(problem, t: int, cache_dir: str, problem_id: str,
                         tol: float = 1e-8, max_iter: int = 5000) -> OfflineSolution:
    """Disk-cached solve_offline; writes via atomic rename."""
    path = cache_path(cache_dir, problem_id, t)
    if os.path.exists(path):
        with open(path) as fh:
            data = json.load(fh)
        return OfflineSolution(
            x_star=np.asarray(data["x_star"]),
            objective=data["objective"],
            iterations=data["iterations"],
            tolerance_met=data["tolerance_met"],
        )
    sol = solve_offline(problem, t, tol=tol, max_iter=max_iter)
    os.makedirs(cache_dir, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=cache_dir, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            json.dump({
                "x_star": sol.x_star.tolist(),
                "objective": sol.objective,
                "iterations": sol.iterations,
                "tolerance_met": sol.tolerance_met,
            }, fh)
        os.replace(tmp, path)
    finally:
        if os.path.exists(tmp):
            os.remove(tmp)
    return sol
