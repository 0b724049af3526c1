"""Benchmark problem families as online oracles.

Two problems: online estimation of doubly-stochastic matrices (quadratic
losses against random permutation matrices, linear constraints) and sparse
binary classification (log-loss with an elastic-net budget constraint).
Each problem derives its own bound constants (R, G, D, F, sigma).
"""

from __future__ import annotations

import numpy as np
from scipy.special import expit

from .projections import Constraint, ConstraintSet
from .schedules import ProblemConstants


def dsm_loss_grad(Y: np.ndarray, X: np.ndarray):
    """Quadratic tracking loss 0.5 * ||Y - X||_F^2 and its gradient X - Y."""
    Y = np.asarray(Y, dtype=float)
    X = np.asarray(X, dtype=float)
    if Y.shape != X.shape:
        raise ValueError(f"shape mismatch: {Y.shape} vs {X.shape}")
    diff = X - Y
    return 0.5 * float(np.sum(diff * diff)), diff


def dsm_constraints(p: int) -> ConstraintSet:
    """Linear constraints of the doubly-stochastic polytope as components.

    p^2 nonnegativity constraints -X_ij <= 0 followed by 4p inequalities
    (row sums <= 1, >= 1, column sums <= 1, >= 1) that model the 2p equality
    constraints. Matrices are flattened row-major to dimension p^2.
    """
    if p < 2:
        raise ValueError("p must be >= 2")
    components = []

    def nonneg(i, j):
        k = i * p + j
        sub = np.zeros(p * p)
        sub[k] = -1.0
        return Constraint(value=lambda x, k=k: -x[k],
                          subgradient=lambda x, s=sub: s)

    def sum_constraint(mask, sign):
        # sign=+1: sum - 1 <= 0; sign=-1: 1 - sum <= 0
        sub = sign * mask
        return Constraint(
            value=lambda x, m=mask, s=sign: s * (float(m @ x) - 1.0),
            subgradient=lambda x, v=sub: v,
        )

    for i in range(p):
        for j in range(p):
            components.append(nonneg(i, j))
    masks_rows = []
    masks_cols = []
    for i in range(p):
        m = np.zeros(p * p)
        m[i * p:(i + 1) * p] = 1.0
        masks_rows.append(m)
    for j in range(p):
        m = np.zeros(p * p)
        m[j::p] = 1.0
        masks_cols.append(m)
    for m in masks_rows:
        components.append(sum_constraint(m, +1.0))
    for m in masks_rows:
        components.append(sum_constraint(m, -1.0))
    for m in masks_cols:
        components.append(sum_constraint(m, +1.0))
    for m in masks_cols:
        components.append(sum_constraint(m, -1.0))
    return ConstraintSet(components=components)


def permutation_stream(p: int, seed: int, T: int) -> np.ndarray:
    """T uniformly random p x p permutation matrices, deterministic in seed."""
    if p < 2:
        raise ValueError("p must be >= 2")
    rng = np.random.default_rng(seed)
    out = np.zeros((T, p, p))
    rows = np.arange(p)
    for t in range(T):
        out[t, rows, rng.permutation(p)] = 1.0
    return out


class DsmProblem:
    """Online doubly-stochastic matrix estimation.

    Losses f_t(X) = 0.5 * ||Y_t - X||_F^2 with Y_t random permutation
    matrices; iterates are flattened p x p matrices. Derived constants:
    R = sqrt(p), G = 2R, D = R, sigma = 1; F is the loss range bound
    0.5 * (sqrt(p) + R)^2 over the enclosing ball.
    """

    def __init__(self, p: int, seed: int = 0):
        if p < 2:
            raise ValueError("p must be >= 2")
        self.p = p
        self.seed = seed
        self.dim = p * p
        R = float(np.sqrt(p))
        self.constants = ProblemConstants(
            R=R, G=2.0 * R, D=R, F=0.5 * (np.sqrt(p) + R) ** 2, sigma=1.0
        )
        self.constraints = dsm_constraints(p)
        self._ys = None

    def materialize(self, T: int, seed: int | None = None):
        if seed is not None:
            self.seed = seed
        self._ys = permutation_stream(self.p, self.seed, T)
        return self

    @property
    def stream(self) -> np.ndarray:
        if self._ys is None:
            raise RuntimeError("call materialize(T) before accessing the stream")
        return self._ys

    def loss(self, t: int, x: np.ndarray):
        """Value and gradient of f_t at x (both flattened), t is 1-indexed."""
        Y = self.stream[t - 1]
        value, grad = dsm_loss_grad(Y, x.reshape(self.p, self.p))
        return value, grad.ravel()

    def project_feasible(self, x: np.ndarray, tol: float = 1e-10) -> np.ndarray:
        from .offline import project_birkhoff

        return project_birkhoff(x.reshape(self.p, self.p), tol=tol).ravel()


def logloss_grad(y: float, u: np.ndarray, x: np.ndarray):
    """Logistic loss log(1 + exp(-y x.u)) and gradient, overflow-safe."""
    if y not in (-1, 1, -1.0, 1.0):
        raise ValueError("label must be -1 or +1")
    margin = y * float(x @ u)
    value = float(np.logaddexp(0.0, -margin))
    grad = -y * u * float(expit(-margin))
    return value, grad


def elasticnet_constants(rho: float, features: np.ndarray) -> ProblemConstants:
    """Derived constants for the elastic-net constrained logistic problem.

    R solves ||x||_2 + 0.5 ||x||_2^2 <= rho at the boundary; G covers both
    the constraint subgradients (sqrt(d) + R) and the feature norms; the
    loss range F is the maximum achievable log-loss over the ball.
    """
    if rho <= 0:
        raise ValueError("rho must be positive")
    features = np.asarray(features, dtype=float)
    if features.size == 0:
        raise ValueError("dataset must be nonempty")
    d = features.shape[1]
    R = float(np.sqrt(1.0 + 2.0 * rho) - 1.0)
    max_u = float(np.max(np.linalg.norm(features, axis=1)))
    G = max(np.sqrt(d) + R, max_u)
    D = float(np.sqrt(d) * R + R**2 / 2.0)
    F = float(np.logaddexp(0.0, G * R))
    return ProblemConstants(R=R, G=G, D=D, F=F, sigma=0.0)


def elasticnet_constraint(rho: float) -> ConstraintSet:
    """Single aggregated constraint ||x||_1 + 0.5 ||x||_2^2 - rho <= 0.

    At l1 kinks the zero subgradient coordinate is chosen (minimal-norm
    element of the subdifferential), which np.sign provides.
    """
    return ConstraintSet(components=[
        Constraint(
            value=lambda x: float(np.sum(np.abs(x)) + 0.5 * x @ x - rho),
            subgradient=lambda x: np.sign(x) + x,
        )
    ])


class ElasticNetProblem:
    """Sparse online binary classification with an elastic-net budget.

    Rounds draw (label, feature) pairs at random with replacement from the
    dataset; the long-term constraint keeps iterates near the elastic-net
    ball of budget rho.
    """

    def __init__(self, labels: np.ndarray, features: np.ndarray, rho: float,
                 seed: int = 0):
        labels = np.asarray(labels, dtype=float)
        features = np.asarray(features, dtype=float)
        if labels.shape[0] != features.shape[0]:
            raise ValueError("labels and features must have equal length")
        if not np.all(np.isin(labels, (-1.0, 1.0))):
            raise ValueError("labels must be -1/+1")
        self.labels = labels
        self.features = features
        self.rho = float(rho)
        self.seed = seed
        self.dim = features.shape[1]
        self.constants = elasticnet_constants(rho, features)
        self.constraints = elasticnet_constraint(rho)
        self._order = None

    def materialize(self, T: int, seed: int | None = None):
        if seed is not None:
            self.seed = seed
        rng = np.random.default_rng(self.seed)
        self._order = rng.integers(0, self.labels.shape[0], size=T)
        return self

    @property
    def stream(self) -> np.ndarray:
        if self._order is None:
            raise RuntimeError("call materialize(T) before accessing the stream")
        return self._order

    def loss(self, t: int, x: np.ndarray):
        i = self.stream[t - 1]
        return logloss_grad(self.labels[i], self.features[i], x)

    def project_feasible(self, x: np.ndarray, tol: float = 1e-10) -> np.ndarray:
        from .offline import project_elasticnet_ball

        return project_elasticnet_ball(x, self.rho, tol=tol)


def search_rho(labels: np.ndarray, features: np.ndarray,
               target_nonzero_frac: float, lo: float = 1e-3, hi: float = 50.0,
               iters: int = 25, zero_tol: float = 1e-4, seed: int = 0):
    """Bisect the budget rho so the offline solution hits a target sparsity.

    The fraction of nonzero coordinates of the offline optimum grows with
    rho; returns (rho, achieved_fraction).
    """
    from .offline import solve_offline

    n = labels.shape[0]

    def nonzero_frac(rho):
        problem = ElasticNetProblem(labels, features, rho, seed=seed)
        problem.materialize(n, seed)
        sol = solve_offline(problem, n)
        return float(np.mean(np.abs(sol.x_star) > zero_tol))

    lo_v, hi_v = lo, hi
    for _ in range(iters):
        mid = 0.5 * (lo_v + hi_v)
        if nonzero_frac(mid) < target_nonzero_frac:
            lo_v = mid
        else:
            hi_v = mid
    rho = 0.5 * (lo_v + hi_v)
    return rho, nonzero_frac(rho)
