"""Adaptive step-size schedules, sufficient conditions, and regret bounds.

The online learner alternates a projected primal-descent step with step size
eta_t and a projected dual-ascent step with step size mu_t, while theta_t
regularizes the dual variable. This module generates those three sequences,
numerically verifies the sufficient conditions (C1-C3) that make the regret
bounds valid, and evaluates the closed-form bounds themselves.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

# Absolute tolerance used when checking the C1/C2 inequalities; the adaptive
# schedules satisfy C2 with near-zero margin at small t.
CONDITION_TOL = 1e-12


class Regime(enum.Enum):
    CONVEX = "convex"
    STRONGLY_CONVEX = "strongly_convex"


@dataclass(frozen=True)
class ProblemConstants:
    """Bounds characterizing a problem instance over the enclosing ball.

    Attributes:
        R: radius of the Euclidean ball enclosing the feasible set.
        G: bound on the (sub-)gradient norms of losses and constraints.
        D: bound on the absolute constraint values over the ball.
        F: bound on the range of each loss over the ball.
        sigma: strong-convexity modulus of the losses (0 for merely convex).
    """

    R: float
    G: float
    D: float
    F: float
    sigma: float = 0.0

    def __post_init__(self):
        if self.R <= 0 or self.G <= 0 or self.D <= 0 or self.F <= 0:
            raise ValueError("R, G, D, F must all be positive")
        if self.sigma < 0:
            raise ValueError("sigma must be nonnegative")


@dataclass(frozen=True)
class ScheduleParams:
    """Adaptive schedule configuration: trade-off exponent beta plus regime."""

    beta: float
    regime: Regime
    constants: ProblemConstants

    def __post_init__(self):
        if not 0.0 < self.beta < 1.0:
            raise ValueError("beta must lie in (0, 1)")
        if self.regime is Regime.STRONGLY_CONVEX and self.constants.sigma <= 0:
            raise ValueError("strongly convex regime requires sigma > 0")


@dataclass(frozen=True)
class FixedScheduleParams:
    """Constant-parameter baseline: fixed eta, theta and mu for all rounds."""

    eta: float
    theta: float
    mu: float

    def __post_init__(self):
        if self.eta <= 0 or self.theta <= 0 or self.mu <= 0:
            raise ValueError("eta, theta, mu must all be positive")


def theta_at(params: ScheduleParams, t):
    """Dual regularizer at round t (t >= 1, scalar or array)."""
    t = np.asarray(t, dtype=float)
    c = params.constants
    if params.regime is Regime.CONVEX:
        return 6.0 * c.R * c.G / t**params.beta
    return 6.0 * c.G**2 / (c.sigma * t**params.beta)


def eta_at(params: ScheduleParams, t):
    """Primal step size at round t."""
    t = np.asarray(t, dtype=float)
    c = params.constants
    if params.regime is Regime.CONVEX:
        return c.R / (c.G * t**params.beta)
    return 1.0 / (c.sigma * t)


def mu_at(params: ScheduleParams, t):
    """Dual step size at round t: 1 / (theta_t * (t + 1)) in both regimes."""
    t = np.asarray(t, dtype=float)
    return 1.0 / (theta_at(params, t) * (t + 1.0))


def schedule_arrays(schedule, T: int):
    """Materialize (theta, eta, mu) for rounds 1..T as float arrays.

    Accepts either adaptive ScheduleParams or a FixedScheduleParams baseline.
    """
    if T < 1:
        raise ValueError("T must be >= 1")
    if isinstance(schedule, FixedScheduleParams):
        ones = np.ones(T)
        return schedule.theta * ones, schedule.eta * ones, schedule.mu * ones
    t = np.arange(1, T + 1, dtype=float)
    return theta_at(schedule, t), eta_at(schedule, t), mu_at(schedule, t)


@dataclass(frozen=True)
class ConditionReport:
    c1_ok: bool
    c2_ok: bool
    c3_slack: float


def check_conditions(theta, eta, mu, sigma: float, G: float, T: int,
                     mu_theta_factor: float = 1.0) -> ConditionReport:
    """Numerically verify the sufficient conditions over rounds 2..T.

    C1: 1/mu_t - 1/mu_{t-1} - theta_t <= 0.
    C2: eta_t G^2 + mu_theta_factor * mu_t theta_t^2 - theta_t / 2 <= 0.
    C3 slack: sum_{t=2}^T [1/eta_t - 1/eta_{t-1} - sigma] (caller compares
    against its U_eta budget).

    mu_theta_factor = 3/2 gives the strengthened C2 used when the constraint
    is shifted upward to eliminate long-term violations.
    """
    theta = np.asarray(theta, dtype=float)
    eta = np.asarray(eta, dtype=float)
    mu = np.asarray(mu, dtype=float)
    if min(theta.size, eta.size, mu.size) < T:
        raise ValueError("sequences must have length >= T")
    th, et, m = theta[:T], eta[:T], mu[:T]
    if np.any(th <= 0) or np.any(et <= 0) or np.any(m <= 0):
        raise ValueError("sequence entries must be positive")

    if T == 1:
        return ConditionReport(c1_ok=True, c2_ok=True, c3_slack=0.0)

    c1 = 1.0 / m[1:] - 1.0 / m[:-1] - th[1:]
    c2 = et[1:] * G**2 + mu_theta_factor * m[1:] * th[1:] ** 2 - 0.5 * th[1:]
    c3_slack = float(np.sum(1.0 / et[1:] - 1.0 / et[:-1] - sigma))
    return ConditionReport(
        c1_ok=bool(np.all(c1 <= CONDITION_TOL)),
        c2_ok=bool(np.all(c2 <= CONDITION_TOL)),
        c3_slack=c3_slack,
    )


def loss_regret_bound(params: ScheduleParams, T) -> float:
    """Closed-form bound on the cumulative loss regret at horizon T.

    Returns [RG + D^2/(6 beta RG)] T^beta + (2RG/(1-beta)) T^(1-beta).
    Stated for the convex regime; for the strongly convex schedules the same
    expression is returned as a conservative bound (the strongly convex
    bounds are tighter but share the leading terms).
    """
    T = np.asarray(T, dtype=float)
    c, b = params.constants, params.beta
    rg = c.R * c.G
    return (rg + c.D**2 / (6.0 * b * rg)) * T**b + 2.0 * rg / (1.0 - b) * T ** (1.0 - b)


def constraint_regret_bound(params: ScheduleParams, T) -> float:
    """Closed-form bound on the cumulative constraint value at horizon T."""
    T = np.asarray(T, dtype=float)
    c, b = params.constants, params.beta
    inner = 24.0 * c.R * c.G / (1.0 - b)
    rf = loss_regret_bound(params, T)
    return np.sqrt(inner * (rf + c.F * T) * T ** (1.0 - b))


@dataclass(frozen=True)
class ScheduleSums:
    """Exact schedule sums together with their closed-form upper bounds."""

    s_theta: float
    s_eta: float
    s_mu: float
    s_theta_bound: float
    s_eta_bound: float
    s_mu_bound: float
    u_eta: float
    delta_mu: float
    delta_eta: float


def schedule_sums(params: ScheduleParams, T: int) -> ScheduleSums:
    """Exact sums of theta, eta, mu over 1..T plus their tabulated bounds.

    delta_mu = 1/mu_1 - theta_1 and delta_eta = 1/eta_1 - sigma are the
    initial-condition terms entering the regret bound.
    """
    if T < 1:
        raise ValueError("T must be >= 1")
    theta, eta, mu = schedule_arrays(params, T)
    c, b = params.constants, params.beta
    tb = float(T) ** b
    t1b = float(T) ** (1.0 - b)

    if params.regime is Regime.CONVEX:
        s_theta_bound = 6.0 * c.R * c.G / (1.0 - b) * t1b
        s_eta_bound = c.R / (c.G * (1.0 - b)) * t1b
        s_mu_bound = tb / (6.0 * b * c.R * c.G)
        u_eta = c.G / c.R * tb
        delta_mu = 6.0 * c.R * c.G
        delta_eta = c.G / c.R
    else:
        s_theta_bound = 6.0 * c.G**2 / (c.sigma * (1.0 - b)) * t1b
        s_eta_bound = (1.0 + np.log(T)) / c.sigma
        s_mu_bound = c.sigma * tb / (6.0 * b * c.G**2)
        u_eta = 0.0
        delta_mu = 6.0 * c.G**2 / c.sigma
        delta_eta = 0.0

    return ScheduleSums(
        s_theta=float(theta.sum()),
        s_eta=float(eta.sum()),
        s_mu=float(mu.sum()),
        s_theta_bound=float(s_theta_bound),
        s_eta_bound=float(s_eta_bound),
        s_mu_bound=float(s_mu_bound),
        u_eta=float(u_eta),
        delta_mu=float(delta_mu),
        delta_eta=float(delta_eta),
    )
