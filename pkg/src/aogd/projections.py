"""Euclidean projections and max-aggregation of constraint components.

During online rounds the iterate is only ever projected onto the enclosing
ball (never onto the feasible set itself); the dual variable is projected
onto the nonnegative reals. The m individual constraints are aggregated into
a single function g(x) = max_j g_j(x) whose subgradient is taken from an
active component.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np


@dataclass(frozen=True)
class Constraint:
    """One convex constraint component: value and a subgradient at x."""

    value: Callable[[np.ndarray], float]
    subgradient: Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class ConstraintSet:
    """Ordered collection of constraint components g_j."""

    components: Sequence[Constraint]

    def __post_init__(self):
        if len(self.components) < 1:
            raise ValueError("constraint set needs at least one component")

    def __len__(self):
        return len(self.components)


def project_ball(x: np.ndarray, R: float) -> np.ndarray:
    """Project x onto the Euclidean ball of radius R."""
    if R <= 0:
        raise ValueError("R must be positive")
    norm = float(np.linalg.norm(x))
    if norm <= R:
        return x
    return x * (R / norm)


def project_nonneg(lam: float) -> float:
    """Project a scalar onto the nonnegative reals."""
    return max(0.0, lam)


def g_max(cs: ConstraintSet, x: np.ndarray):
    """Aggregate constraint value max_j g_j(x).

    Returns (value, active_index); ties break to the smallest index so runs
    replay deterministically.
    """
    values = np.array([c.value(x) for c in cs.components], dtype=float)
    if not np.all(np.isfinite(values)):
        bad = int(np.flatnonzero(~np.isfinite(values))[0])
        raise FloatingPointError(f"constraint component {bad} is non-finite at x")
    idx = int(np.argmax(values))  # argmax returns the first maximizer
    return float(values[idx]), idx


def g_subgradient(cs: ConstraintSet, x: np.ndarray) -> np.ndarray:
    """Subgradient of g = max_j g_j at x, taken from the active component."""
    _, idx = g_max(cs, x)
    return np.asarray(cs.components[idx].subgradient(x), dtype=float)
