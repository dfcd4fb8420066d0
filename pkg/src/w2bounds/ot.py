"""Exact discrete optimal transport with squared Euclidean cost."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .measures import DiscreteMeasure

BALANCE_TOL = 1e-9


class NumericalError(RuntimeError):
    """A solver failed to reach a certified answer."""


@dataclass(frozen=True)
class TransportPlan:
    """Sparse coupling: ``mass[k]`` moves from source ``rows[k]`` to target ``cols[k]``."""

    rows: np.ndarray
    cols: np.ndarray
    mass: np.ndarray
    n_source: int
    n_target: int

    def dense(self) -> np.ndarray:
        out = np.zeros((self.n_source, self.n_target))
        out[self.rows, self.cols] = self.mass
        return out

    def row_marginal(self) -> np.ndarray:
        return np.bincount(self.rows, weights=self.mass, minlength=self.n_source)

    def col_marginal(self) -> np.ndarray:
        return np.bincount(self.cols, weights=self.mass, minlength=self.n_target)


def cost_matrix(mu: DiscreteMeasure, nu: DiscreteMeasure) -> np.ndarray:
    if mu.dim != nu.dim:
        raise ValueError("measures live in different dimensions")
    return kernels.sqdist_matrix(mu.points, nu.points)


def _balanced(a: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    a = np.array(a, dtype=float)
    b = np.array(b, dtype=float)
    gap = a.sum() - b.sum()
    if abs(gap) > BALANCE_TOL:
        raise ValueError(f"unbalanced marginals (difference {gap:.3g})")
    a /= a.sum()
    b /= b.sum()
    # park the floating-point residue on the heaviest atom
    b[int(np.argmax(b))] += a.sum() - b.sum()
    return a, b


def emd_from_cost(cost: np.ndarray, a, b, max_iter: int | None = None) -> tuple[np.ndarray, float]:
    """Solve the transportation LP for an arbitrary nonnegative cost matrix.

    Returns the dense optimal plan and its cost.
    """
    cost = np.ascontiguousarray(cost, dtype=float)
    if cost.ndim != 2:
        raise ValueError("cost must be a matrix")
    if np.any(cost < 0) or not np.all(np.isfinite(cost)):
        raise ValueError("cost entries must be finite and nonnegative")
    a, b = _balanced(a, b)
    if cost.shape != (a.size, b.size):
        raise ValueError("cost shape does not match the marginals")
    if max_iter is None:
        max_iter = 100 * cost.size + 10_000
    flow, status, _ = kernels.network_simplex(cost, a, b, max_iter)
    if status != kernels.OPTIMAL:
        raise NumericalError(f"network simplex stopped with status {status}")
    return flow, float(np.sum(flow * cost))


def emd(mu: DiscreteMeasure, nu: DiscreteMeasure) -> tuple[TransportPlan, float]:
    """Optimal coupling of ``mu`` and ``nu`` and its cost (= W2^2)."""
    cost = cost_matrix(mu, nu)
    flow, total = emd_from_cost(cost, mu.weights, nu.weights)
    rows, cols = np.nonzero(flow)
    plan = TransportPlan(rows, cols, flow[rows, cols], len(mu), len(nu))
    return plan, total


def emd2(mu: DiscreteMeasure, nu: DiscreteMeasure) -> float:
    return emd(mu, nu)[1]


def w2(mu: DiscreteMeasure, nu: DiscreteMeasure) -> float:
    return math.sqrt(max(emd2(mu, nu), 0.0))
