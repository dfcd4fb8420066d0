"""Discrete planar probability measures and their first two moments."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .symmat import SymMat2

WEIGHT_SUM_TOL = 1e-9


@dataclass(frozen=True)
class DiscreteMeasure:
    """Weighted point cloud ``sum_i w_i delta_{x_i}``.

    ``points`` has shape (N, d); everything except the OT solver assumes d = 2.
    """

    points: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        pts = np.ascontiguousarray(self.points, dtype=float)
        w = np.ascontiguousarray(self.weights, dtype=float)
        if pts.ndim != 2 or pts.shape[0] == 0:
            raise ValueError("points must be a nonempty (N, d) array")
        if w.shape != (pts.shape[0],):
            raise ValueError("weights must have one entry per point")
        if np.any(w < 0):
            raise ValueError("weights must be nonnegative")
        if abs(w.sum() - 1.0) > WEIGHT_SUM_TOL:
            raise ValueError(f"weights sum to {w.sum()!r}, expected 1")
        pts.setflags(write=False)
        w.setflags(write=False)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "weights", w)

    def __len__(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]


def from_points(points, weights: Optional[Sequence[float]] = None) -> DiscreteMeasure:
    """Build a measure from coordinates; weights default to uniform and are renormalized."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1 and pts.size:
        pts = pts.reshape(1, -1)
    if pts.ndim != 2 or pts.shape[0] == 0:
        raise ValueError("need at least one point")
    n = pts.shape[0]
    if weights is None:
        w = np.full(n, 1.0 / n)
    else:
        w = np.asarray(weights, dtype=float).ravel()
        if w.shape[0] != n:
            raise ValueError(f"{w.shape[0]} weights for {n} points")
        if np.any(w < 0):
            raise ValueError("negative weight")
        total = w.sum()
        if total <= 0:
            raise ValueError("weights are all zero")
        w = w / total
    return DiscreteMeasure(pts, w)


@dataclass(frozen=True)
class Moments2:
    """Mean, centered covariance and raw second moments of a planar measure.

    ``a``, ``b`` are the component variances and ``c`` the covariance;
    ``e1sq``, ``e2sq`` are E[X1^2], E[X2^2].
    """

    m1: float
    m2: float
    a: float
    b: float
    c: float
    e1sq: float = field(default=None)
    e2sq: float = field(default=None)

    def __post_init__(self):
        if self.e1sq is None:
            object.__setattr__(self, "e1sq", self.a + self.m1 * self.m1)
        if self.e2sq is None:
            object.__setattr__(self, "e2sq", self.b + self.m2 * self.m2)
        if self.a < 0 or self.b < 0:
            raise ValueError("variances must be nonnegative")
        if self.c * self.c > self.a * self.b + 1e-12:
            raise ValueError("covariance violates Cauchy-Schwarz")

    @classmethod
    def from_mean_cov(cls, mean, cov: SymMat2) -> "Moments2":
        return cls(float(mean[0]), float(mean[1]), cov.xx, cov.yy, cov.xy)

    @property
    def mean(self) -> np.ndarray:
        return np.array([self.m1, self.m2])

    @property
    def covariance(self) -> SymMat2:
        return SymMat2(self.a, self.b, self.c)

    def scaled(self, lam) -> "Moments2":
        """Moments of S_lambda X, i.e. of (lam1 X1, lam2 X2)."""
        l1, l2 = float(lam[0]), float(lam[1])
        return Moments2(l1 * self.m1, l2 * self.m2, l1 * l1 * self.a,
                        l2 * l2 * self.b, l1 * l2 * self.c)


def moments(measure: DiscreteMeasure) -> Moments2:
    if measure.dim != 2:
        raise ValueError("moments are defined for planar measures only")
    w = measure.weights
    x = measure.points
    m = w @ x
    d = x - m
    a = float(w @ (d[:, 0] * d[:, 0]))
    b = float(w @ (d[:, 1] * d[:, 1]))
    c = float(w @ (d[:, 0] * d[:, 1]))
    # population covariance; rounding can nudge |c| a hair past sqrt(ab)
    bound = np.sqrt(a * b)
    c = min(max(c, -bound), bound)
    return Moments2(float(m[0]), float(m[1]), a, b, c)


@dataclass(frozen=True)
class Curve:
    """Parametrized planar curve t -> (x1(t), x2(t)) on [t_min, t_max]."""

    t_min: float
    t_max: float
    rule: Callable[[np.ndarray], np.ndarray]
    tag: str = ""

    def __call__(self, t) -> np.ndarray:
        return np.asarray(self.rule(np.asarray(t, dtype=float)), dtype=float)


def discretize_curve(curve: Curve, n: int) -> DiscreteMeasure:
    """Uniform weights on ``n`` equispaced parameter values, endpoints included."""
    if n < 1:
        raise ValueError("n must be at least 1")
    t = np.linspace(curve.t_min, curve.t_max, n)
    pts = curve(t).reshape(n, 2)
    return DiscreteMeasure(pts, np.full(n, 1.0 / n))


def discretize_box(x_range, y_range, k: int) -> DiscreteMeasure:
    """k x k cell-centered lattice of the uniform density on a rectangle."""
    if k < 1:
        raise ValueError("k must be at least 1")
    (x0, x1), (y0, y1) = x_range, y_range
    xs = x0 + (x1 - x0) * (np.arange(k) + 0.5) / k
    ys = y0 + (y1 - y0) * (np.arange(k) + 0.5) / k
    gx, gy = np.meshgrid(xs, ys, indexing="ij")
    pts = np.column_stack([gx.ravel(), gy.ravel()])
    return DiscreteMeasure(pts, np.full(k * k, 1.0 / (k * k)))


def pushforward(measure: DiscreteMeasure, affine) -> DiscreteMeasure:
    """Image measure T#mu: map every atom, keep its weight."""
    return DiscreteMeasure(affine(measure.points), measure.weights)
