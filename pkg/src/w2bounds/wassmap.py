"""Squared-W2 distance matrices, classical MDS and a circle-fit diagnostic."""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .measures import DiscreteMeasure
from .ot import NumericalError, emd2


@dataclass(frozen=True)
class DistanceMatrix:
    """Symmetric matrix of squared distances with zero diagonal."""

    entries: np.ndarray

    def __post_init__(self):
        d = np.array(self.entries, dtype=float)
        if d.ndim != 2 or d.shape[0] != d.shape[1]:
            raise ValueError("distance matrix must be square")
        if not np.allclose(d, d.T, rtol=0.0, atol=1e-9):
            raise ValueError("distance matrix must be symmetric")
        if np.any(np.abs(np.diag(d)) > 1e-12):
            raise ValueError("distance matrix must have a zero diagonal")
        if np.any(d < 0):
            raise ValueError("squared distances must be nonnegative")
        d.setflags(write=False)
        object.__setattr__(self, "entries", d)

    @property
    def n(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True)
class Embedding:
    coords: np.ndarray          # (n, k)
    eigenvalues: np.ndarray     # retained top-k eigenvalues, descending
    spectrum: np.ndarray        # full spectrum of the centered Gram matrix, descending
    n_negative: int             # eigenvalues below -tol that were clamped


def distance_matrix(measures: Sequence[DiscreteMeasure],
                    metric: Callable[[DiscreteMeasure, DiscreteMeasure], float] = emd2,
                    workers: int = 1) -> DistanceMatrix:
    """D_ij = metric(mu_i, mu_j) (squared W2 by default) over the upper triangle."""
    n = len(measures)
    if n < 2:
        raise ValueError("need at least two measures")
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]

    def solve(ij):
        return metric(measures[ij[0]], measures[ij[1]])

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            values = list(pool.map(solve, pairs))
    else:
        values = [solve(p) for p in pairs]
    d = np.zeros((n, n))
    for (i, j), v in zip(pairs, values):
        d[i, j] = d[j, i] = max(v, 0.0)
    return DistanceMatrix(d)


def mds(d: DistanceMatrix | np.ndarray, k: int = 2) -> Embedding:
    """Classical MDS: top-k eigenpairs of B = -1/2 J D J.

    Negative eigenvalues are expected for non-Euclidean inputs (e.g. rotation
    families); they are clamped to zero and counted. Each column is signed so
    its largest-magnitude entry is nonnegative.
    """
    d = d.entries if isinstance(d, DistanceMatrix) else np.asarray(d, dtype=float)
    n = d.shape[0]
    if not 1 <= k <= n:
        raise ValueError(f"k must lie in [1, {n}]")
    j = np.eye(n) - np.full((n, n), 1.0 / n)
    b = -0.5 * j @ d @ j
    b = 0.5 * (b + b.T)
    try:
        vals, vecs = np.linalg.eigh(b)
    except np.linalg.LinAlgError as exc:
        raise NumericalError("eigendecomposition did not converge") from exc
    order = np.argsort(vals)[::-1]
    vals = vals[order]
    vecs = vecs[:, order]
    tol = 1e-9 * max(1.0, abs(vals[0]))
    n_neg = int(np.sum(vals < -tol))
    top = vecs[:, :k].copy()
    for col in range(k):
        pivot = int(np.argmax(np.abs(top[:, col])))
        if top[pivot, col] < 0:
            top[:, col] *= -1.0
    coords = top * np.sqrt(np.clip(vals[:k], 0.0, None))
    return Embedding(coords, vals[:k].copy(), vals, n_neg)


def circle_fit(points) -> tuple[np.ndarray, float, float]:
    """Algebraic least-squares (Kasa) circle.

    Solves 2 cx x + 2 cy y + c0 = x^2 + y^2 in the least-squares sense.

    Returns
    -------
    center : (2,) array
    radius : float
    rms_relative_residual : float
        RMS of (|p - center| - radius) / radius.
    """
    p = np.asarray(points, dtype=float)
    if p.ndim != 2 or p.shape[1] != 2 or p.shape[0] < 3:
        raise ValueError("need at least three planar points")
    scale = float(np.max(np.abs(p - p.mean(axis=0)))) or 1.0
    q = (p - p.mean(axis=0)) / scale
    design = np.column_stack([2.0 * q[:, 0], 2.0 * q[:, 1], np.ones(len(q))])
    rhs = (q ** 2).sum(axis=1)
    sol, _, rank, sv = np.linalg.lstsq(design, rhs, rcond=None)
    if rank < 3 or sv[-1] < 1e-10 * sv[0]:
        raise NumericalError("points are collinear or coincident; no circle fit")
    cx, cy, c0 = sol
    r2 = c0 + cx * cx + cy * cy
    if r2 <= 0:
        raise NumericalError("degenerate circle fit")
    center = np.array([cx, cy]) * scale + p.mean(axis=0)
    radius = math.sqrt(r2) * scale
    dist = np.hypot(*(p - center).T)
    rms = float(np.sqrt(np.mean((dist - radius) ** 2)) / radius)
    return center, radius, rms
