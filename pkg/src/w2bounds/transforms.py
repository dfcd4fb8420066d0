"""Affine maps of the plane: x -> linear @ x + offset."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .symmat import rotation_matrix


@dataclass(frozen=True)
class AffineMap2:
    linear: np.ndarray
    offset: np.ndarray

    def __post_init__(self):
        lin = np.array(self.linear, dtype=float).reshape(2, 2)
        off = np.array(self.offset, dtype=float).reshape(2)
        if not (np.all(np.isfinite(lin)) and np.all(np.isfinite(off))):
            raise ValueError("affine map entries must be finite")
        lin.setflags(write=False)
        off.setflags(write=False)
        object.__setattr__(self, "linear", lin)
        object.__setattr__(self, "offset", off)

    def __call__(self, x) -> np.ndarray:
        """Apply to a single point (2,) or to rows of an (N, 2) array."""
        x = np.asarray(x, dtype=float)
        return x @ self.linear.T + self.offset

    def __matmul__(self, other: "AffineMap2") -> "AffineMap2":
        return compose(self, other)


def identity() -> AffineMap2:
    return AffineMap2(np.eye(2), np.zeros(2))


def translation(alpha) -> AffineMap2:
    return AffineMap2(np.eye(2), alpha)


def scaling(lam) -> AffineMap2:
    lam = np.asarray(lam, dtype=float).reshape(2)
    if np.any(lam == 0):
        raise ValueError("scaling factors must be nonzero")
    return AffineMap2(np.diag(lam), np.zeros(2))


def rotation(theta: float) -> AffineMap2:
    """Counterclockwise rotation about the origin; theta in radians, not wrapped."""
    return AffineMap2(rotation_matrix(theta), np.zeros(2))


def compose(f: AffineMap2, g: AffineMap2) -> AffineMap2:
    """f o g, i.e. x -> f(g(x))."""
    return AffineMap2(f.linear @ g.linear, f.linear @ g.offset + f.offset)


def composition_map(alpha, lam, theta: float) -> AffineMap2:
    """T_alpha o R_theta o S_lambda."""
    return compose(translation(alpha), compose(rotation(theta), scaling(lam)))
