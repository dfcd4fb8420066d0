"""Closed-form linear algebra for 2x2 symmetric positive semidefinite matrices.

General (possibly nonsymmetric) 2x2 matrices are plain ``(2, 2)`` numpy arrays.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

PSD_TOL = 1e-12


@dataclass(frozen=True)
class SymMat2:
    """[[xx, xy], [xy, yy]]"""

    xx: float
    yy: float
    xy: float = 0.0

    @classmethod
    def from_array(cls, m) -> "SymMat2":
        m = np.asarray(m, dtype=float)
        if m.shape != (2, 2):
            raise ValueError("expected a 2x2 matrix")
        return cls(float(m[0, 0]), float(m[1, 1]), 0.5 * float(m[0, 1] + m[1, 0]))

    @classmethod
    def identity(cls, scale: float = 1.0) -> "SymMat2":
        return cls(scale, scale, 0.0)

    def as_array(self) -> np.ndarray:
        return np.array([[self.xx, self.xy], [self.xy, self.yy]])

    @property
    def trace(self) -> float:
        return self.xx + self.yy

    @property
    def det(self) -> float:
        return self.xx * self.yy - self.xy * self.xy

    def eigvals(self) -> tuple[float, float]:
        """(smallest, largest) eigenvalue, closed form."""
        half = 0.5 * (self.xx + self.yy)
        r = math.hypot(0.5 * (self.xx - self.yy), self.xy)
        return half - r, half + r

    def is_psd(self, tol: float = PSD_TOL) -> bool:
        return self.eigvals()[0] >= -tol

    def rotated(self, theta: float) -> "SymMat2":
        """R_theta M R_theta^T"""
        r = rotation_matrix(theta)
        return SymMat2.from_array(r @ self.as_array() @ r.T)


def rotation_matrix(theta: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]])


def _check_psd(*mats: SymMat2) -> None:
    for m in mats:
        if not m.is_psd():
            raise ValueError(f"matrix is not positive semidefinite: {m}")


def _sqrt_det(det: float) -> float:
    # PSD determinants can round slightly below zero
    if -PSD_TOL <= det < 0.0:
        det = 0.0
    return math.sqrt(det)


def sqrt_psd(m: SymMat2) -> SymMat2:
    """Principal square root via (M + sqrt(det M) I) / sqrt(tr M + 2 sqrt(det M))."""
    _check_psd(m)
    s = _sqrt_det(m.det)
    t2 = m.trace + 2.0 * s
    if t2 <= 1e-15:
        return SymMat2(0.0, 0.0, 0.0)
    t = math.sqrt(t2)
    return SymMat2((m.xx + s) / t, (m.yy + s) / t, m.xy / t)


def sqrt_2x2(m) -> np.ndarray:
    """Square root of a general 2x2 matrix with real nonnegative spectrum.

    Same closed form as :func:`sqrt_psd`; used for products of two PSD
    matrices, which are similar to a PSD matrix.
    """
    m = np.asarray(m, dtype=float)
    det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    s = _sqrt_det(det)
    t2 = m[0, 0] + m[1, 1] + 2.0 * s
    if t2 <= 1e-15:
        return np.zeros((2, 2))
    return (m + s * np.eye(2)) / math.sqrt(t2)


def trace_sqrt_product(p: SymMat2, q: SymMat2) -> float:
    """tr[(PQ)^{1/2}] = sqrt(tr(PQ) + 2 sqrt(det P det Q))."""
    _check_psd(p, q)
    tr_pq = p.xx * q.xx + 2.0 * p.xy * q.xy + p.yy * q.yy
    dp = max(p.det, 0.0)
    dq = max(q.det, 0.0)
    return math.sqrt(max(tr_pq + 2.0 * math.sqrt(dp * dq), 0.0))


def bures_sq(p: SymMat2, q: SymMat2) -> float:
    """Squared Bures distance tr[P + Q - 2 (PQ)^{1/2}], clipped at 0."""
    val = p.trace + q.trace - 2.0 * trace_sqrt_product(p, q)
    return max(val, 0.0)


def optimal_map(sigma_x: SymMat2, sigma_y: SymMat2) -> np.ndarray:
    """Linear map T = Sigma_X^{-1} (Sigma_X Sigma_Y)^{1/2} pushing cov X to cov Y.

    For zero-mean X, ``E|TX - X|^2`` equals the squared Bures distance.
    """
    _check_psd(sigma_x, sigma_y)
    det_x = sigma_x.det
    if det_x <= PSD_TOL:
        raise ValueError("sigma_x is singular")
    sx = sigma_x.as_array()
    root = sqrt_2x2(sx @ sigma_y.as_array())
    inv = np.array([[sigma_x.yy, -sigma_x.xy], [-sigma_x.xy, sigma_x.xx]]) / det_x
    return inv @ root
