"""Closed-form W2 distances and bounds for affine images of a planar measure.

Scale conventions
-----------------
* ``w2_translation`` and ``composition_upper_bound`` are on the W2 scale.
* ``w2_dilation_sq``, ``rotation_lower_bound_sq`` and ``rotation_mean_term``
  are on the squared scale.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np

from .measures import Moments2


class BoundKind(str, Enum):
    EXACT = "exact"
    LOWER = "lower"
    UPPER = "upper"


@dataclass(frozen=True)
class BoundReport:
    value: float
    kind: BoundKind
    squared: bool
    assumptions: tuple = field(default_factory=tuple)

    def __post_init__(self):
        if not math.isfinite(self.value):
            raise ValueError("bound value must be finite")


class CompositionMode(str, Enum):
    EQUALITY_CASE = "equality_case"
    GENERAL = "general"


def w2_translation(alpha, alpha_prime) -> float:
    """W2(T_alpha X, T_alpha' X) = |alpha - alpha'| for any X."""
    d = np.asarray(alpha, dtype=float) - np.asarray(alpha_prime, dtype=float)
    return float(np.hypot(*d)) if d.size == 2 else float(np.linalg.norm(d))


def w2_dilation_sq(moments: Moments2, lam, lam_prime) -> float:
    """W2(S_lam X, S_lam' X)^2 = sum_i E[X_i^2] (lam_i - lam'_i)^2.

    Exact whenever lam_i and lam'_i share a sign for every i: then
    S_lam' S_lam^{-1} is a positive diagonal map, hence optimal. Mixed signs
    are rejected because the expression is then only an upper bound (a
    symmetric X1 reflected onto itself is at distance 0).
    """
    l1, l2 = (float(v) for v in lam)
    k1, k2 = (float(v) for v in lam_prime)
    if 0.0 in (l1, l2, k1, k2):
        raise ValueError("scaling factors must be nonzero")
    if l1 * k1 < 0 or l2 * k2 < 0:
        raise ValueError("dilation formula is exact only when lam and lam' "
                         "have matching signs componentwise")
    return moments.e1sq * (l1 - k1) ** 2 + moments.e2sq * (l2 - k2) ** 2


def rotation_mean_term(moments: Moments2, theta: float, phi: float = 0.0) -> float:
    """|E[R_theta X] - E[R_phi X]|^2 = 2 |m|^2 (1 - cos(theta - phi))."""
    return 2.0 * (moments.m1 ** 2 + moments.m2 ** 2) * (1.0 - math.cos(theta - phi))


def _rotation_trace_term(a: float, b: float, c: float, delta: float, sign: float = -1.0) -> float:
    """2(a+b) + sign * 2 sqrt(K cos^2 delta + 4(ab - c^2)), K = (a-b)^2 + 4c^2."""
    k = (a - b) ** 2 + 4.0 * c * c
    cd = math.cos(delta)
    inner = max(k * cd * cd + 4.0 * (a * b - c * c), 0.0)
    root = math.sqrt(inner)
    if sign > 0:
        return 2.0 * (a + b) + 2.0 * root
    # (a+b)^2 - inner = K sin^2(delta); this form avoids cancellation near 0
    denom = (a + b) + root
    if denom <= 0.0:
        return 0.0
    sd = math.sin(delta)
    return 2.0 * k * sd * sd / denom


def rotation_lower_bound_sq(moments: Moments2, theta: float, phi: float = 0.0) -> float:
    """Lower bound on W2(R_theta X, R_phi X)^2 from means and covariance.

    2(m1^2 + m2^2)(1 - cos D) + 2(a + b) - 2 sqrt(((a-b)^2 + 4c^2) cos^2 D + 4(ab - c^2)),
    with D = theta - phi. Depends on D only and is never negative.
    """
    delta = theta - phi
    mean_part = 4.0 * (moments.m1 ** 2 + moments.m2 ** 2) * math.sin(0.5 * delta) ** 2
    return mean_part + _rotation_trace_term(moments.a, moments.b, moments.c, delta)


def rotation_lower_bound_report(moments: Moments2, theta: float, phi: float = 0.0) -> BoundReport:
    return BoundReport(rotation_lower_bound_sq(moments, theta, phi), BoundKind.LOWER,
                       squared=True)


def equivalence_constants(moments: Moments2) -> tuple[float, Optional[float]]:
    """Constants with c_low D^2 <= rotation_lower_bound_sq <= c_high D^2 for |D| <= pi/2.

    ``c_high`` is ``None`` when the covariance is singular (ab = c^2).
    """
    msq = moments.m1 ** 2 + moments.m2 ** 2
    a, b, c = moments.a, moments.b, moments.c
    k = (a - b) ** 2 + 4.0 * c * c
    c_low = 8.0 * msq / math.pi ** 2
    if a + b > 0:
        c_low += 4.0 * k / ((4.0 + math.pi ** 2) * (a + b))
    det = a * b - c * c
    c_high = msq + k / math.sqrt(det) if det > 1e-12 else None
    return c_low, c_high


def composition_upper_bound(moments: Moments2, alpha, lam, theta: float,
                            mode: CompositionMode | str = CompositionMode.EQUALITY_CASE) -> float:
    """Upper bound on W2(T_alpha o R_theta o S_lam X, X) (W2 scale, not squared).

    Triangle inequality through S_lam X and R_theta S_lam X:
    |alpha| + sqrt((lam1-1)^2 E[X1^2] + (lam2-1)^2 E[X2^2]) + sqrt(rotation term).

    ``equality_case`` uses the rotation lower bound for S_lam X (valid when the
    caller knows it is attained, e.g. Gaussians); ``general`` flips the sign
    in front of the inner square root, which is an unconditional upper bound.
    """
    mode = CompositionMode(mode)
    l1, l2 = (float(v) for v in lam)
    if l1 <= 0 or l2 <= 0:
        raise ValueError("scaling factors must be positive")
    alpha = np.asarray(alpha, dtype=float)
    t_part = float(np.linalg.norm(alpha))
    s_part = math.sqrt((l1 - 1.0) ** 2 * moments.e1sq + (l2 - 1.0) ** 2 * moments.e2sq)
    sm = moments.scaled((l1, l2))
    mean_part = rotation_mean_term(sm, theta)
    sign = -1.0 if mode is CompositionMode.EQUALITY_CASE else 1.0
    r_sq = mean_part + _rotation_trace_term(sm.a, sm.b, sm.c, theta, sign)
    return t_part + s_part + math.sqrt(max(r_sq, 0.0))
