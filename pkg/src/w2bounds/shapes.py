"""Synthetic measures: boxes, circle, segment, letters C/A/T and seeded Gaussians.

Letters are curves with a parameter-uniform density, so each stroke carries
mass proportional to its parameter length (not its arc length).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Union

import numpy as np

from .measures import Curve, DiscreteMeasure, Moments2, discretize_box, discretize_curve
from .symmat import SymMat2


class Shape(str, Enum):
    UNIT_SQUARE = "unit-square"
    CENTERED_SQUARE = "centered-square"
    RECTANGLE = "rectangle"
    CIRCLE = "circle"
    SEGMENT = "segment"
    LETTER_C = "letter-c"
    LETTER_A = "letter-a"
    LETTER_T1 = "letter-t1"
    LETTER_T2 = "letter-t2"


@dataclass(frozen=True)
class Gaussian:
    cov: SymMat2
    mean: tuple = (0.0, 0.0)
    seed: int = 0
    trial: int = 0

    def __post_init__(self):
        if not self.cov.is_psd():
            raise ValueError("Gaussian covariance must be positive semidefinite")


ShapeId = Union[Shape, Gaussian]

# Covariances of the three Gaussian experiments: strong, moderate, no correlation.
GAUSSIAN_COVS = (SymMat2(8.0, 4.0, 4.0), SymMat2(8.0, 4.0, 2.0), SymMat2(8.0, 4.0, 0.0))

_BOXES = {
    Shape.UNIT_SQUARE: ((0, 1), (0, 1)),
    Shape.CENTERED_SQUARE: ((Fraction(-1, 2), Fraction(1, 2)), (Fraction(-1, 2), Fraction(1, 2))),
    Shape.RECTANGLE: ((0, 2), (0, 1)),
}

# Piecewise-linear coordinates: list of (right breakpoint, intercept, slope);
# a piece applies for t <= its breakpoint (and > the previous one).
_F = Fraction
_PIECEWISE = {
    Shape.SEGMENT: ((_F(-1, 2), _F(1, 2)),
                    [(_F(1, 2), 0, 1)],
                    [(_F(1, 2), 0, 0)]),
    Shape.LETTER_A: ((0, 6),
                     [(4, 2, -1), (6, -5, 1)],
                     [(2, -1, 1), (4, 3, -1), (6, 0, 0)]),
    Shape.LETTER_T1: ((0, 4),
                      [(2, 1, -1), (4, 0, 0)],
                      [(2, _F(1, 2), 0), (4, _F(-7, 2), 1)]),
    Shape.LETTER_T2: ((0, 4),
                      [(2, 1, -1), (4, 0, 0)],
                      [(2, 1, 0), (4, -3, 1)]),
}


def _eval_piecewise(pieces, t: np.ndarray) -> np.ndarray:
    breaks = np.array([float(p[0]) for p in pieces])
    idx = np.minimum(np.searchsorted(breaks, t, side="left"), len(pieces) - 1)
    icpt = np.array([float(p[1]) for p in pieces])[idx]
    slope = np.array([float(p[2]) for p in pieces])[idx]
    return icpt + slope * t


def _piecewise_curve(shape: Shape) -> Curve:
    (t0, t1), px, py = _PIECEWISE[shape]

    def rule(t):
        return np.column_stack([_eval_piecewise(px, t), _eval_piecewise(py, t)])

    return Curve(float(t0), float(t1), rule, shape.value)


def _circle_rule(t):
    return np.column_stack([np.cos(t), np.sin(t)])


def _letter_c_rule(t):
    return np.column_stack([np.cos(t) + 2.0 / math.pi, np.sin(t)])


def curve_for(shape: Shape) -> Curve:
    shape = Shape(shape)
    if shape in _PIECEWISE:
        return _piecewise_curve(shape)
    if shape is Shape.CIRCLE:
        return Curve(0.0, 2.0 * math.pi, _circle_rule, shape.value)
    if shape is Shape.LETTER_C:
        return Curve(0.5 * math.pi, 1.5 * math.pi, _letter_c_rule, shape.value)
    raise ValueError(f"{shape.value} is a region, not a curve")


def is_region(shape: ShapeId) -> bool:
    return isinstance(shape, Shape) and shape in _BOXES


def make_shape(shape: ShapeId, n: int) -> DiscreteMeasure:
    """Discretize a shape with ``n`` atoms (regions need n = k^2)."""
    if n < 1:
        raise ValueError("n must be at least 1")
    if isinstance(shape, Gaussian):
        return DiscreteMeasure(sample_gaussian(shape, n), np.full(n, 1.0 / n))
    shape = Shape(shape)
    if shape in _BOXES:
        k = math.isqrt(n)
        if k * k != n:
            raise ValueError(f"region shapes need a perfect-square n, got {n}")
        (x0, x1), (y0, y1) = _BOXES[shape]
        return discretize_box((float(x0), float(x1)), (float(y0), float(y1)), k)
    return discretize_curve(curve_for(shape), n)


def _poly_integral(p1, q1, p2, q2, u, v):
    """Exact integral of (p1 + q1 t)(p2 + q2 t) over [u, v]."""
    return (p1 * p2 * (v - u) + (p1 * q2 + p2 * q1) * (v * v - u * u) / 2
            + q1 * q2 * (v ** 3 - u ** 3) / 3)


def _piece_at(pieces, lo, hi):
    for right, icpt, slope in pieces:
        if hi <= right:
            return Fraction(icpt), Fraction(slope)
    raise ValueError("interval outside the parametrization")


def exact_moment_table(shape: Shape) -> dict[str, Fraction]:
    """Moments with rational values, computed by exact integration.

    Keys: m1, m2, a, b, c, e1sq, e2sq. Not available for the circle-based
    letter C, whose moments involve pi.
    """
    shape = Shape(shape)
    if shape in _BOXES:
        (x0, x1), (y0, y1) = (tuple(map(Fraction, r)) for r in _BOXES[shape])
        m1, m2 = (x0 + x1) / 2, (y0 + y1) / 2
        a, b = (x1 - x0) ** 2 / 12, (y1 - y0) ** 2 / 12
        c = Fraction(0)
    elif shape is Shape.CIRCLE:
        m1 = m2 = c = Fraction(0)
        a = b = Fraction(1, 2)
    elif shape in _PIECEWISE:
        (t0, t1), px, py = _PIECEWISE[shape]
        t0, t1 = Fraction(t0), Fraction(t1)
        cuts = sorted({t0, t1} | {Fraction(p[0]) for p in px} | {Fraction(p[0]) for p in py})
        length = t1 - t0
        s1 = s2 = s11 = s22 = s12 = Fraction(0)
        for u, v in zip(cuts[:-1], cuts[1:]):
            a1, b1 = _piece_at(px, u, v)
            a2, b2 = _piece_at(py, u, v)
            s1 += _poly_integral(a1, b1, 1, 0, u, v)
            s2 += _poly_integral(a2, b2, 1, 0, u, v)
            s11 += _poly_integral(a1, b1, a1, b1, u, v)
            s22 += _poly_integral(a2, b2, a2, b2, u, v)
            s12 += _poly_integral(a1, b1, a2, b2, u, v)
        m1, m2 = s1 / length, s2 / length
        a = s11 / length - m1 * m1
        b = s22 / length - m2 * m2
        c = s12 / length - m1 * m2
    else:
        raise ValueError(f"no rational moment table for {shape.value}")
    return {"m1": m1, "m2": m2, "a": a, "b": b, "c": c,
            "e1sq": a + m1 * m1, "e2sq": b + m2 * m2}


def analytic_moments(shape: ShapeId) -> Moments2:
    """Closed-form moments of the continuous shape (Gaussian: its parameters)."""
    if isinstance(shape, Gaussian):
        return Moments2.from_mean_cov(shape.mean, shape.cov)
    shape = Shape(shape)
    if shape is Shape.LETTER_C:
        # semicircle t in [pi/2, 3pi/2] shifted by 2/pi: E[X1^2] = 1/2 - 4/pi^2
        return Moments2(0.0, 0.0, 0.5 - 4.0 / math.pi ** 2, 0.5, 0.0)
    t = exact_moment_table(shape)
    return Moments2(float(t["m1"]), float(t["m2"]), float(t["a"]), float(t["b"]), float(t["c"]))


def project_psd(m: SymMat2) -> SymMat2:
    """Nearest PSD matrix (Frobenius) by clamping negative eigenvalues to 0."""
    if m.eigvals()[0] >= 0.0:
        return m
    w, v = np.linalg.eigh(m.as_array())
    w = np.clip(w, 0.0, None)
    return SymMat2.from_array((v * w) @ v.T)


def cholesky_2x2(cov: SymMat2) -> np.ndarray:
    """Lower-triangular L with L L^T = cov (PSD allowed)."""
    a = max(cov.xx, 0.0)
    if a > 0.0:
        l11 = math.sqrt(a)
        l21 = cov.xy / l11
        l22 = math.sqrt(max(cov.yy - l21 * l21, 0.0))
    else:
        l11 = l21 = 0.0
        l22 = math.sqrt(max(cov.yy, 0.0))
    return np.array([[l11, 0.0], [l21, l22]])


def standard_normal_pairs(n: int, seed: int, trial: int = 0) -> np.ndarray:
    """(n, 2) standard normals via Box-Muller on Philox(seed, trial) uniforms."""
    key = np.array([seed & 0xFFFFFFFFFFFFFFFF, trial & 0xFFFFFFFFFFFFFFFF], dtype=np.uint64)
    rng = np.random.Generator(np.random.Philox(key=key))
    u = rng.random((2, n))
    r = np.sqrt(-2.0 * np.log1p(-u[0]))  # 1 - u in (0, 1]
    phase = 2.0 * math.pi * u[1]
    return np.column_stack([r * np.cos(phase), r * np.sin(phase)])


def sample_gaussian(spec: Gaussian, n: int) -> np.ndarray:
    z = standard_normal_pairs(n, spec.seed, spec.trial)
    return z @ cholesky_2x2(spec.cov).T + np.asarray(spec.mean, dtype=float)
