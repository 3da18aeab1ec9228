# Copyright (c) ddbench contributors. All rights reserved.
#
# This source code is licensed under the BSD license found in the
# LICENSE file in the root directory of this source tree.

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

# continued fraction controls, Numerical Recipes style modified Lentz
_CF_MAX_ITER = 300
_CF_EPS = 3e-16
_CF_FPMIN = 1e-300

# lower band edges for |C_r|; a value on an edge belongs to the upper band
CORRELATION_BANDS = (
    (0.9, "very strong"),
    (0.7, "strong"),
    (0.4, "moderate"),
    (0.2, "weak"),
    (0.0, "very weak"),
)
P_VALUE_DISPLAY_FLOOR = 1e-12
# residual sum of squares, relative to syy, under which the points lie on a line
PERFECT_FIT_RTOL = 1e-12


class DegenerateFitError(ValueError):
    pass


@dataclass(frozen=True)
class FitResult:
    slope: float
    intercept: float
    c_r: float
    p_value: float
    n_points: int

    def __post_init__(self) -> None:
        if not -1.0 <= self.c_r <= 1.0:
            raise ValueError(f"correlation {self.c_r} outside [-1, 1]")
        if not 0.0 <= self.p_value <= 1.0:
            raise ValueError(f"p-value {self.p_value} outside [0, 1]")

    @property
    def strength(self) -> str:
        return correlation_strength(self.c_r)


def _beta_continued_fraction(x: float, a: float, b: float) -> float:
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _CF_FPMIN:
        d = _CF_FPMIN
    d = 1.0 / d
    h = d
    for m in range(1, _CF_MAX_ITER + 1):
        m2 = 2 * m
        # even step
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _CF_FPMIN:
            d = _CF_FPMIN
        c = 1.0 + aa / c
        if abs(c) < _CF_FPMIN:
            c = _CF_FPMIN
        d = 1.0 / d
        h *= d * c
        # odd step
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _CF_FPMIN:
            d = _CF_FPMIN
        c = 1.0 + aa / c
        if abs(c) < _CF_FPMIN:
            c = _CF_FPMIN
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _CF_EPS:
            return h
    raise RuntimeError(f"incomplete beta continued fraction did not converge (a={a}, b={b}, x={x})")


def regularized_incomplete_beta(x: float, a: float, b: float) -> float:
    """I_x(a, b) for a, b > 0 and x in [0, 1]."""
    if a <= 0 or b <= 0:
        raise ValueError(f"a and b must be > 0, got a={a}, b={b}")
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"x must be in [0, 1], got {x}")
    if x == 0.0 or x == 1.0:
        return x
    log_front = (
        math.lgamma(a + b)
        - math.lgamma(a)
        - math.lgamma(b)
        + a * math.log(x)
        + b * math.log1p(-x)
    )
    front = math.exp(log_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _beta_continued_fraction(x, a, b) / a
    return 1.0 - front * _beta_continued_fraction(1.0 - x, b, a) / b


def student_t_two_sided_p(t: float, df: float) -> float:
    if df <= 0:
        raise ValueError(f"degrees of freedom must be > 0, got {df}")
    if math.isinf(t):
        return 0.0
    p = regularized_incomplete_beta(df / (df + t * t), df / 2.0, 0.5)
    return min(1.0, max(0.0, p))


def correlation_strength(c_r: float) -> str:
    magnitude = abs(c_r)
    for edge, label in CORRELATION_BANDS:
        if magnitude >= edge:
            return label
    return CORRELATION_BANDS[-1][1]


def linear_fit(xs: Sequence[float], ys: Sequence[float]) -> FitResult:
    """
    Least-squares line with Pearson correlation and the two-sided p-value of
    the null hypothesis "no correlation" (t-test with n - 2 degrees of freedom).
    """
    x = np.asarray(xs, dtype=np.float64)
    y = np.asarray(ys, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError(f"xs and ys must be equal-length vectors, got {x.shape} and {y.shape}")
    n = len(x)
    if n < 3:
        raise DegenerateFitError(f"a fit needs at least 3 points, got {n}")
    dx = x - x.mean()
    dy = y - y.mean()
    sxx = float(dx @ dx)
    syy = float(dy @ dy)
    sxy = float(dx @ dy)
    if sxx == 0.0:
        raise DegenerateFitError("all x values are equal")
    slope = sxy / sxx
    intercept = float(y.mean() - slope * x.mean())
    if syy == 0.0:
        return FitResult(slope, intercept, 0.0, 1.0, n)
    if syy - slope * sxy <= PERFECT_FIT_RTOL * syy:
        return FitResult(slope, intercept, math.copysign(1.0, sxy), 0.0, n)
    c_r = max(-1.0, min(1.0, sxy / math.sqrt(sxx * syy)))
    if abs(c_r) == 1.0:
        return FitResult(slope, intercept, c_r, 0.0, n)
    df = n - 2
    t = c_r * math.sqrt(df / (1.0 - c_r * c_r))
    return FitResult(slope, intercept, c_r, student_t_two_sided_p(t, df), n)


def format_p_value(p: float) -> float:
    """Display value: p-values below 1e-12 print as 0."""
    return 0.0 if p < P_VALUE_DISPLAY_FLOOR else p
