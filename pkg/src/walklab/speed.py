"""Closed-form escape speeds on trees and free products of two-element
factors, with a bisection solver for the defining root equation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BracketFailure


def tree_speed_closed_form(rho: float) -> float:
    """Speed of the walk on the 3-regular tree with one edge rate rho at
    each vertex and unit rates on the other two:

        (3 rho (rho + 1) + (1 - rho) sqrt(16 rho + 9 rho^2)) / (2 (2 + rho))
    """
    if rho < 0:
        raise ValueError("rho must be nonnegative")
    return (3 * rho * (rho + 1) + (1 - rho) * math.sqrt(16 * rho + 9 * rho * rho)) / (
        2 * (2 + rho)
    )


@dataclass(frozen=True)
class SpeedSolution:
    root: float  # positive root y of the defining equation
    speed: float
    residual: float  # |f(root)|
    alternate_speed: float  # second displayed form, for cross-checking


def _root_equation(rates: np.ndarray, p: int):
    def f(y: float) -> float:
        return float(np.sqrt(y * y + rates * rates).sum() - rates.sum() - (p - 2) * y)

    return f


def free_coxeter_speed(rates, tol: float = 1e-13) -> SpeedSolution:
    """Speed of the walk on the free product of p >= 3 two-element factors
    with generator rates r_1..r_p.

    The positive root y of  sum_i (sqrt(y^2 + r_i^2) - r_i) = (p - 2) y
    is found by bisection; the speed is evaluated through both displayed
    forms, which must agree to 1e-9.
    """
    rates = np.asarray(rates, dtype=float)
    p = len(rates)
    if p < 3:
        raise ValueError("need at least three factors")
    if (rates <= 0).any():
        raise ValueError("rates must be positive")
    f = _root_equation(rates, p)
    lo = 1e-300
    hi = float(rates.sum()) * p
    if f(hi) <= 0:
        raise BracketFailure("no sign change for the root equation")
    if f(lo) >= 0:
        raise BracketFailure("root equation not negative near zero")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if f(mid) > 0:
            hi = mid
        else:
            lo = mid
        if hi - lo <= tol:
            break
    y = 0.5 * (lo + hi)

    sq = np.sqrt(y * y + rates * rates)
    speed = float((rates * (sq - rates)).sum() / y)
    alt = float((rates * y / (sq + rates)).sum())
    if abs(speed - alt) > 1e-9:
        raise BracketFailure("the two speed expressions disagree")
    return SpeedSolution(y, speed, abs(f(y)), alt)


@dataclass
class ProductSpeedReport:
    factor_sum: float
    product_estimate: float
    product_se: float
    within_band: bool


def product_speed_check(
    sigma1: float, sigma2: float, product_mc: float, product_se: float
) -> ProductSpeedReport:
    """On a direct product, the escape speed is the sum of the factor
    speeds; checks an MC estimate of the product speed against sigma1 +
    sigma2 within a 4-standard-error band."""
    target = sigma1 + sigma2
    ok = abs(product_mc - target) <= 4.0 * product_se
    return ProductSpeedReport(target, product_mc, product_se, ok)
