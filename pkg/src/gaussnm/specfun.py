"""Real-argument exponential and hyperbolic integrals.

Ei(z), Shi(z) and Chi(z) evaluated in double precision with an attached
absolute error estimate. Small arguments use the power series; large
arguments use the continued fraction for E1 and the asymptotic series
for Ei.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

EULER_GAMMA = 0.57721566490153286061
_EPS = 2.220446049250313e-16
# exp() overflows just above this
_MAX_ARG = 709.0
_SERIES_MAX = 8.0
# positive-argument Ei keeps the (non-alternating) series up to here
_EI_SERIES_MAX = 40.0


@dataclass(frozen=True)
class SpecFunResult:
    value: float
    est_abs_error: float

    def __float__(self) -> float:
        return self.value


def _series_ei_tail(z: float) -> tuple[float, float]:
    """Sum of z^k / (k k!) for k >= 1, with the sum of |terms|."""
    term = 1.0
    total = 0.0
    abs_total = 0.0
    k = 0
    while True:
        k += 1
        term *= z / k
        contrib = term / k
        total += contrib
        abs_total += abs(contrib)
        if abs(contrib) <= _EPS * abs(total) * 0.25 or k > 500:
            break
    return total, abs_total * _EPS * (k + 2)


def _e1_contfrac(x: float) -> tuple[float, float]:
    """E1(x) for x > 1 by the modified Lentz continued fraction."""
    tiny = 1e-300
    b = x + 1.0
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    n = 0
    for n in range(1, 500):
        a = -float(n * n)
        b += 2.0
        d = 1.0 / (a * d + b)
        c = b + a / c
        delta = c * d
        h *= delta
        if abs(delta - 1.0) <= _EPS:
            break
    value = h * math.exp(-x)
    return value, abs(value) * _EPS * (8 + n // 4)


def _e1(x: float) -> tuple[float, float]:
    if x <= 1.0:
        tail, err = _series_ei_tail(-x)
        value = -EULER_GAMMA - math.log(x) - tail
        return value, err + _EPS * (abs(math.log(x)) + 1.0)
    return _e1_contfrac(x)


def _ei_positive(x: float) -> tuple[float, float]:
    if x <= _EI_SERIES_MAX:
        tail, err = _series_ei_tail(x)
        value = EULER_GAMMA + math.log(x) + tail
        return value, err + _EPS * (abs(math.log(x)) + 1.0)
    # asymptotic: e^x/x * sum k!/x^k, truncated before the terms start growing
    term = 1.0
    total = 1.0
    k = 0
    while True:
        k += 1
        prev = term
        term *= k / x
        if term >= prev or term < _EPS * total:
            break
        total += term
    value = math.exp(x) / x * total
    return value, abs(value) * _EPS * (k + 4)


def expint_ei(z: float) -> SpecFunResult:
    """Exponential integral Ei(z) (principal value for z > 0)."""
    z = float(z)
    if z == 0.0:
        raise ValueError("Ei(z) has a logarithmic singularity at z = 0")
    if not math.isfinite(z) or z > _MAX_ARG:
        raise OverflowError(f"Ei({z}) overflows double precision")
    if z > 0.0:
        value, err = _ei_positive(z)
    else:
        e1, err = _e1(-z)
        value = -e1
    return SpecFunResult(value, err)


def shi(z: float) -> SpecFunResult:
    """Hyperbolic sine integral, Shi(z) = int_0^z sinh(t)/t dt."""
    z = float(z)
    if not math.isfinite(z) or abs(z) > _MAX_ARG:
        raise OverflowError(f"Shi({z}) overflows double precision")
    a = abs(z)
    if a == 0.0:
        return SpecFunResult(0.0, 0.0)
    if a <= _SERIES_MAX:
        # sum z^(2k+1) / ((2k+1) (2k+1)!)
        term = a
        total = a
        abs_total = a
        k = 0
        while True:
            k += 1
            n = 2 * k + 1
            term *= a * a / ((n - 1) * n)
            contrib = term / n
            total += contrib
            abs_total += contrib
            if contrib <= _EPS * total * 0.25:
                break
        value, err = total, abs_total * _EPS * (k + 2)
    else:
        ei, e_ei = _ei_positive(a)
        e1, e_e1 = _e1(a)
        value, err = 0.5 * (ei + e1), 0.5 * (e_ei + e_e1) + _EPS * abs(ei)
    return SpecFunResult(math.copysign(value, z), err)


def chi(z: float) -> SpecFunResult:
    """Hyperbolic cosine integral, Chi(z) = gamma + ln z + int_0^z (cosh t - 1)/t dt."""
    z = float(z)
    if z <= 0.0:
        raise ValueError("Chi(z) is defined here only for z > 0")
    if not math.isfinite(z) or z > _MAX_ARG:
        raise OverflowError(f"Chi({z}) overflows double precision")
    if z <= _SERIES_MAX:
        term = 1.0
        total = 0.0
        abs_total = 0.0
        k = 0
        while True:
            k += 1
            n = 2 * k
            term *= z * z / ((n - 1) * n)
            contrib = term / n
            total += contrib
            abs_total += contrib
            if contrib <= _EPS * max(total, 1e-300) * 0.25:
                break
        log_part = EULER_GAMMA + math.log(z)
        value = log_part + total
        err = abs_total * _EPS * (k + 2) + _EPS * (abs(log_part) + abs(value))
    else:
        ei, e_ei = _ei_positive(z)
        e1, e_e1 = _e1(z)
        value, err = 0.5 * (ei - e1), 0.5 * (e_ei + e_e1) + _EPS * abs(ei)
    return SpecFunResult(value, err)


def sin_laplace_integral(a: float) -> SpecFunResult:
    """int_0^inf sin(a u) / (1 + u^2) du for a > 0.

    Equal to Shi(a) cosh(a) - Chi(a) sinh(a) = (e^-a Ei(a) - e^a Ei(-a)) / 2.
    The second form is used because the first cancels catastrophically
    for large a.
    """
    a = float(a)
    if a <= 0.0:
        raise ValueError("a must be positive")
    if a > _MAX_ARG / 2:
        raise OverflowError(f"argument {a} too large")
    ei, e_ei = _ei_positive(a)
    e1, e_e1 = _e1(a)
    ema = math.exp(-a)
    epa = math.exp(a)
    value = 0.5 * (ema * ei + epa * e1)
    err = 0.5 * (ema * e_ei + epa * e_e1) + 2 * _EPS * abs(value)
    return SpecFunResult(value, err)
