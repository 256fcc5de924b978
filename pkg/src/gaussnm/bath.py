"""Ohmic-family spectral densities and the high-temperature frequency kernels.

Units: omega_c = hbar = k_B = 1. Frequencies are in units of the cutoff,
times are tau = omega_c t and temperature is theta = k_B T / (hbar omega_c).

The two kernels are the inner frequency integrals of the master-equation
coefficients,

    kernel_sin(u)          = int_0^inf J_s(w) sin(w u) dw
    kernel_cos_thermal(u)  = int_0^inf J_s(w) (2 theta / w) cos(w u) dw

Both have closed forms for every s > 0 through the Laplace transform
int_0^inf w^a e^{-w} e^{i w u} dw = Gamma(a + 1) / (1 - i u)^(a + 1).
Adaptive quadrature is kept as an independent evaluation path.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Literal

import numpy as np
from scipy import integrate
from scipy.special import gamma as gamma_fn

Method = Literal["closed_form", "quadrature"]

# e^{-40} * 40^s is negligible for the exponents of interest
OMEGA_MAX = 40.0
QUAD_TOL = 1e-10


class QuadratureError(RuntimeError):
    """Raised when adaptive quadrature fails to reach its tolerance."""


@dataclass(frozen=True)
class SpectralDensity:
    """J_s(w) = w^s exp(-w), cutoff fixed to 1."""

    s: float = 1.0

    def __post_init__(self):
        if not (self.s > 0 and math.isfinite(self.s)):
            raise ValueError(f"Ohmicity exponent must be positive, got s={self.s}")

    @property
    def cutoff(self) -> float:
        return 1.0

    @property
    def is_ohmic(self) -> bool:
        return self.s == 1.0


@dataclass(frozen=True)
class KernelSample:
    value: float
    method: Method


def j_eval(sd: SpectralDensity, omega):
    """Spectral density w^s e^{-w}. Accepts scalars or arrays."""
    w = np.asarray(omega, dtype=float)
    if np.any(w < 0):
        raise ValueError("spectral density is defined for omega >= 0")
    out = w**sd.s * np.exp(-w)
    return float(out) if out.ndim == 0 else out


def kernel_sin_values(sd: SpectralDensity, u):
    """Vectorized closed form of kernel_sin."""
    u = np.asarray(u, dtype=float)
    if sd.s == 1.0:
        return 2.0 * u / (1.0 + u * u) ** 2
    z = (1.0 - 1j * u) ** (-(sd.s + 1.0))
    return gamma_fn(sd.s + 1.0) * z.imag


def kernel_cos_thermal_values(sd: SpectralDensity, u, theta: float):
    """Vectorized closed form of kernel_cos_thermal."""
    u = np.asarray(u, dtype=float)
    if sd.s == 1.0:
        return 2.0 * theta / (1.0 + u * u)
    z = (1.0 - 1j * u) ** (-sd.s)
    return 2.0 * theta * gamma_fn(sd.s) * z.real


def _quad_fourier(f, u: float, weight: str, power: float = 0.0) -> float:
    """int_0^OMEGA_MAX w^power f(w) trig(w u) dw with trig given by ``weight``.

    The algebraic factor is handled by QAWS on [0, 1] so integrable
    singularities at the origin (power > -1) are fine; QAWO takes the
    oscillatory remainder.
    """
    trig = math.sin if weight == "sin" else math.cos
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            head, _ = integrate.quad(
                lambda w: f(w) * trig(w * u), 0.0, 1.0, weight="alg", wvar=(power, 0.0),
                epsabs=QUAD_TOL, epsrel=1e-12, limit=2000,
            )
            g = lambda w: w**power * f(w)
            if u == 0.0:
                tail, _ = integrate.quad(
                    lambda w: g(w) * trig(0.0), 1.0, OMEGA_MAX,
                    epsabs=QUAD_TOL, epsrel=1e-12, limit=500,
                )
            else:
                tail, _ = integrate.quad(
                    g, 1.0, OMEGA_MAX, weight=weight, wvar=u,
                    epsabs=QUAD_TOL, epsrel=1e-12, limit=2000,
                )
            return head + tail
        except integrate.IntegrationWarning as exc:
            raise QuadratureError(f"kernel quadrature did not converge at u={u}: {exc}") from exc


def kernel_sin(sd: SpectralDensity, u: float, method: Method = "closed_form") -> KernelSample:
    """int_0^inf J_s(w) sin(w u) dw."""
    if u < 0:
        raise ValueError("u must be non-negative")
    if method == "closed_form":
        return KernelSample(float(kernel_sin_values(sd, u)), "closed_form")
    if method != "quadrature":
        raise ValueError(f"unknown method {method!r}")
    value = _quad_fourier(lambda w: math.exp(-w), float(u), "sin", power=sd.s)
    return KernelSample(value, "quadrature")


def kernel_cos_thermal(
    sd: SpectralDensity, u: float, theta: float, method: Method = "closed_form"
) -> KernelSample:
    """int_0^inf J_s(w) (2 theta / w) cos(w u) dw, i.e. the high-T limit of 2N(w)+1."""
    if u < 0:
        raise ValueError("u must be non-negative")
    if not theta > 0:
        raise ValueError("theta must be positive")
    if method == "closed_form":
        return KernelSample(float(kernel_cos_thermal_values(sd, u, theta)), "closed_form")
    if method != "quadrature":
        raise ValueError(f"unknown method {method!r}")
    value = _quad_fourier(lambda w: 2.0 * theta * math.exp(-w), float(u), "cos", power=sd.s - 1.0)
    return KernelSample(value, "quadrature")
