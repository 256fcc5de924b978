"""Non-Markovianity quantifiers for the QBM, RWA and pure-damping channels.

The punctual measure is the normalized negative weight mu / nu of the
spectrum of the (first-order, eps-rescaled) Z matrix; the eps factor
cancels in the ratio.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Sequence

import numpy as np

from .coeffs import ChannelParams, CoefficientTable, ConfigurationError, RangeError, coefficients_at
from .gchannel import GaussianState, ZSpectrum, channel_map, evolve
from .specfun import expint_ei

PD_ZERO_TOL = 1e-12
RWA_DELTA_TOL = 1e-10


class Channel(str, Enum):
    QBM_EXACT = "qbm_exact"
    QBM_RWA = "qbm_rwa"
    PD = "pd"


@dataclass(frozen=True)
class PunctualNM:
    tau: float
    value: float
    channel: Channel


@dataclass(frozen=True, eq=False)
class WitnessResult:
    tau: np.ndarray
    distance: np.ndarray  # shape (n_pairs, n_tau)
    derivative: np.ndarray  # shape (n_pairs, n_tau)
    witness: np.ndarray


def np_from_spectrum(spectrum: ZSpectrum | Sequence[float]) -> float:
    """mu / nu with mu = sum(|l| - l) / 2 and nu = sum |l|; 0 for an all-zero spectrum."""
    lams = [float(v) for v in spectrum]
    nu = sum(abs(v) for v in lams)
    if nu == 0.0:
        return 0.0
    mu = 0.5 * sum(abs(v) - v for v in lams)
    return mu / nu


def qbm_value(gamma, Delta, Pi):
    """1/2 [1 - Delta / sqrt(Delta^2 + gamma^2 + Pi^2)], vectorized.

    For Delta > 0 the bracket is rewritten as q / (r (r + Delta)) with
    q = gamma^2 + Pi^2, so tiny non-Markovian contributions do not round
    to zero.
    """
    gamma, Delta, Pi = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (gamma, Delta, Pi)))
    # the ratio is scale free; an exact power-of-two rescale keeps subnormals out
    _, e = np.frexp(np.maximum(np.maximum(np.abs(gamma), np.abs(Delta)), np.abs(Pi)))
    gamma, Delta, Pi = (np.ldexp(v, -e) for v in (gamma, Delta, Pi))
    h = np.hypot(gamma, Pi)
    r = np.hypot(Delta, h)  # no underflow for tiny coefficients
    with np.errstate(invalid="ignore", divide="ignore"):
        pos = np.minimum(0.5 * (h / r) * (h / (r + Delta)), 0.5)
        direct = 0.5 * (1.0 - Delta / r)
    out = np.where(Delta > 0, pos, direct)
    return np.where(r == 0.0, 0.0, out)


def rwa_value(gamma, Delta):
    """1/2 [1 - 2 Delta / (|Delta + gamma| + |Delta - gamma|)], vectorized; 0 where both vanish.

    The denominator is 2 max(|Delta|, |gamma|), so the value is exactly 0 or 1
    whenever |Delta| >= |gamma| and 1/2 (1 - Delta/|gamma|) otherwise.
    """
    gamma, Delta = np.broadcast_arrays(np.asarray(gamma, dtype=float), np.asarray(Delta, dtype=float))
    ag = np.abs(gamma)
    with np.errstate(invalid="ignore", divide="ignore", over="ignore"):
        inner = 0.5 * (1.0 - Delta / ag)
    out = np.where(Delta > 0, 0.0, 1.0)
    out = np.where(np.abs(Delta) < ag, inner, out)
    return np.where((Delta == 0.0) & (ag == 0.0), 0.0, out)


def pd_value(gamma, tol: float = PD_ZERO_TOL):
    """1 where gamma < 0, else 0 (|gamma| < tol counts as Markovian)."""
    gamma = np.asarray(gamma, dtype=float)
    return np.where(gamma < -tol, 1.0, 0.0)


_VALUE_FUNCS: dict[Channel, Callable] = {
    Channel.QBM_EXACT: lambda g, d, p: qbm_value(g, d, p),
    Channel.QBM_RWA: lambda g, d, p: rwa_value(g, d),
    Channel.PD: lambda g, d, p: pd_value(g),
}


def punctual_values(table: CoefficientTable, channel: Channel | str, tau=None) -> np.ndarray:
    """Punctual measure of ``channel`` on the table grid, or at given tau."""
    channel = Channel(channel)
    if tau is None:
        g, d, p = table.gamma, table.Delta, table.Pi
    else:
        g, d, p, _ = coefficients_at(table, tau)
    return np.asarray(_VALUE_FUNCS[channel](g, d, p), dtype=float)


def _punctual(table: CoefficientTable, tau: float, channel: Channel) -> PunctualNM:
    value = float(punctual_values(table, channel, tau))
    return PunctualNM(float(tau), value, channel)


def np_qbm_exact(table: CoefficientTable, tau: float) -> PunctualNM:
    return _punctual(table, tau, Channel.QBM_EXACT)


def np_rwa(table: CoefficientTable, tau: float) -> PunctualNM:
    return _punctual(table, tau, Channel.QBM_RWA)


def np_pd(table: CoefficientTable, tau: float) -> PunctualNM:
    return _punctual(table, tau, Channel.PD)


def np_asymptotic(x: float, theta: float) -> float:
    """tau -> infinity punctual measure of the exact QBM channel (Ohmic, high T).

    1/2 - theta pi x / sqrt(4 theta^2 x^2 [(Ei(1/x) - e^{2/x} Ei(-1/x))^2 + pi^2] + pi^2)
    """
    if not (x > 0 and theta > 0):
        raise ValueError("x and theta must be positive")
    a = 1.0 / x
    # e^{2a} Ei(-a) overflows for small x; use e^{-a} scaling throughout
    ei_pos = expint_ei(a).value
    ei_neg = expint_ei(-a).value
    if 2 * a < 700:
        bracket = ei_pos - math.exp(2 * a) * ei_neg
    else:
        raise OverflowError(f"x={x} too small for double precision")
    den = math.sqrt(4 * theta**2 * x**2 * (bracket**2 + math.pi**2) + math.pi**2)
    return 0.5 - theta * math.pi * x / den


def np_asymptotic_from_coeffs(x: float, theta: float, alpha: float = 0.1) -> float:
    """Same limit, through the punctual formula at the asymptotic coefficients."""
    from .coeffs import asymptotic_coeffs

    a = asymptotic_coeffs(ChannelParams(x=x, theta=theta, alpha=alpha, tau_max=1.0, n_grid=2))
    return float(qbm_value(a.gamma, a.Delta, a.Pi))


def _composite_integral(y: np.ndarray, t: np.ndarray) -> float:
    """Composite trapezoid. The indicator f(N_p) is discontinuous, so higher order buys nothing."""
    return float(np.trapezoid(y, t)) if hasattr(np, "trapezoid") else float(np.trapz(y, t))


def np_integrated(
    table: CoefficientTable,
    channel: Channel | str,
    interval: tuple[float, float] | None = None,
) -> float:
    """int N_p / int f(N_p) over ``interval`` (whole table by default)."""
    lo, hi = (0.0, table.tau_max) if interval is None else interval
    if not lo < hi:
        raise RangeError(f"empty interval [{lo}, {hi}]")
    if lo < 0 or hi > table.tau_max * (1 + 1e-12):
        raise RangeError(f"interval [{lo}, {hi}] outside table range [0, {table.tau_max}]")
    inner = table.tau[(table.tau > lo) & (table.tau < hi)]
    t = np.concatenate([[lo], inner, [hi]])
    values = punctual_values(table, channel, t)
    den = _composite_integral((values != 0.0).astype(float), t)
    if den == 0.0:
        return 0.0
    return _composite_integral(values, t) / den


# distances ------------------------------------------------------------------


PURITY_TOL = 1e-12


def _mixedness(V: np.ndarray) -> float:
    """det V - 1, snapped to 0 within rounding of a pure state.

    The fidelity depends on sqrt((det V1 - 1)(det V2 - 1)), which turns
    1e-16 rounding noise in a pure state's determinant into 1e-8 noise in F.
    """
    excess = float(np.linalg.det(V)) - 1.0
    scale = max(1.0, float(np.max(np.abs(V))) ** 2)
    return 0.0 if abs(excess) <= PURITY_TOL * scale else excess


def gaussian_fidelity(s1: GaussianState, s2: GaussianState) -> float:
    """Uhlmann fidelity (Tr |sqrt(rho1) sqrt(rho2)|)^2 of two single-mode Gaussian states.

    Uses V = 2 sigma (vacuum = identity):
    F = 2 / (sqrt(D + d) - sqrt(d)) exp(-u^T (V1 + V2)^-1 u),
    D = det(V1 + V2), d = (det V1 - 1)(det V2 - 1), u = m1 - m2.
    """
    V1, V2 = 2.0 * s1.cov, 2.0 * s2.cov
    u = s1.mean - s2.mean
    S = V1 + V2
    big = np.linalg.det(S)
    small = max(_mixedness(V1) * _mixedness(V2), 0.0)
    pref = 2.0 / (math.sqrt(big + small) - math.sqrt(small))
    return float(min(pref * math.exp(-u @ np.linalg.solve(S, u)), 1.0))


def bures_distance(s1: GaussianState, s2: GaussianState) -> float:
    return math.sqrt(max(2.0 * (1.0 - math.sqrt(gaussian_fidelity(s1, s2))), 0.0))


def sine_distance(s1: GaussianState, s2: GaussianState) -> float:
    return math.sqrt(max(1.0 - gaussian_fidelity(s1, s2), 0.0))


DISTANCES: dict[str, Callable[[GaussianState, GaussianState], float]] = {
    "bures": bures_distance,
    "sine": sine_distance,
}


def distance_witness(
    table: CoefficientTable,
    pairs: Sequence[tuple[GaussianState, GaussianState]],
    tau_grid=None,
    distance: str | Callable = "bures",
) -> WitnessResult:
    """max(0, min over pairs of dD/dtau) along ``tau_grid``.

    Derivatives are central differences on the supplied grid (one-sided
    at the ends); the grid must hold at least two points.
    """
    if len(pairs) == 0:
        raise ConfigurationError("distance witness needs at least one input pair")
    dist = DISTANCES[distance] if isinstance(distance, str) else distance
    t = table.tau if tau_grid is None else np.asarray(tau_grid, dtype=float)
    if t.ndim != 1 or len(t) < 2 or np.any(np.diff(t) <= 0):
        raise ConfigurationError("tau_grid must be strictly increasing with >= 2 points")
    for a, b in pairs:
        a.validate()
        b.validate()
    maps = [channel_map(table, float(tk)) for tk in t]
    D = np.array([[dist(evolve(m, a, validate=False), evolve(m, b, validate=False)) for m in maps] for a, b in pairs])
    dD = np.gradient(D, t, axis=1)
    witness = np.maximum(0.0, dD.min(axis=0))
    return WitnessResult(t, D, dD, witness)


def standard_pairs(d: float = 1.0, r: float = 0.5, nbar: float = 2.0):
    """Coherent pairs along both quadratures, a squeezed pair and a thermal pair."""
    return [
        (GaussianState.coherent(d, 0.0), GaussianState.coherent(-d, 0.0)),
        (GaussianState.coherent(0.0, d), GaussianState.coherent(0.0, -d)),
        (GaussianState.squeezed(r, 0.0), GaussianState.squeezed(r, math.pi)),
        (GaussianState.thermal(0.0), GaussianState.thermal(nbar)),
    ]
