"""Master-equation coefficients gamma, Delta, Pi and the cumulative damping Gamma.

All three coefficients are time integrals of a closed-form kernel,

    gamma(tau) = alpha^2 int_0^tau kernel_sin(u) sin(u/x) du
    Delta(tau) = alpha^2 int_0^tau kernel_cos_thermal(u) cos(u/x) du
    Pi(tau)    = alpha^2 int_0^tau kernel_cos_thermal(u) sin(u/x) du

with omega_0 = 1/x in cutoff units. The table accumulates them cell by
cell on a uniform tau grid with a Gauss-Legendre rule per cell. Values at
an arbitrary tau are completed from the nearest grid point below with the
same rule, so off-grid evaluation carries no interpolation error.

The table also carries the rotating-frame accumulator of the W-bar
integral (see ``gchannel.wbar``), because it needs every coefficient on
the same grid.
"""

from __future__ import annotations

import csv
import logging
import math
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .bath import SpectralDensity, kernel_cos_thermal_values, kernel_sin_values
from .specfun import sin_laplace_integral

log = logging.getLogger(__name__)

GL_ORDER = 8
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(GL_ORDER)
# map to [0, 1]
_GL_NODES = 0.5 * (_GL_NODES + 1.0)
_GL_WEIGHTS = 0.5 * _GL_WEIGHTS

MIN_POINTS_PER_PERIOD = 20
DEFAULT_POINTS_PER_PERIOD = 40
TABLE_CSV_HEADER = ("tau", "gamma", "Delta", "Pi", "Gamma")


class ConfigurationError(ValueError):
    """Invalid or under-resolved simulation parameters."""


class RangeError(ValueError):
    """Time argument outside the tabulated range."""


def grid_size(x: float, tau_max: float, points_per_period: int = DEFAULT_POINTS_PER_PERIOD) -> int:
    """Smallest uniform grid over [0, tau_max] with the requested resolution of 2 pi x."""
    cells = math.ceil(tau_max * points_per_period / (2.0 * math.pi * x))
    return max(cells, 1) + 1


@dataclass(frozen=True)
class ChannelParams:
    """Dimensionless simulation parameters.

    ``n_grid=None`` picks a grid with 40 points per system period.
    """

    x: float
    theta: float = 100.0
    alpha: float = 0.1
    sd: SpectralDensity = field(default_factory=SpectralDensity)
    tau_max: float = 50.0
    n_grid: int | None = None

    def __post_init__(self):
        for name in ("x", "theta", "alpha", "tau_max"):
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
                raise ConfigurationError(f"{name} must be a positive finite number, got {value!r}")
        if self.x < 0.05:
            raise ConfigurationError(f"x={self.x} is below the supported range (x >= 0.05)")
        if self.x < 0.1:
            warnings.warn(
                f"x={self.x} < 0.1: the high-temperature expansion is not reliable here",
                stacklevel=3,
            )
        if self.n_grid is None:
            object.__setattr__(self, "n_grid", grid_size(self.x, self.tau_max))
        if not isinstance(self.n_grid, (int, np.integer)) or self.n_grid < 2:
            raise ConfigurationError(f"n_grid must be an integer >= 2, got {self.n_grid!r}")
        object.__setattr__(self, "n_grid", int(self.n_grid))

    @property
    def omega0(self) -> float:
        return 1.0 / self.x

    @property
    def step(self) -> float:
        return self.tau_max / (self.n_grid - 1)

    @property
    def points_per_period(self) -> float:
        return 2.0 * math.pi * self.x / self.step


@dataclass(frozen=True)
class AsymptoticCoefficients:
    gamma: float
    Delta: float
    Pi: float


@dataclass(frozen=True, eq=False)
class CoefficientTable:
    tau: np.ndarray
    gamma: np.ndarray
    Delta: np.ndarray
    Pi: np.ndarray
    Gamma: np.ndarray
    params: ChannelParams
    # e^{-Gamma(tau)} int_0^tau e^{Gamma(s)} R^T(s) M(s) R(s) ds, shape (n, 2, 2)
    wbar_rot: np.ndarray = field(repr=False)

    def __post_init__(self):
        for name in ("tau", "gamma", "Delta", "Pi", "Gamma", "wbar_rot"):
            getattr(self, name).flags.writeable = False

    def __len__(self) -> int:
        return len(self.tau)

    @property
    def tau_max(self) -> float:
        return float(self.tau[-1])

    def at(self, tau):
        """(gamma, Delta, Pi, Gamma) at arbitrary tau in range."""
        return coefficients_at(self, tau)

    def to_csv(self, path) -> None:
        """Dump the sampled coefficients with header tau,gamma,Delta,Pi,Gamma."""
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(TABLE_CSV_HEADER)
            for row in zip(self.tau, self.gamma, self.Delta, self.Pi, self.Gamma):
                writer.writerow([repr(float(v)) for v in row])


def rates(params: ChannelParams, u):
    """Integrands d/dtau of (gamma, Delta, Pi), stacked on the first axis."""
    u = np.asarray(u, dtype=float)
    a2 = params.alpha**2
    ks = kernel_sin_values(params.sd, u)
    kc = kernel_cos_thermal_values(params.sd, u, params.theta)
    phase = u / params.x
    s, c = np.sin(phase), np.cos(phase)
    return np.stack([a2 * ks * s, a2 * kc * c, a2 * kc * s])


def _partial(params: ChannelParams, start, stop):
    """Increments of (gamma, Delta, Pi) and of the damping moment over [start, stop].

    Returns ``(d_coeffs, d_moment)`` where d_coeffs has shape (3, ...) and
    d_moment = int_start^stop (stop - u) gamma'(u) du, which is what the
    Gamma increment needs on top of gamma(start) (stop - start).
    """
    start = np.asarray(start, dtype=float)
    stop = np.asarray(stop, dtype=float)
    h = stop - start
    nodes = start[..., None] + h[..., None] * _GL_NODES
    r = rates(params, nodes)
    d_coeffs = np.einsum("c...m,m->c...", r, _GL_WEIGHTS) * h
    d_moment = np.einsum("...m,m->...", r[0] * (stop[..., None] - nodes), _GL_WEIGHTS) * h
    return d_coeffs, d_moment


def _check_range(table: CoefficientTable, tau) -> np.ndarray:
    tau = np.asarray(tau, dtype=float)
    slack = 1e-12 * max(table.tau_max, 1.0)
    if np.any(tau < -slack) or np.any(tau > table.tau_max + slack):
        raise RangeError(
            f"tau outside the tabulated range [0, {table.tau_max}]: "
            f"min={float(np.min(tau))}, max={float(np.max(tau))}"
        )
    return np.clip(tau, 0.0, table.tau_max)


def _cell_index(table: CoefficientTable, tau: np.ndarray) -> np.ndarray:
    k = np.searchsorted(table.tau, tau, side="right") - 1
    return np.clip(k, 0, len(table.tau) - 2)


def coefficients_at(table: CoefficientTable, tau):
    """Exact (gamma, Delta, Pi, Gamma) at arbitrary tau, each shaped like tau."""
    tau = _check_range(table, tau)
    k = _cell_index(table, tau)
    t0 = table.tau[k]
    d, moment = _partial(table.params, t0, tau)
    g0 = table.gamma[k]
    gamma = g0 + d[0]
    Delta = table.Delta[k] + d[1]
    Pi = table.Pi[k] + d[2]
    Gamma = table.Gamma[k] + 2.0 * (g0 * (tau - t0) + moment)
    return gamma, Delta, Pi, Gamma


def rotating_integrand(x: float, s, Delta, Pi, weight):
    """weight * R^T(s) M(s) R(s) with M = [[Delta, -Pi/2], [-Pi/2, 0]].

    Written out in closed form; the result is symmetric because M is.
    """
    phi = np.asarray(s) / x
    c, sn = np.cos(phi), np.sin(phi)
    # R = [[c, sn], [-sn, c]]
    m11 = Delta * c * c + Pi * c * sn
    m22 = Delta * sn * sn - Pi * c * sn
    m12 = Delta * c * sn - 0.5 * Pi * (c * c - sn * sn)
    out = np.empty(np.shape(m11) + (2, 2))
    out[..., 0, 0] = weight * m11
    out[..., 1, 1] = weight * m22
    out[..., 0, 1] = out[..., 1, 0] = weight * m12
    return out


def _wbar_increment(table: CoefficientTable, start, stop, Gamma_stop):
    """int_start^stop e^{Gamma(s) - Gamma(stop)} R^T M R ds for arrays of intervals."""
    start = np.asarray(start, dtype=float)
    stop = np.asarray(stop, dtype=float)
    h = stop - start
    nodes = start[..., None] + h[..., None] * _GL_NODES
    _, Delta, Pi, Gamma = coefficients_at(table, nodes)
    weight = np.exp(Gamma - np.asarray(Gamma_stop)[..., None])
    vals = rotating_integrand(table.params.x, nodes, Delta, Pi, weight)
    return np.einsum("...mij,m->...ij", vals, _GL_WEIGHTS) * h[..., None, None]


def build_table(params: ChannelParams) -> CoefficientTable:
    """Tabulate gamma, Delta, Pi, Gamma and the W-bar accumulator on [0, tau_max]."""
    if params.points_per_period < MIN_POINTS_PER_PERIOD:
        raise ConfigurationError(
            f"grid too coarse: {params.points_per_period:.1f} points per period 2*pi*x "
            f"(need >= {MIN_POINTS_PER_PERIOD}); increase n_grid"
        )
    tau = np.linspace(0.0, params.tau_max, params.n_grid)
    d, moment = _partial(params, tau[:-1], tau[1:])
    zero = np.zeros((3, 1))
    cum = np.concatenate([zero, np.cumsum(d, axis=1)], axis=1)
    gamma, Delta, Pi = cum
    dGamma = 2.0 * (gamma[:-1] * np.diff(tau) + moment)
    Gamma = np.concatenate([[0.0], np.cumsum(dGamma)])

    wbar_rot = np.zeros((len(tau), 2, 2))
    table = CoefficientTable(tau, gamma, Delta, Pi, Gamma, params, wbar_rot)
    # the accumulator needs coefficients at interior nodes, which needs the table
    incr = _wbar_increment(table, tau[:-1], tau[1:], Gamma[1:])
    decay = np.exp(-dGamma)
    acc = np.zeros((2, 2))
    wbar_rot.flags.writeable = True
    for k in range(len(tau) - 1):
        acc = decay[k] * acc + incr[k]
        wbar_rot[k + 1] = acc
    wbar_rot.flags.writeable = False
    log.debug("built coefficient table: %d points, x=%g", len(tau), params.x)
    return table


def gamma_increment(table: CoefficientTable, tau: float, eps: float) -> float:
    """Gamma(tau + eps, tau) = 2 int_tau^{tau+eps} gamma(s) ds."""
    if eps < 0:
        raise ValueError("eps must be non-negative")
    _check_range(table, [tau, tau + eps])
    if eps == 0:
        return 0.0
    if eps > table.params.step:
        # one Gauss rule is only accurate within a cell
        Gamma = coefficients_at(table, np.array([tau, tau + eps]))[3]
        return float(Gamma[1] - Gamma[0])
    g0 = coefficients_at(table, tau)[0]
    _, moment = _partial(table.params, tau, tau + eps)
    return float(2.0 * (g0 * eps + moment))


def asymptotic_coeffs(params: ChannelParams) -> AsymptoticCoefficients:
    """tau -> infinity limits of gamma, Delta, Pi (Ohmic, high temperature)."""
    if params.sd.s != 1.0:
        raise ConfigurationError("closed-form asymptotic coefficients exist only for s = 1")
    a2, x, theta = params.alpha**2, params.x, params.theta
    decay = math.exp(-1.0 / x)
    return AsymptoticCoefficients(
        gamma=math.pi * a2 / (2.0 * x) * decay,
        Delta=math.pi * a2 * theta * decay,
        # Shi(1/x) cosh(1/x) - Chi(1/x) sinh(1/x), evaluated without cancellation
        Pi=2.0 * a2 * theta * sin_laplace_integral(1.0 / x).value,
    )


def read_table_csv(path) -> dict[str, np.ndarray]:
    """Load a table dump back into column arrays."""
    with open(Path(path), newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if tuple(header) != TABLE_CSV_HEADER:
            raise ValueError(f"unexpected header {header}")
        rows = np.array([[float(v) for v in row] for row in reader])
    return {name: rows[:, i] for i, name in enumerate(TABLE_CSV_HEADER)}
