"""Single-mode Gaussian channel mechanics for quantum Brownian motion.

Conventions
-----------
Covariances live in the frame of the characteristic-function quadratic
form: chi(L) = exp(-1/2 L^T sigma L + i m^T Omega^T L). The vacuum is
sigma = I/2 and a state is physical iff sigma + (i/2) Omega >= 0,
i.e. sigma > 0 and det sigma >= 1/4. In this frame the QBM solution
chi_t(L) = chi_0(e^{-Gamma/2} R^{-1} L) exp(-L^T Wbar L) is exactly
sigma -> X sigma X^T + Y with X = e^{-Gamma/2} R, Y = 2 Wbar, because
R^{-1} = R^T.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .coeffs import (
    CoefficientTable,
    _check_range,
    _wbar_increment,
    coefficients_at,
    gamma_increment,
)

OMEGA = np.array([[0.0, 1.0], [-1.0, 0.0]])
OMEGA.flags.writeable = False
J00 = np.array([[1.0, 0.0], [0.0, 0.0]])
J2 = np.array([[0.0, 1.0], [1.0, 0.0]])

HERMITIAN_TOL = 1e-12
PHYSICAL_TOL = 1e-9


class ValidationError(ValueError):
    """Input violates a structural or physical constraint."""


def symplectic_form() -> np.ndarray:
    return OMEGA.copy()


@dataclass(frozen=True, eq=False)
class GaussianState:
    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self):
        mean = np.array(self.mean, dtype=float).reshape(2)
        cov = np.array(self.cov, dtype=float).reshape(2, 2)
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", cov)

    def is_physical(self, tol: float = PHYSICAL_TOL) -> bool:
        c = self.cov
        if not np.allclose(c, c.T, atol=1e-12, rtol=0):
            return False
        return bool(c[0, 0] > 0 and np.linalg.det(c) >= 0.25 - tol)

    def validate(self, tol: float = PHYSICAL_TOL) -> GaussianState:
        if not np.all(np.isfinite(self.cov)) or not np.all(np.isfinite(self.mean)):
            raise ValidationError("state contains non-finite entries")
        if not self.is_physical(tol):
            raise ValidationError(
                f"unphysical covariance (det={np.linalg.det(self.cov):.6g}, need >= 1/4 and symmetric positive)"
            )
        return self

    @classmethod
    def vacuum(cls) -> GaussianState:
        return cls(np.zeros(2), 0.5 * np.eye(2))

    @classmethod
    def coherent(cls, q: float = 0.0, p: float = 0.0) -> GaussianState:
        return cls(np.array([q, p]), 0.5 * np.eye(2))

    @classmethod
    def thermal(cls, nbar: float) -> GaussianState:
        if nbar < 0:
            raise ValidationError("mean occupation must be non-negative")
        return cls(np.zeros(2), (nbar + 0.5) * np.eye(2))

    @classmethod
    def squeezed(cls, r: float, phi: float = 0.0, q: float = 0.0, p: float = 0.0) -> GaussianState:
        """Squeezed vacuum (optionally displaced); r is the squeezing parameter."""
        c, s = np.cos(phi / 2), np.sin(phi / 2)
        rot = np.array([[c, -s], [s, c]])
        cov = 0.5 * rot @ np.diag([np.exp(-2 * r), np.exp(2 * r)]) @ rot.T
        return cls(np.array([q, p]), cov)


@dataclass(frozen=True, eq=False)
class ChannelMap:
    X: np.ndarray
    Y: np.ndarray

    def __post_init__(self):
        X = np.array(self.X, dtype=float).reshape(2, 2)
        Y = np.array(self.Y, dtype=float).reshape(2, 2)
        if not np.allclose(Y, Y.T, atol=1e-12, rtol=1e-10):
            raise ValidationError("Y must be symmetric")
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "Y", 0.5 * (Y + Y.T))

    @classmethod
    def identity(cls) -> ChannelMap:
        return cls(np.eye(2), np.zeros((2, 2)))

    def then(self, later: ChannelMap) -> ChannelMap:
        """Composition: apply self first, then ``later``."""
        return ChannelMap(later.X @ self.X, later.X @ self.Y @ later.X.T + later.Y)


@dataclass(frozen=True, eq=False)
class ZMatrix:
    value: np.ndarray
    eps: float | None
    rescaled: bool = False

    def __post_init__(self):
        object.__setattr__(self, "value", np.array(self.value, dtype=complex).reshape(2, 2))

    def hermiticity_error(self) -> float:
        return float(np.max(np.abs(self.value - self.value.conj().T)))


@dataclass(frozen=True)
class ZSpectrum:
    plus: float
    minus: float

    def __iter__(self):
        yield self.plus
        yield self.minus


def rotation(tau, x: float) -> np.ndarray:
    """R(tau) = [[cos, sin], [-sin, cos]] at angle omega_0 tau = tau / x."""
    if not x > 0:
        raise ValueError("x must be positive")
    phi = np.asarray(tau, dtype=float) / x
    c, s = np.cos(phi), np.sin(phi)
    out = np.empty(phi.shape + (2, 2))
    out[..., 0, 0] = c
    out[..., 0, 1] = s
    out[..., 1, 0] = -s
    out[..., 1, 1] = c
    return out


def wbar(table: CoefficientTable, tau) -> np.ndarray:
    """W-bar(tau); vectorized over tau, shape tau.shape + (2, 2).

    W-bar = R(tau) U(tau) R(tau)^T with the rotating-frame accumulator
    U(tau) = int_0^tau e^{Gamma(s) - Gamma(tau)} R^T(s) M(s) R(s) ds,
    completed from the grid point below tau.
    """
    tau = _check_range(table, tau)
    k = np.clip(np.searchsorted(table.tau, tau, side="right") - 1, 0, len(table) - 2)
    t0 = table.tau[k]
    _, _, _, Gamma = coefficients_at(table, tau)
    decay = np.exp(-(Gamma - table.Gamma[k]))
    U = decay[..., None, None] * table.wbar_rot[k] + _wbar_increment(table, t0, tau, Gamma)
    R = rotation(tau, table.params.x)
    W = R @ U @ np.swapaxes(R, -1, -2)
    return 0.5 * (W + np.swapaxes(W, -1, -2))


def channel_map(table: CoefficientTable, tau: float) -> ChannelMap:
    """(X, Y) of the full map 0 -> tau."""
    _, _, _, Gamma = coefficients_at(table, tau)
    X = np.exp(-0.5 * float(Gamma)) * rotation(tau, table.params.x)
    return ChannelMap(X, 2.0 * wbar(table, tau))


def intermediate_map(table: CoefficientTable, tau: float, eps: float) -> ChannelMap:
    """(X, Y) of the intermediate map tau -> tau + eps."""
    if eps < 0:
        raise ValueError("eps must be non-negative")
    dG = gamma_increment(table, tau, eps)
    Re = rotation(eps, table.params.x)
    W = wbar(table, np.array([tau, tau + eps]))
    X = np.exp(-0.5 * dG) * Re
    Y = 2.0 * W[1] - np.exp(-dG) * Re @ (2.0 * W[0]) @ Re.T
    return ChannelMap(X, Y)


def generic_intermediate_map(full_t: ChannelMap, full_t_eps: ChannelMap) -> ChannelMap:
    """X(t+e, t) = X(t+e) X(t)^-1, Y(t+e, t) = Y(t+e) - X(t+e, t) Y(t) X(t+e, t)^T."""
    X = full_t_eps.X @ np.linalg.inv(full_t.X)
    Y = full_t_eps.Y - X @ full_t.Y @ X.T
    return ChannelMap(X, Y)


def evolve(map_: ChannelMap, state: GaussianState, validate: bool = True) -> GaussianState:
    """sigma -> X sigma X^T + Y, mean -> X mean."""
    if validate:
        state.validate()
    cov = map_.X @ state.cov @ map_.X.T + map_.Y
    return GaussianState(map_.X @ state.mean, 0.5 * (cov + cov.T))


evolve_cov = evolve


def char_function(state: GaussianState, lam) -> complex:
    """chi(L) = exp(-1/2 L^T sigma L + i m^T Omega^T L)."""
    lam = np.asarray(lam, dtype=float)
    quad = np.einsum("...i,ij,...j->...", lam, state.cov, lam)
    lin = np.einsum("i,ji,...j->...", state.mean, OMEGA, lam)
    return np.exp(-0.5 * quad + 1j * lin)


def z_from_map(map_: ChannelMap, eps: float | None = None) -> ZMatrix:
    """Z = Y - (i/2) Omega + (i/2) X Omega X^T."""
    Z = map_.Y - 0.5j * OMEGA + 0.5j * map_.X @ OMEGA @ map_.X.T
    return ZMatrix(Z, eps)


def z_matrix(table: CoefficientTable, tau: float, eps: float) -> ZMatrix:
    """Finite-eps Z(tau + eps, tau) of the exact QBM map."""
    if not eps > 0:
        raise ValueError("eps must be positive")
    return z_from_map(intermediate_map(table, tau, eps), eps)


def z_matrix_closed(table: CoefficientTable, tau: float, eps: float) -> ZMatrix:
    """Z(tau + eps, tau) written directly in terms of W-bar."""
    dG = gamma_increment(table, tau, eps)
    Re = rotation(eps, table.params.x)
    W = wbar(table, np.array([tau, tau + eps]))
    Z = 2 * W[1] - 2 * np.exp(-dG) * Re @ W[0] @ Re.T - 0.5j * OMEGA * (-np.expm1(-dG))
    return ZMatrix(Z, eps)


def z_firstorder_from(gamma: float, Delta: float, Pi: float) -> ZMatrix:
    """[2 Delta J00 - Pi J2 - i Omega gamma], i.e. Z / eps as eps -> 0."""
    Z = 2.0 * Delta * J00 - Pi * J2 - 1j * gamma * OMEGA
    return ZMatrix(Z, None, rescaled=True)


def rwa_z_firstorder_from(gamma: float, Delta: float) -> ZMatrix:
    """Rescaled Z of the RWA channel, Delta I - i gamma Omega; spectrum Delta +- gamma."""
    return ZMatrix(Delta * np.eye(2) - 1j * gamma * OMEGA, None, rescaled=True)


def pd_z_firstorder_from(gamma: float) -> ZMatrix:
    """Rescaled Z of the pure-damping channel, gamma (I - i Omega); spectrum {2 gamma, 0}."""
    return ZMatrix(gamma * (np.eye(2) - 1j * OMEGA), None, rescaled=True)


def z_matrix_firstorder(table: CoefficientTable, tau: float) -> ZMatrix:
    gamma, Delta, Pi, _ = coefficients_at(table, tau)
    return z_firstorder_from(float(gamma), float(Delta), float(Pi))


def hermitian_eigenvalues(H: np.ndarray, tol: float = HERMITIAN_TOL) -> tuple[float, float]:
    """Closed-form eigenvalues (larger first) of a 2x2 Hermitian matrix."""
    H = np.asarray(H, dtype=complex)
    size = float(np.max(np.abs(H)))
    if np.max(np.abs(H - H.conj().T)) > tol * max(1.0, size):
        raise ValidationError("matrix is not Hermitian within tolerance")
    if size == 0.0:
        return 0.0, 0.0
    # rescale by an exact power of two so squares neither underflow nor overflow
    k = -math.frexp(size)[1]
    H = np.ldexp(H.real, k) + 1j * np.ldexp(H.imag, k)
    a, d = H[0, 0].real, H[1, 1].real
    b = 0.5 * (H[0, 1] + np.conj(H[1, 0]))
    mid = 0.5 * (a + d)
    rad = np.hypot(0.5 * (a - d), abs(b))
    plus = mid + rad
    # product = a d - |b|^2; avoids cancellation in mid - rad
    minus = (a * d - abs(b) ** 2) / plus if plus != 0 and mid > 0 else mid - rad
    return float(np.ldexp(plus, -k)), float(np.ldexp(minus, -k))


def z_eigenvalues(z: ZMatrix) -> ZSpectrum:
    plus, minus = hermitian_eigenvalues(z.value)
    return ZSpectrum(plus, minus)
