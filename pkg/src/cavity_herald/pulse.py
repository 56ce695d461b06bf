"""Gaussian single-photon envelopes and the spectral quadrature grid.

The spectral envelope is ``(pi s^2)^(-1/4) exp(-(w - w_c)^2 / (2 s^2))`` with
``s = sigma_omega``; its temporal partner has width ``sigma_t = 1 / sigma_omega``
under the pair ``u(t) = (2 pi)^(-1/2) int u(w) exp(-i w t) dw``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, DomainError

DEFAULT_SIGMA_OMEGA = 0.2
DEFAULT_N_T = 10
DEFAULT_SPAN_SIGMAS = 10.0
DEFAULT_N_POINTS = 4001

MIN_SPAN_SIGMAS = 6.0
MIN_N_POINTS = 401


@dataclass(frozen=True)
class SpectralPulse:
    """Gaussian photon wavepacket.

    Attributes:
        sigma_omega: Spectral width.
        center: Carrier detuning from the cavity resonance.
        n_t: Number of temporal widths covered by one simulation window.
    """

    sigma_omega: float = DEFAULT_SIGMA_OMEGA
    center: float = 0.0
    n_t: float = DEFAULT_N_T

    def __post_init__(self):
        if not (math.isfinite(self.sigma_omega) and self.sigma_omega > 0):
            raise DomainError(f"sigma_omega must be positive, got {self.sigma_omega!r}")
        if not math.isfinite(self.center):
            raise DomainError("center must be finite")
        if not self.n_t >= 1:
            raise DomainError(f"n_t must be at least 1, got {self.n_t!r}")

    @property
    def sigma_t(self) -> float:
        return 1.0 / self.sigma_omega

    @property
    def window(self) -> float:
        """Length ``n_t * sigma_t`` of one temporal window."""
        return self.n_t * self.sigma_t


@dataclass(frozen=True, eq=False)
class QuadratureGrid:
    """Uniform trapezoidal grid over photon detuning.

    Attributes:
        nodes: Strictly increasing detunings.
        weights: Trapezoid weights matching ``nodes``.
        span_sigmas: Half-width of the grid in units of ``sigma_omega``.
    """

    nodes: np.ndarray
    weights: np.ndarray
    span_sigmas: float

    def integrate(self, values) -> float:
        return float(np.dot(self.weights, values))

    def refined(self) -> "QuadratureGrid":
        """Grid with the node spacing halved and the same span."""
        return _trapezoid_grid(self.nodes[0], self.nodes[-1], 2 * len(self.nodes) - 1,
                               self.span_sigmas)


def spectrum(pulse: SpectralPulse, omega):
    """Normalized spectral amplitude of the pulse."""
    s = pulse.sigma_omega
    x = np.asarray(omega, dtype=float) - pulse.center
    return (math.pi * s * s) ** -0.25 * np.exp(-x * x / (2 * s * s))


def temporal(pulse: SpectralPulse, t):
    """Time-domain amplitude centred at ``t = 0``.

    A non-zero carrier ``center`` adds the phase ``exp(-i center t)``; the result
    is then complex.
    """
    st = pulse.sigma_t
    t = np.asarray(t, dtype=float)
    env = (math.pi * st * st) ** -0.25 * np.exp(-t * t / (2 * st * st))
    if pulse.center == 0.0:
        return env
    return env * np.exp(-1j * pulse.center * t)


def _trapezoid_grid(lo: float, hi: float, n: int, span_sigmas: float) -> QuadratureGrid:
    nodes = np.linspace(lo, hi, n)
    h = (hi - lo) / (n - 1)
    weights = np.full(n, h)
    weights[0] = weights[-1] = h / 2
    return QuadratureGrid(nodes, weights, span_sigmas)


def make_grid(pulse: SpectralPulse, span_sigmas: float = DEFAULT_SPAN_SIGMAS,
              n_points: int = DEFAULT_N_POINTS) -> QuadratureGrid:
    """Symmetric trapezoidal grid about the pulse center.

    Raises:
        ConfigurationError: If ``span_sigmas < 6`` or ``n_points`` is below 401 or even.
    """
    if not span_sigmas >= MIN_SPAN_SIGMAS:
        raise ConfigurationError(f"span_sigmas must be >= {MIN_SPAN_SIGMAS:g}, got {span_sigmas!r}")
    if int(n_points) != n_points or n_points < MIN_N_POINTS or n_points % 2 == 0:
        raise ConfigurationError(f"n_points must be an odd integer >= {MIN_N_POINTS}, got {n_points!r}")
    half = span_sigmas * pulse.sigma_omega
    return _trapezoid_grid(pulse.center - half, pulse.center + half, int(n_points), span_sigmas)


def width_scaling_sigma(Delta: float, n_omega_scale: float) -> float:
    """Spectral width ``Delta / N_omega`` of the width-scaling scheme."""
    if not (Delta > 0 and n_omega_scale > 0):
        raise DomainError("Delta and n_omega_scale must be positive")
    return Delta / n_omega_scale
