"""Spin-conditioned reflection and transmission of a cavity coupled to a spin register.

All rates are dimensionless, measured in units of the total decay rate of the
reference optical transition. Frequencies ``omega`` are photon detunings from
the bare cavity resonance, and the time convention is ``exp(-i omega t)``.

A register holds one cavity mode and two spin-conditioned optical transitions.
Transition ``s`` couples with strength ``g_s`` and is detuned from the cavity
by ``delta_s``; in three-level registers only transition 0 is optically active.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import ConfigurationError, DomainError

DEFAULT_KAPPA = 200.0

MISMATCH_STRATEGIES = ("identity", "separate", "selective_pi")
REGISTER_MODES = ("four_level", "three_level")


def _check_finite(**values: float) -> None:
    for name, value in values.items():
        if not math.isfinite(value):
            raise DomainError(f"{name} must be finite, got {value!r}")


@dataclass(frozen=True)
class TransitionParams:
    """One optical transition of a spin register.

    Attributes:
        g: Coupling strength to the cavity mode.
        gamma_se: Spontaneous emission rate.
        gamma_phi: Pure dephasing rate.
        delta: Detuning of the transition from the cavity resonance.
    """

    g: float
    gamma_se: float = 1.0
    gamma_phi: float = 0.0
    delta: float = 0.0

    def __post_init__(self):
        _check_finite(g=self.g, gamma_se=self.gamma_se,
                      gamma_phi=self.gamma_phi, delta=self.delta)
        if self.g < 0 or self.gamma_se < 0 or self.gamma_phi < 0:
            raise DomainError("g, gamma_se and gamma_phi must be non-negative")

    @property
    def gamma(self) -> float:
        """Total decay rate, spontaneous emission plus twice the pure dephasing."""
        return self.gamma_se + 2.0 * self.gamma_phi

    def with_delta(self, delta: float) -> "TransitionParams":
        return replace(self, delta=float(delta))


@dataclass(frozen=True)
class CavityParams:
    """Decay channels of the cavity mode.

    Attributes:
        kappa_l: Decay through the input (left) mirror.
        kappa_r: Decay through the far (right) mirror; zero for a single-sided cavity.
        kappa_i: Intrinsic loss (scattering, absorption).
    """

    kappa_l: float = DEFAULT_KAPPA
    kappa_r: float = 0.0
    kappa_i: float = 0.0

    def __post_init__(self):
        _check_finite(kappa_l=self.kappa_l, kappa_r=self.kappa_r, kappa_i=self.kappa_i)
        if min(self.kappa_l, self.kappa_r, self.kappa_i) < 0:
            raise DomainError("cavity decay rates must be non-negative")
        if self.kappa <= 0:
            raise DomainError("total cavity decay rate must be positive")

    @property
    def kappa(self) -> float:
        return self.kappa_l + self.kappa_r + self.kappa_i

    @property
    def single_sided(self) -> bool:
        return self.kappa_r == 0.0

    @property
    def eta_i(self) -> float:
        """Escape efficiency through the input mirror relative to intrinsic loss."""
        return self.kappa_l / (self.kappa_l + self.kappa_i)

    def with_escape_efficiency(self, eta_i: float) -> "CavityParams":
        """Redistribute the non-transmitting decay so that ``eta_i`` holds.

        The total decay rate is conserved, so cooperativities are unchanged.
        """
        if not 0.0 < eta_i <= 1.0:
            raise DomainError(f"eta_i must lie in (0, 1], got {eta_i!r}")
        budget = self.kappa_l + self.kappa_i
        return replace(self, kappa_l=eta_i * budget, kappa_i=(1.0 - eta_i) * budget)


@dataclass(frozen=True)
class RegisterParams:
    """A cavity together with its two spin-conditioned transitions.

    In ``three_level`` mode, ``transition1`` is the optically dark branch and is
    treated as uncoupled regardless of its stored ``g``.
    """

    cavity: CavityParams = field(default_factory=CavityParams)
    transition0: TransitionParams = field(default_factory=lambda: TransitionParams(g=0.0))
    transition1: TransitionParams = field(default_factory=lambda: TransitionParams(g=0.0))
    mode: str = "four_level"

    def __post_init__(self):
        if self.mode not in REGISTER_MODES:
            raise ConfigurationError(f"unknown register mode {self.mode!r}")

    @classmethod
    def symmetric(cls, cooperativity: float, delta: float, kappa: float = DEFAULT_KAPPA,
                  gamma: float = 1.0, two_sided: bool = False,
                  mode: str = "four_level") -> "RegisterParams":
        """Register with identical transitions detuned by ``+delta`` and ``-delta``.

        Args:
            cooperativity: C = 4 g^2 / (kappa gamma) of both transitions.
            delta: Detuning of transition 0; transition 1 sits at ``-delta``.
            kappa: Total cavity decay rate.
            gamma: Total transition decay rate.
            two_sided: Split ``kappa`` equally over both mirrors (transmission setups).
            mode: ``"four_level"`` or ``"three_level"``.
        """
        if cooperativity < 0:
            raise DomainError("cooperativity must be non-negative")
        g = math.sqrt(cooperativity * kappa * gamma / 4.0)
        cav = CavityParams(kappa / 2, kappa / 2, 0.0) if two_sided else CavityParams(kappa, 0.0, 0.0)
        return cls(cav, TransitionParams(g, gamma, 0.0, delta),
                   TransitionParams(g, gamma, 0.0, -delta), mode)

    def transition(self, s: int) -> TransitionParams:
        if s == 0:
            return self.transition0
        if s == 1:
            return self.transition1
        raise ConfigurationError(f"spin index must be 0 or 1, got {s!r}")

    def coupling(self, s: int) -> float:
        """Effective coupling of branch ``s`` (zero for the dark branch of a three-level register)."""
        if s == 1 and self.mode == "three_level":
            return 0.0
        return self.transition(s).g

    def cooperativity(self, s: int = 0) -> float:
        tr = self.transition(s)
        if tr.gamma <= 0:
            raise DomainError("cooperativity requires a positive total decay rate")
        return 4.0 * self.coupling(s) ** 2 / (self.cavity.kappa * tr.gamma)

    def with_detunings(self, delta0: float, delta1: float) -> "RegisterParams":
        return replace(self, transition0=self.transition0.with_delta(delta0),
                       transition1=self.transition1.with_delta(delta1))


def cooperativity(g: float, kappa: float, gamma: float) -> float:
    return 4.0 * g * g / (kappa * gamma)


def coupling_for_cooperativity(cooperativity: float, kappa: float = DEFAULT_KAPPA,
                               gamma: float = 1.0) -> float:
    return math.sqrt(cooperativity * kappa * gamma / 4.0)


def _as_omega(omega):
    w = np.asarray(omega, dtype=float)
    if not np.all(np.isfinite(w)):
        raise DomainError("omega must be finite")
    return w


def _denominator(cav: CavityParams, g: float, gamma: float, delta: float, w):
    atom = gamma + 2j * (delta - w)
    return atom, (cav.kappa - 2j * w) * atom + 4.0 * g * g


def _maybe_scalar(x):
    return x[()] if isinstance(x, np.ndarray) and x.ndim == 0 else x


def reflection(reg: RegisterParams, s: int, omega=0.0):
    """Reflection amplitude seen by a photon at detuning ``omega`` when the spin is in ``s``.

    r_s = 1 - 2 kappa_l [gamma + 2i(delta_s - omega)]
              / ([kappa - 2i omega][gamma + 2i(delta_s - omega)] + 4 g_s^2)

    Returns a complex scalar for scalar ``omega`` and an array otherwise.
    """
    w = _as_omega(omega)
    g = reg.coupling(s)
    if g == 0.0:
        return empty_cavity_reflection(reg.cavity, w)
    tr = reg.transition(s)
    atom, den = _denominator(reg.cavity, g, tr.gamma, tr.delta, w)
    return _maybe_scalar(1.0 - 2.0 * reg.cavity.kappa_l * atom / den)


def transmission(reg: RegisterParams, s: int, omega=0.0):
    """Transmission amplitude from the input mirror to the far mirror.

    Raises:
        ConfigurationError: If the cavity has no far-mirror decay channel.
    """
    if reg.cavity.kappa_r <= 0 or reg.cavity.kappa_l <= 0:
        raise ConfigurationError("transmission needs kappa_l > 0 and kappa_r > 0")
    w = _as_omega(omega)
    cav = reg.cavity
    tr = reg.transition(s)
    atom, den = _denominator(cav, reg.coupling(s), tr.gamma, tr.delta, w)
    return _maybe_scalar(-2.0 * math.sqrt(cav.kappa_l * cav.kappa_r) * atom / den)


def empty_cavity_reflection(cav: CavityParams, omega=0.0):
    """Reflection off the cavity with no coupled emitter: 1 - 2 kappa_l / (kappa - 2i omega)."""
    w = _as_omega(omega)
    return _maybe_scalar(1.0 - 2.0 * cav.kappa_l / (cav.kappa - 2j * w))


def large_detuning_expansion(C: float, O: float) -> tuple[float, float]:
    """Per-round magnitude and phase of the reflection for ``O = 2 delta / gamma >> 1``.

    Returns:
        ``(R, theta)`` with ``theta = 2C/O`` and ``R = 1 - theta**2 / (2C)``.
    """
    if not O > 0:
        raise DomainError("O must be positive")
    if O < 5:
        warnings.warn(f"large-detuning expansion used at O={O:g} < 5", RuntimeWarning, stacklevel=2)
    theta = 2.0 * C / O
    return 1.0 - 2.0 * C / O**2, theta


def excited_population_ss(reg: RegisterParams, drive_amplitude: float = 1.0,
                          Delta: float | None = None, s: int = 0) -> float:
    """Steady-state excited-state population of transition ``s`` under a weak resonant drive.

    ``Delta`` defaults to the transition's own detuning.
    """
    tr = reg.transition(s)
    d = tr.delta if Delta is None else Delta
    g = reg.coupling(s)
    k = reg.cavity.kappa
    num = 16.0 * g * g * reg.cavity.kappa_l * abs(drive_amplitude) ** 2
    return num / ((k * tr.gamma + 4.0 * g * g) ** 2 + (2.0 * k * d) ** 2)


def _check_efficiency(name: str, value: float) -> None:
    if not 0.0 < value <= 1.0:
        raise DomainError(f"{name} must lie in (0, 1], got {value!r}")


def lossy_effective_reflection(r, eta_i: float, eta_r: float):
    """Scale a lossless amplitude by the multiplicative loss model ``eta_i**2 * sqrt(eta_r)``."""
    _check_efficiency("eta_i", eta_i)
    _check_efficiency("eta_r", eta_r)
    return eta_i**2 * math.sqrt(eta_r) * r


def mismatched_reflection(r, eta_m: float, strategy: str = "identity"):
    """Reflection projected back onto the fiber mode for partial spatial overlap ``eta_m``.

    The unmatched fraction reflects promptly with amplitude +1 and its handling
    sets the interference term:

    * ``identity``: recombined unchanged, ``eta_m r + (1 - eta_m)``
    * ``separate``: discarded, ``eta_m r``
    * ``selective_pi``: recombined after a pi phase shift, ``eta_m r - (1 - eta_m)``
    """
    _check_efficiency("eta_m", eta_m)
    if strategy == "identity":
        return eta_m * r + (1.0 - eta_m)
    if strategy == "separate":
        return eta_m * r
    if strategy == "selective_pi":
        return eta_m * r - (1.0 - eta_m)
    raise ConfigurationError(f"unknown mismatch strategy {strategy!r}")


def filter_loss(R: float, theta: float, eta_m: float, theta_n: float = math.pi) -> float:
    """Spin-averaged photon probability removed by projecting back onto the fiber mode.

    ``R`` and ``theta`` describe the matched reflection ``-R exp(+-i theta)`` and
    ``theta_n`` the phase of the promptly reflected unmatched component.
    """
    return eta_m * (1.0 - eta_m) * (R * R + 1.0 + 2.0 * R * math.cos(theta_n) * math.cos(theta))
