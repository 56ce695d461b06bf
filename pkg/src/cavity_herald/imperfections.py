"""Loss, mode mismatch, path corrections and interferometric phase noise.

These are the layers that turn ideal per-round reflection amplitudes into the
effective amplitudes used by the heralding algebra. Monte Carlo disorder
studies live in :mod:`cavity_herald.disorder`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import optics
from .errors import ConfigurationError, DegenerateOutcomeError, DomainError, Infeasible
from .optics import RegisterParams
from .outcome import HeraldOutcome

LOSS_MODELS = ("multiplicative", "exact")
CORRECTION_MODES = ("U1", "U2", "U3")


@dataclass(frozen=True)
class PhaseNoiseModel:
    """Gaussian relative phase error between the two interferometer arms.

    Attributes:
        delta_0: Static offset of the relative phase (rad).
        sigma_delta: Standard deviation of the shot-to-shot fluctuation (rad).
        link_length: Optional fiber length the statistics refer to.
    """

    delta_0: float = 0.0
    sigma_delta: float = 0.0
    link_length: float | None = None

    def __post_init__(self):
        if not (math.isfinite(self.delta_0) and math.isfinite(self.sigma_delta)):
            raise DomainError("phase-noise parameters must be finite")
        if self.sigma_delta < 0:
            raise DomainError("sigma_delta must be non-negative")

    @property
    def delta_rms(self) -> float:
        return math.hypot(self.delta_0, self.sigma_delta)

    @property
    def is_trivial(self) -> bool:
        return self.delta_0 == 0.0 and self.sigma_delta == 0.0


@dataclass(frozen=True)
class ImperfectionModel:
    """Per-round loss and mismatch applied to every reflection or transmission.

    Attributes:
        eta_i: Cavity escape efficiency.
        eta_r: Optical transmission of one external cycle (switch, fiber, optics).
        eta_m: Spatial mode overlap between fiber and cavity.
        mismatch: Handling of the unmatched mode, see :func:`optics.mismatched_reflection`.
        loss_model: ``"multiplicative"`` scales amplitudes by ``eta_i**2``;
            ``"exact"`` inserts the matching intrinsic loss rate into the cavity.
        phase_noise: Relative phase statistics of the interferometer.
    """

    eta_i: float = 1.0
    eta_r: float = 1.0
    eta_m: float = 1.0
    mismatch: str = "identity"
    loss_model: str = "multiplicative"
    phase_noise: PhaseNoiseModel = PhaseNoiseModel()

    def __post_init__(self):
        for name in ("eta_i", "eta_r", "eta_m"):
            value = getattr(self, name)
            if not 0.0 < value <= 1.0:
                raise DomainError(f"{name} must lie in (0, 1], got {value!r}")
        if self.mismatch not in optics.MISMATCH_STRATEGIES:
            raise ConfigurationError(f"unknown mismatch strategy {self.mismatch!r}")
        if self.loss_model not in LOSS_MODELS:
            raise ConfigurationError(f"unknown loss model {self.loss_model!r}")

    @property
    def is_ideal(self) -> bool:
        return self.eta_i == 1.0 and self.eta_r == 1.0 and self.eta_m == 1.0

    @property
    def round_probability_factor(self) -> float:
        """Per-round power factor ``eta_i**4 * eta_r`` of the multiplicative model."""
        return self.eta_i**4 * self.eta_r

    def layers(self) -> dict:
        """Plain description of the applied layers, for output headers."""
        return {
            "eta_i": self.eta_i, "eta_r": self.eta_r, "eta_m": self.eta_m,
            "mismatch": self.mismatch, "loss_model": self.loss_model,
            "delta_0": self.phase_noise.delta_0, "sigma_delta": self.phase_noise.sigma_delta,
        }


def effective_round_coefficient(reg: RegisterParams, s: int, omega,
                                model: ImperfectionModel | None = None,
                                mode: str = "reflection"):
    """Amplitude picked up by branch ``s`` in one external cycle, imperfections included."""
    model = model or ImperfectionModel()
    exact = model.loss_model == "exact" and model.eta_i < 1.0
    if exact:
        reg = RegisterParams(reg.cavity.with_escape_efficiency(model.eta_i),
                             reg.transition0, reg.transition1, reg.mode)
    if mode == "reflection":
        c = optics.reflection(reg, s, omega)
        if not exact:
            c = model.eta_i**2 * c
        if model.eta_m < 1.0:
            c = optics.mismatched_reflection(c, model.eta_m, model.mismatch)
    elif mode == "transmission":
        c = optics.transmission(reg, s, omega)
        if not exact:
            c = model.eta_i * c
        # the unmatched mode never reaches the far mirror
        c = model.eta_m * c
    else:
        raise ConfigurationError(f"unknown protocol mode {mode!r}")
    if model.eta_r < 1.0:
        c = math.sqrt(model.eta_r) * c
    return c


@dataclass(frozen=True)
class CorrectionOp:
    """Passive attenuator plus phase shifter in one interferometer arm.

    The photon traverses it once before and once after the encoding rounds.

    Attributes:
        amplitude: Per-pass amplitude transmission, at most 1.
        phase: Per-pass phase shift (rad).
        target_path: ``"A"`` or ``"B"``.
    """

    amplitude: float = 1.0
    phase: float = 0.0
    target_path: str = "A"

    def __post_init__(self):
        if not 0.0 < self.amplitude <= 1.0:
            raise DomainError(f"correction amplitude must lie in (0, 1], got {self.amplitude!r}")
        if self.target_path not in ("A", "B"):
            raise ConfigurationError(f"target_path must be 'A' or 'B', got {self.target_path!r}")

    @property
    def pass_factor(self) -> complex:
        return self.amplitude * complex(math.cos(self.phase), math.sin(self.phase))

    @property
    def factor(self) -> complex:
        """Net factor after both passes."""
        return self.pass_factor**2

    def phase_only(self) -> "CorrectionOp":
        return CorrectionOp(1.0, self.phase, self.target_path)


def register_correction(r0A_at0: complex, r0B_at0: complex, N: int) -> CorrectionOp:
    """Correction that equalizes the N-round amplitudes of the two registers at resonance.

    It always sits on the path with the larger reflection so that it only attenuates.

    Raises:
        DegenerateOutcomeError: If either amplitude vanishes.
    """
    a, b = complex(r0A_at0), complex(r0B_at0)
    if a == 0 or b == 0:
        raise DegenerateOutcomeError("correction needs non-zero reflection amplitudes")
    target, large, small = ("A", a, b) if abs(a) >= abs(b) else ("B", b, a)
    ratio = small / large
    return CorrectionOp(abs(ratio) ** (N / 2), N * math.atan2(ratio.imag, ratio.real) / 2, target)


def path_factors(corrections) -> tuple[complex, complex]:
    """Combined two-pass factors ``(A, B)`` of a collection of corrections."""
    fa = fb = 1.0 + 0j
    for op in corrections or ():
        if op.target_path == "A":
            fa *= op.factor
        else:
            fb *= op.factor
    return fa, fb


def match_amplitude_detuning(C1: float, gamma1: float, r0_magnitude: float):
    """Detuning of transition 1 that makes its resonant reflection magnitude equal ``r0_magnitude``.

    The negative root is returned. Returns :class:`Infeasible` when no detuning can
    reach the requested magnitude.
    """
    r2 = r0_magnitude**2
    floor = ((C1 - 1.0) / (C1 + 1.0)) ** 2
    if not r0_magnitude < 1.0:
        return Infeasible(f"|r0| = {r0_magnitude:.6g} must be below 1")
    if r2 < floor:
        return Infeasible(f"|r0|^2 = {r2:.6g} is below ((C1-1)/(C1+1))^2 = {floor:.6g}")
    num = max(r2 * (C1 + 1.0) ** 2 - (C1 - 1.0) ** 2, 0.0)
    return -(gamma1 / 2.0) * math.sqrt(num / (1.0 - r2))


def phase_noise_outcome(r_plus: complex, r_minus: complex, delta: float) -> HeraldOutcome:
    """Monochromatic port statistics for a fixed relative phase error ``delta``."""
    p2, m2 = abs(r_plus) ** 2, abs(r_minus) ** 2
    c2, s2 = math.cos(delta / 2) ** 2, math.sin(delta / 2) ** 2
    p_a = m2 / 2 + p2 * c2
    p_b = m2 / 2 + p2 * s2
    if p_a < 1e-30 and p_b < 1e-30:
        raise DegenerateOutcomeError("both ports have vanishing click probability")
    f_a = m2 * c2 / (2 * p_a) if p_a > 0 else 0.0
    f_b = m2 * c2 / (2 * p_b) if p_b > 0 else 0.0
    return HeraldOutcome.from_ports(p_a, p_b, f_a, f_b)


def _fidelity_a(p2: float, m2: float, delta):
    c2 = np.cos(np.asarray(delta) / 2) ** 2
    return m2 * c2 / (m2 + 2 * p2 * c2)


def averaged_phase_noise_fidelity(model: PhaseNoiseModel) -> float:
    """Fidelity averaged over Gaussian phase errors at the entangling condition."""
    return 0.5 * (1.0 + math.cos(model.delta_0) * math.exp(-model.sigma_delta**2 / 2))


def small_noise_fidelity(model: PhaseNoiseModel) -> float:
    """Small-error approximation ``1 - delta_rms**2 / 4`` of the averaged fidelity."""
    return 1.0 - model.delta_rms**2 / 4.0


def monte_carlo_phase_noise_fidelity(model: PhaseNoiseModel, n_samples: int, seed: int = 0,
                                     r_plus: complex = 0.0, r_minus: complex = 1.0):
    """Sample the port-A fidelity over Gaussian phase errors.

    Returns:
        ``(mean, standard_error)`` of the sampled fidelities.
    """
    rng = np.random.Generator(np.random.Philox(seed))
    deltas = rng.normal(model.delta_0, model.sigma_delta, int(n_samples))
    f = _fidelity_a(abs(r_plus) ** 2, abs(r_minus) ** 2, deltas)
    return float(f.mean()), float(f.std(ddof=1) / math.sqrt(len(f)))


def rms_length_scaling(reference_length: float, reference_rms: float, target_length: float) -> float:
    """Project the rms phase error to another link length with the ``L**1.5`` law."""
    if not (reference_length > 0 and target_length > 0):
        raise DomainError("link lengths must be positive")
    return reference_rms * (target_length / reference_length) ** 1.5


def phase_averaged_outcome(i_plus: float, i_minus: float, model: PhaseNoiseModel,
                           order: int = 64) -> HeraldOutcome:
    """Port statistics averaged over the Gaussian phase error.

    ``i_plus`` and ``i_minus`` are the spectrally integrated powers of the
    symmetric and antisymmetric amplitudes. Probabilities are averaged directly;
    each fidelity is the average over attempts weighted by the click probability
    of its port.
    """
    if model.sigma_delta == 0:
        nodes, weights = np.array([model.delta_0]), np.array([1.0])
    else:
        x, w = np.polynomial.hermite.hermgauss(order)
        nodes = model.delta_0 + math.sqrt(2) * model.sigma_delta * x
        weights = w / math.sqrt(math.pi)
    rp, rm = math.sqrt(i_plus), math.sqrt(i_minus)
    outs = [phase_noise_outcome(rp, rm, d) for d in nodes]
    p_a = sum(wt * o.p_a for wt, o in zip(weights, outs))
    p_b = sum(wt * o.p_b for wt, o in zip(weights, outs))
    f_a = sum(wt * o.p_a * o.f_a for wt, o in zip(weights, outs)) / p_a if p_a > 0 else 0.0
    f_b = sum(wt * o.p_b * o.f_b for wt, o in zip(weights, outs)) / p_b if p_b > 0 else 0.0
    return HeraldOutcome.from_ports(p_a, p_b, f_a, f_b)
