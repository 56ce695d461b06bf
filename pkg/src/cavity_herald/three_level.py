"""Time-domain simulation of the three-level register under dynamical decoupling.

Only spin state 0 has an optical transition. Instantaneous pi pulses swap the
spin states between consecutive windows of length ``tau_dd = N_t sigma_t``, so
each spin branch alternates between the coupled and the empty cavity. The
transition detuning follows either a square wave synchronized with the pi
pulses or the sinusoid ``Delta_tilde sin(nu t)`` with ``nu = pi / tau_dd``.

Within one window the single-excitation amplitudes obey

    dc/dt = -(kappa/2) c - i g e - sqrt(kappa_l) u(t)
    de/dt = -i (Delta(t) - i gamma/2) e - i g c

starting from ``c = e = 0``, and the reflected field is ``u + sqrt(kappa_l) c``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numba
import numpy as np
from scipy.optimize import minimize_scalar

from .errors import ConfigurationError, DomainError, NumericError
from .optics import RegisterParams, empty_cavity_reflection, reflection
from .outcome import HeraldOutcome
from .protocol import int_power, integrals_from_paths, solve_detuning, spectral_weight
from .pulse import DEFAULT_N_POINTS, DEFAULT_SPAN_SIGMAS, SpectralPulse, make_grid, temporal

MODULATIONS = ("stepwise", "sinusoid")
MAX_STEP_PER_SIGMA_T = 1 / 200
MAX_STEP_PER_KAPPA = 1 / 20


@dataclass(frozen=True)
class DDSchedule:
    """Pi-pulse schedule and detuning modulation of a three-level run.

    Attributes:
        rounds: Number of pi-pulse pairs ``N``; the run has ``2N`` windows.
        tau_dd: Window length between pi pulses.
        modulation: ``"stepwise"`` (square wave of height ``amplitude``) or
            ``"sinusoid"`` (``amplitude * sin(nu t)``).
        amplitude: ``Delta`` for the square wave, ``Delta_tilde`` for the sinusoid.
        pulse_center_offset: Photon arrival time measured from the start of a
            window; ``None`` places it at the window center.
    """

    rounds: int
    tau_dd: float
    modulation: str = "stepwise"
    amplitude: float = 0.0
    pulse_center_offset: float | None = None

    def __post_init__(self):
        if int(self.rounds) != self.rounds or self.rounds < 0:
            raise ConfigurationError("rounds must be a non-negative integer")
        if not self.tau_dd > 0:
            raise DomainError("tau_dd must be positive")
        if self.modulation not in MODULATIONS:
            raise ConfigurationError(f"unknown modulation {self.modulation!r}")

    @classmethod
    def for_pulse(cls, pulse: SpectralPulse, rounds: int, modulation: str = "stepwise",
                  amplitude: float = 0.0) -> "DDSchedule":
        """Schedule whose window is ``pulse.n_t`` temporal widths long."""
        return cls(rounds, pulse.window, modulation, amplitude)

    @property
    def nu(self) -> float:
        return math.pi / self.tau_dd

    @property
    def n_segments(self) -> int:
        return 2 * self.rounds

    @property
    def center_offset(self) -> float:
        return self.tau_dd / 2 if self.pulse_center_offset is None else self.pulse_center_offset

    @property
    def duration(self) -> float:
        return self.n_segments * self.tau_dd


def detuning_waveform(schedule: DDSchedule, t):
    """Transition detuning at absolute time ``t`` measured from the first window start.

    The square wave is ``+Delta`` in the first window and alternates at every pi
    pulse; the sinusoid peaks at the first window center.
    """
    t = np.asarray(t, dtype=float)
    if np.any(t < 0) or np.any(t > schedule.duration):
        raise DomainError("time outside the schedule window")
    if schedule.modulation == "sinusoid":
        return schedule.amplitude * np.sin(schedule.nu * t)
    k = np.minimum(np.floor(t / schedule.tau_dd), max(schedule.n_segments - 1, 0))
    return np.where(k % 2 == 0, schedule.amplitude, -schedule.amplitude)


@dataclass(frozen=True, eq=False)
class TemporalEnvelope:
    """Photon amplitude on a uniform time grid.

    Attributes:
        times: Uniform, increasing sample times.
        values: Complex amplitudes.
        truncation_loss: Excitation still stored in the system at the end of each
            simulated window, i.e. norm cut off by the window.
    """

    times: np.ndarray
    values: np.ndarray
    truncation_loss: tuple = field(default_factory=tuple)

    @property
    def step(self) -> float:
        return float(self.times[1] - self.times[0])

    def norm(self) -> float:
        return _trapezoid(np.abs(self.values) ** 2, self.step)

    def scaled(self, alpha: complex) -> "TemporalEnvelope":
        return TemporalEnvelope(self.times, alpha * self.values, self.truncation_loss)


def _trapezoid(y, h):
    return float(h * (np.sum(y) - 0.5 * (y[0] + y[-1])))


def time_grid(pulse: SpectralPulse, kappa: float, step: float | None = None) -> np.ndarray:
    """Uniform grid over one window, resolving both the cavity and the pulse."""
    h_max = min(MAX_STEP_PER_KAPPA / kappa, MAX_STEP_PER_SIGMA_T * pulse.sigma_t)
    h = h_max if step is None else step
    if h > h_max * (1 + 1e-12):
        raise ConfigurationError(f"time step {h:.3g} exceeds the bound {h_max:.3g}")
    n = int(math.ceil(pulse.window / h - 1e-9)) + 1
    return np.linspace(0.0, pulse.window, max(n, 4))


def incident_envelope(pulse: SpectralPulse, times: np.ndarray,
                      center: float | None = None) -> TemporalEnvelope:
    """Incident Gaussian photon centred at ``center`` (default: window center)."""
    tc = 0.5 * (times[0] + times[-1]) if center is None else center
    return TemporalEnvelope(times, np.asarray(temporal(pulse, times - tc), dtype=complex))


@numba.njit(cache=True)
def _rk4_round(u, umid, d, dmid, h, kappa, kappa_l, g, gamma):
    n = u.shape[0]
    out = np.empty(n, np.complex128)
    c = 0j
    e = 0j
    sk = math.sqrt(kappa_l)
    hk = 0.5 * kappa
    hg = 0.5 * gamma
    out[0] = u[0]
    for k in range(n - 1):
        c1 = -hk * c - 1j * g * e - sk * u[k]
        e1 = -1j * (d[k] - 1j * hg) * e - 1j * g * c
        cc = c + 0.5 * h * c1
        ee = e + 0.5 * h * e1
        c2 = -hk * cc - 1j * g * ee - sk * umid[k]
        e2 = -1j * (dmid[k] - 1j * hg) * ee - 1j * g * cc
        cc = c + 0.5 * h * c2
        ee = e + 0.5 * h * e2
        c3 = -hk * cc - 1j * g * ee - sk * umid[k]
        e3 = -1j * (dmid[k] - 1j * hg) * ee - 1j * g * cc
        cc = c + h * c3
        ee = e + h * e3
        c4 = -hk * cc - 1j * g * ee - sk * u[k + 1]
        e4 = -1j * (d[k + 1] - 1j * hg) * ee - 1j * g * cc
        c = c + h / 6 * (c1 + 2 * c2 + 2 * c3 + c4)
        e = e + h / 6 * (e1 + 2 * e2 + 2 * e3 + e4)
        out[k + 1] = u[k + 1] + sk * c
    return out, c, e


def _midpoints(u):
    # cubic interpolation at interval midpoints, one-sided at the ends
    m = np.empty(len(u) - 1, dtype=u.dtype)
    m[1:-1] = (-u[:-3] + 9 * u[1:-2] + 9 * u[2:-1] - u[3:]) / 16
    m[0] = (3 * u[0] + 6 * u[1] - u[2]) / 8
    m[-1] = (3 * u[-1] + 6 * u[-2] - u[-3]) / 8
    return m


def propagate_round(u_in: TemporalEnvelope, reg: RegisterParams, waveform=None,
                    spin_branch: str = "coupled", transition: int = 0) -> TemporalEnvelope:
    """Reflect one window of the photon off the register.

    Args:
        u_in: Incident envelope; the cavity is empty at its first sample.
        reg: Register providing the cavity and the transition.
        waveform: Detuning, either a constant, a callable of the envelope time,
            or ``None`` for the stored detuning of the transition.
        spin_branch: ``"coupled"`` or ``"uncoupled"`` (empty cavity).
        transition: Which transition of ``reg`` is coupled.

    Raises:
        ConfigurationError: If the time step does not resolve the cavity decay.
        NumericError: If the integration produced non-finite values.
    """
    if spin_branch not in ("coupled", "uncoupled"):
        raise ConfigurationError(f"unknown spin branch {spin_branch!r}")
    t = u_in.times
    if len(t) < 4:
        raise ConfigurationError("time grid needs at least four samples")
    h = u_in.step
    kappa = reg.cavity.kappa
    if h > MAX_STEP_PER_KAPPA / kappa * (1 + 1e-9):
        raise ConfigurationError(f"time step {h:.3g} does not resolve kappa = {kappa:g}")
    tr = reg.transition(transition)
    g = reg.coupling(transition) if spin_branch == "coupled" else 0.0
    tm = 0.5 * (t[:-1] + t[1:])
    if waveform is None:
        waveform = tr.delta
    if callable(waveform):
        d, dm = np.asarray(waveform(t), float), np.asarray(waveform(tm), float)
    else:
        d, dm = np.full(len(t), float(waveform)), np.full(len(tm), float(waveform))
    u = np.ascontiguousarray(u_in.values, dtype=np.complex128)
    out, c, e = _rk4_round(u, _midpoints(u), d, dm, h, kappa, reg.cavity.kappa_l, g, tr.gamma)
    if not np.all(np.isfinite(out)):
        raise NumericError("time-domain integration produced non-finite values")
    lost = abs(c) ** 2 + abs(e) ** 2
    return TemporalEnvelope(t, out, u_in.truncation_loss + (lost,))


def _segment_waveform(schedule: DDSchedule, k: int):
    sign = 1.0 if k % 2 == 0 else -1.0
    if schedule.modulation == "stepwise":
        return sign * schedule.amplitude
    start = k * schedule.tau_dd
    return lambda t: schedule.amplitude * np.sin(schedule.nu * (start + t))


def run_three_level(pulse: SpectralPulse, schedule: DDSchedule, reg: RegisterParams,
                    step: float | None = None, richardson: bool = False,
                    history: list | None = None) -> tuple[TemporalEnvelope, TemporalEnvelope]:
    """Propagate both spin branches through all ``2N`` windows.

    Branch 0 starts coupled and branch 1 uncoupled; every pi pulse swaps them.
    The output of one window is the input of the next on the same local grid.

    Args:
        pulse: Incident photon; ``pulse.n_t`` must match ``schedule.tau_dd``.
        schedule: Pi-pulse schedule and modulation.
        reg: Register; transition 0 supplies ``g`` and ``gamma``.
        step: Optional time step, at most the resolution bound.
        richardson: Repeat with half the step and require ``F_A`` to agree to 1e-6.
        history: If a list is given, ``(window, u_0, u_1)`` is appended after each window.

    Returns:
        Final envelopes ``(u_0, u_1)`` of the two branches.
    """
    if not math.isclose(schedule.tau_dd, pulse.window, rel_tol=1e-12):
        raise ConfigurationError("schedule window must equal pulse.n_t * sigma_t")
    times = time_grid(pulse, reg.cavity.kappa, step)
    result = _run_branches(pulse, schedule, reg, times, history)
    if richardson and schedule.rounds > 0:
        fine = np.linspace(times[0], times[-1], 2 * len(times) - 1)
        check = _run_branches(pulse, schedule, reg, fine, None)
        change = abs(temporal_herald(*result).f_a - temporal_herald(*check).f_a)
        if not change < 1e-6:
            raise NumericError(f"time step not converged (F_A change {change:.3g})")
    return result


def _run_branches(pulse, schedule, reg, times, history):
    u = incident_envelope(pulse, times, times[0] + schedule.center_offset)
    branches = [u, u]
    for k in range(schedule.n_segments):
        wave = _segment_waveform(schedule, k)
        for b in (0, 1):
            coupled = (k % 2 == 0) if b == 0 else (k % 2 == 1)
            branches[b] = propagate_round(branches[b], reg, wave,
                                          "coupled" if coupled else "uncoupled")
        if history is not None:
            history.append((k, branches[0], branches[1]))
    return branches[0], branches[1]


def temporal_herald(u_0: TemporalEnvelope, u_1: TemporalEnvelope) -> HeraldOutcome:
    """Port statistics of identical three-level registers from the branch envelopes."""
    if u_0.times.shape != u_1.times.shape or not np.array_equal(u_0.times, u_1.times):
        raise ConfigurationError("envelopes must share one time grid")
    h = u_0.step
    up = (u_0.values + u_1.values) / 2
    um = (u_0.values - u_1.values) / 2
    ip = _trapezoid(np.abs(up) ** 2, h)
    im = _trapezoid(np.abs(um) ** 2, h)
    p_a = (2 * ip + im) / 2
    p_b = im / 2
    return HeraldOutcome.from_ports(p_a, p_b, p_b / p_a if p_a > 0 else 0.0, 1.0)


def frequency_domain_three_level(reg: RegisterParams, pulse: SpectralPulse, rounds: int,
                                 Delta: float, span_sigmas: float = DEFAULT_SPAN_SIGMAS,
                                 n_points: int = DEFAULT_N_POINTS) -> HeraldOutcome:
    """Stepwise scheme evaluated spectrally with ``r_0(w) r_off(w)`` and ``r_off(w) r_1(w)``."""
    grid = make_grid(pulse, span_sigmas, n_points)
    w = grid.nodes
    four = RegisterParams(reg.cavity, reg.transition0.with_delta(Delta),
                          reg.transition0.with_delta(-Delta))
    r_off = empty_cavity_reflection(reg.cavity, w)
    a0 = int_power(reflection(four, 0, w) * r_off, rounds)
    a1 = int_power(r_off * reflection(four, 1, w), rounds)
    return integrals_from_paths(spectral_weight(pulse, grid), a0, a1, a0, a1).outcome()


def optimize_stepwise_detuning(reg: RegisterParams, pulse: SpectralPulse, rounds: int,
                               xatol: float = 1e-6) -> tuple[float, HeraldOutcome]:
    """Square-wave amplitude maximizing the spectral ``F_A`` of the three-level scheme."""
    sol = solve_detuning(reg.cooperativity(0), rounds, reg.transition0.gamma)
    seed = sol.select()
    res = minimize_scalar(lambda d: -frequency_domain_three_level(reg, pulse, rounds, d).f_a,
                          bounds=(0.5 * seed, 2 * seed), method="bounded",
                          options={"xatol": xatol})
    return res.x, frequency_domain_three_level(reg, pulse, rounds, res.x)


def effective_sinusoid_amplitude(Delta_target: float, N_t: float) -> float:
    """Sinusoid amplitude whose phase action matches a square wave of height ``Delta_target``."""
    if N_t < 4:
        raise DomainError("N_t must be at least 4")
    return Delta_target * (1 + math.pi**2 / (4 * N_t**2))


def refine_sinusoid_amplitude(reg: RegisterParams, pulse: SpectralPulse, rounds: int,
                              Delta_step: float, rel_bracket: float = 0.03,
                              xatol: float = 1e-4) -> tuple[float, HeraldOutcome]:
    """Maximize the time-domain ``F_A`` over the sinusoid amplitude around its seed.

    Returns:
        ``(Delta_tilde, outcome)``.
    """
    seed = effective_sinusoid_amplitude(Delta_step, pulse.n_t)

    def run(a):
        sched = DDSchedule.for_pulse(pulse, rounds, "sinusoid", a)
        return temporal_herald(*run_three_level(pulse, sched, reg))

    res = minimize_scalar(lambda a: 1 - run(a).f_a,
                          bounds=(seed * (1 - rel_bracket), seed * (1 + rel_bracket)),
                          method="bounded", options={"xatol": xatol})
    return res.x, run(res.x)


def run_four_level(reg: RegisterParams, pulse: SpectralPulse, rounds: int,
                   step: float | None = None) -> tuple[TemporalEnvelope, TemporalEnvelope]:
    """Time-domain counterpart of ``rounds`` reflections off a four-level register.

    Each branch sees its own transition at its stored detuning in every window.
    """
    times = time_grid(pulse, reg.cavity.kappa, step)
    u = incident_envelope(pulse, times)
    out = []
    for s in (0, 1):
        v = u
        for _ in range(rounds):
            v = propagate_round(v, reg, None, "coupled", transition=s)
        out.append(v)
    return out[0], out[1]
