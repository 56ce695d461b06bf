"""Encoding duration, phase-encoding rate and loss-limited choice of the round number.

Two pulse schemes are compared. The width-fixed scheme keeps ``sigma_omega =
gamma / n_omega``, so the encoding time grows linearly with ``N``. The
width-scaling scheme sets ``sigma_omega = Delta_ref / N_omega`` with the
large-detuning reference ``Delta_ref = 2 N C gamma / pi``, which makes the
duration independent of ``N``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .errors import InfeasibleError, NumericError
from .imperfections import ImperfectionModel
from .optics import RegisterParams
from .outcome import HeraldOutcome
from .protocol import optimize_detuning, solve_detuning
from .pulse import DEFAULT_N_T, SpectralPulse, width_scaling_sigma

DEFAULT_N_OMEGA_FIXED = 5.0
N_OMEGA_RANGE = (1.0, 100.0)
PRESCAN_POINTS = 20


@dataclass(frozen=True)
class RateResult:
    """Rate figure of merit at one operating point.

    Attributes:
        n_omega_star: Width parameter used (``N_omega`` or ``n_omega``).
        rate: Click probability per unit encoding time.
        duration: Encoding time ``N N_t / sigma_omega``.
        outcome: Herald outcome at the operating point.
        feasible: Whether the fidelity constraint could be met.
        delta: Optimized detuning.
        sigma_omega: Spectral width of the pulse.
    """

    n_omega_star: float | None
    rate: float
    duration: float
    outcome: HeraldOutcome | None
    feasible: bool
    delta: float | None = None
    sigma_omega: float | None = None


def encoding_duration(N: int, N_t: float, sigma_omega: float) -> float:
    """Time ``N N_t / sigma_omega`` spent on phase encoding."""
    return N * N_t / sigma_omega


def reference_detuning(C: float, N: int, gamma: float = 1.0) -> float:
    """Large-detuning entangling detuning ``2 N C gamma / pi``."""
    return 2 * N * C * gamma / math.pi


def rate_ratio(n_omega_fixed: float, N_omega_scaled: float, C: float, N: int) -> float:
    """Width-scaling over width-fixed rate at equal click probability."""
    return n_omega_fixed / N_omega_scaled * 2 * C * N / math.pi


def _point(reg, N, N_t, sigma, n_omega, **kw) -> RateResult:
    pulse = SpectralPulse(sigma, 0.0, N_t)
    delta, out = optimize_detuning(reg, pulse, N, **kw)
    t = encoding_duration(N, N_t, sigma)
    return RateResult(n_omega, out.p_total / t, t, out, True, delta, sigma)


def width_fixed_rate(reg: RegisterParams, N: int, N_t: float = DEFAULT_N_T,
                     n_omega: float = DEFAULT_N_OMEGA_FIXED, **kw) -> RateResult:
    """Rate of the width-fixed scheme with the fidelity-optimal detuning."""
    return _point(reg, N, N_t, reg.transition0.gamma / n_omega, n_omega, **kw)


def width_scaling_rate(reg: RegisterParams, N: int, N_omega: float,
                       N_t: float = DEFAULT_N_T, **kw) -> RateResult:
    """Rate of the width-scaling scheme with the fidelity-optimal detuning."""
    ref = reference_detuning(reg.cooperativity(0), N, reg.transition0.gamma)
    return _point(reg, N, N_t, width_scaling_sigma(ref, N_omega), N_omega, **kw)


def max_rate_at_fidelity(reg: RegisterParams, N: int, N_t: float = DEFAULT_N_T,
                         f_threshold: float = 0.99, n_omega_range=N_OMEGA_RANGE,
                         **kw) -> RateResult:
    """Largest width-scaling rate whose port-A fidelity stays above ``f_threshold``.

    A log-spaced pre-scan over ``N_omega`` locates the feasible region; the
    boundary closest to the broadband side is then refined by root finding.
    Every candidate re-optimizes the detuning.
    """
    lo, hi = n_omega_range
    evaluate = lambda n: width_scaling_rate(reg, N, n, N_t, **kw)
    cache: dict[float, RateResult] = {}

    def at(n):
        if n not in cache:
            cache[n] = evaluate(n)
        return cache[n]

    gap = lambda n: at(n).outcome.f_a - f_threshold
    scan = np.geomspace(lo, hi, PRESCAN_POINTS)
    ok = [gap(n) >= 0 for n in scan]
    if not any(ok):
        return RateResult(None, 0.0, math.inf, None, False)
    first = ok.index(True)
    candidates = [at(n) for n, good in zip(scan, ok) if good]
    if first > 0:
        a, b = scan[first - 1], scan[first]
        root = brentq(gap, a, b, xtol=1e-9, rtol=1e-10)
        step = 1e-9 * root
        while gap(root) < 0:
            root += step
            step *= 2
        candidates.append(at(root))
    return max(candidates, key=lambda r: r.rate)


@dataclass(frozen=True)
class RoundsResult:
    """Outcome of the loss-limited round-number search.

    Attributes:
        n_star: Round number with the largest click probability, or ``None``.
        outcome: Outcome at ``n_star``.
        delta: Detuning at ``n_star``.
        feasible: Whether any round number met the fidelity floor.
        table: ``(N, delta, outcome, status)`` for every swept round number.
    """

    n_star: int | None
    outcome: HeraldOutcome | None
    delta: float | None
    feasible: bool
    table: list = field(default_factory=list)


def min_rounds(C: float, mode: str = "reflection", n_cap: int = 1000) -> int:
    """Smallest ``N`` with a strictly feasible entangling condition."""
    for n in range(1, n_cap + 1):
        if solve_detuning(C, n, mode=mode).status == "feasible":
            return n
    raise InfeasibleError(f"no feasible round number up to {n_cap} for C = {C:g}")


def loss_optimal_rounds(reg: RegisterParams, losses=(1.0, 1.0), f_floor: float = 0.99,
                        N_max: int = 12, pulse: SpectralPulse | None = None,
                        objective: str = "max_fidelity_a", loss_model: str = "multiplicative",
                        eta_m: float = 1.0, mismatch: str = "identity") -> RoundsResult:
    """Sweep ``N`` and return the round number maximizing ``P_t`` subject to ``F_A >= f_floor``.

    At each ``N`` the detuning is optimized with ``objective``; the default keeps
    the fidelity-optimal detuning, while ``"max_pt_at_floor"`` trades fidelity
    for probability down to the floor.
    """
    eta_i, eta_r = losses
    model = ImperfectionModel(eta_i, eta_r, eta_m, mismatch, loss_model)
    pulse = pulse or SpectralPulse()
    table = []
    start = min_rounds(reg.cooperativity(0))
    for n in range(start, N_max + 1):
        try:
            delta, out = optimize_detuning(reg, pulse, n, objective, f_floor, model)
        except NumericError as exc:
            table.append((n, None, None, f"numeric: {exc}"))
            continue
        table.append((n, delta, out, "ok" if out.f_a >= f_floor else "below_floor"))
    good = [row for row in table if row[3] == "ok"]
    if not good:
        return RoundsResult(None, None, None, False, table)
    n, delta, out, _ = max(good, key=lambda row: row[2].p_total)
    return RoundsResult(n, out, delta, True, table)
