"""Monte Carlo studies of parameter disorder across two registers.

Each sample perturbs the coupling and decay of three of the four transitions and
the cavity decay of register B by independent Gaussian relative factors. The
reference transition (branch 0 of register A) keeps its nominal values. Every
register is then tuned to the resonant entangling condition, and the outcome is
evaluated with no correction (U1), a phase-only correction (U2), or a full
amplitude and phase correction (U3).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.optimize import brentq

from .errors import ConfigurationError, DomainError, Infeasible, NumericError
from .imperfections import CORRECTION_MODES, path_factors, register_correction
from .optics import CavityParams, RegisterParams, TransitionParams, reflection
from .protocol import (integrals_from_paths, path_amplitudes, solve_detuning,
                       spectral_weight)
from .pulse import DEFAULT_N_POINTS, DEFAULT_SPAN_SIGMAS, SpectralPulse, make_grid

MAX_RESAMPLES = 100
MAX_FAILURE_FRACTION = 0.1

RECORD_COLUMNS = ("sample_id", "N", "correction_mode", "P_t", "F_A", "F_B",
                  "C_0A", "C_1A", "C_0B", "C_1B", "status")


@dataclass(frozen=True)
class DisorderSpec:
    """Disorder ensemble definition.

    Attributes:
        sigma_rel: Relative standard deviation of g, gamma and kappa.
        n_samples: Number of register pairs M.
        seed: Seed of the counter-based generator.
        reference: Register whose cavity and transition 0 give the nominal values.
    """

    sigma_rel: float = 0.2
    n_samples: int = 1000
    seed: int = 0
    reference: RegisterParams = field(default_factory=lambda: RegisterParams.symmetric(2.0, 0.0))

    def __post_init__(self):
        if not self.sigma_rel >= 0:
            raise DomainError("sigma_rel must be non-negative")
        if int(self.n_samples) != self.n_samples or self.n_samples < 1:
            raise DomainError("n_samples must be a positive integer")


def _generator(seed: int, index: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(index,))))


def _factor(rng: np.random.Generator, sigma: float) -> float:
    for _ in range(MAX_RESAMPLES):
        x = 1.0 + sigma * rng.standard_normal()
        if x > 0:
            return x
    raise NumericError(f"no positive draw after {MAX_RESAMPLES} resamples")


def sample_disorder(spec: DisorderSpec, index: int = 0) -> tuple[RegisterParams, RegisterParams]:
    """Perturbed register pair number ``index`` of the ensemble.

    The stream depends only on ``(spec.seed, index)``. Detunings are left at zero.
    """
    rng = _generator(spec.seed, index)
    ref = spec.reference
    g0, gamma0 = ref.transition0.g, ref.transition0.gamma
    cav = ref.cavity
    sigma = spec.sigma_rel

    def transition():
        return TransitionParams(g0 * _factor(rng, sigma), gamma0 * _factor(rng, sigma))

    t0 = TransitionParams(g0, gamma0)
    t1a = transition()
    k = _factor(rng, sigma)
    cav_b = CavityParams(cav.kappa_l * k, cav.kappa_r * k, cav.kappa_i * k)
    t0b, t1b = transition(), transition()
    return RegisterParams(cav, t0, t1a), RegisterParams(cav_b, t0b, t1b)


def _resonant_reflection(cav: CavityParams, g: float, gamma: float, delta):
    atom = gamma + 2j * np.asarray(delta, dtype=float)
    return 1.0 - 2.0 * cav.kappa_l * atom / (cav.kappa * atom + 4.0 * g * g)


def _matched_delta1(abs_r0, C1, gamma1):
    r2 = np.minimum(abs_r0**2, 1 - 1e-16)
    num = np.maximum(r2 * (C1 + 1) ** 2 - (C1 - 1) ** 2, 0.0)
    return -(gamma1 / 2) * np.sqrt(num / (1 - r2))


def tune_register(reg: RegisterParams, N: int, seed_delta: float | None = None):
    """Detunings meeting the resonant entangling condition for an asymmetric register.

    Transition 1 is amplitude-matched to transition 0, and ``Delta_0`` is the largest
    detuning at which the accumulated phase difference reaches pi.

    Returns:
        The tuned register, or :class:`Infeasible`.
    """
    cav, t0, t1 = reg.cavity, reg.transition0, reg.transition1
    if cav.kappa_r != 0 or cav.kappa_i != 0:
        raise ConfigurationError("disorder tuning assumes a lossless single-sided cavity")
    C0, C1 = reg.cooperativity(0), reg.cooperativity(1)
    if seed_delta is None:
        sol = solve_detuning(C0, N, t0.gamma)
        seed_delta = sol.delta_plus if sol.status == "feasible" else 2 * N * C0 * t0.gamma / math.pi
    floor = ((C1 - 1) / (C1 + 1)) ** 2
    d_min = ((floor * (C0 + 1) ** 2 - (C0 - 1) ** 2) / (1 - floor)) if floor < 1 else math.inf
    d_min = t0.gamma / 2 * math.sqrt(max(d_min, 0.0))
    lo = max(d_min, 1e-6 * seed_delta) * (1 + 1e-9)
    hi = 20 * seed_delta
    if not lo < hi:
        return Infeasible("amplitude matching impossible below the search ceiling")

    def phase_error(d0):
        r0 = _resonant_reflection(cav, t0.g, t0.gamma, d0)
        r1 = _resonant_reflection(cav, t1.g, t1.gamma, _matched_delta1(np.abs(r0), C1, t1.gamma))
        return N * (np.angle(-r0) - np.angle(-r1)) - math.pi

    scan = np.geomspace(hi, lo, 400)
    err = phase_error(scan)
    # first crossing from below when coming down from large detuning
    idx = np.nonzero((err[:-1] < 0) & (err[1:] >= 0) & (np.abs(err[1:] - err[:-1]) < 1.0))[0]
    if idx.size == 0:
        return Infeasible("no entangling detuning for this register")
    a, b = scan[idx[0] + 1], scan[idx[0]]
    d0 = brentq(lambda x: float(phase_error(x)), a, b, xtol=1e-13, rtol=1e-14)
    r0 = _resonant_reflection(cav, t0.g, t0.gamma, d0)
    d1 = float(_matched_delta1(abs(r0), C1, t1.gamma))
    return reg.with_detunings(d0, d1)


@dataclass
class DisorderStudy:
    """Per-sample records and per-(N, mode) statistics of a disorder ensemble."""

    spec: DisorderSpec
    records: list = field(default_factory=list)
    summary: list = field(default_factory=list)


def _percentiles(x):
    if len(x) == 0:
        return (math.nan,) * 3
    return tuple(float(v) for v in np.percentile(x, [16, 50, 84]))


def _summarize(records, rounds, modes):
    rows = []
    for n in rounds:
        for mode in modes:
            sel = [r for r in records if r["N"] == n and r["correction_mode"] == mode]
            ok = [r for r in sel if r["status"] == "ok"]
            pt = np.array([r["P_t"] for r in ok])
            ia = np.array([1 - r["F_A"] for r in ok])
            ib = np.array([1 - r["F_B"] for r in ok])
            row = {"N": n, "correction_mode": mode, "n_ok": len(ok), "n_failed": len(sel) - len(ok),
                   "P_t_mean": float(pt.mean()) if len(pt) else math.nan}
            for name, values in (("P_t", pt), ("infid_A", ia), ("infid_B", ib)):
                p16, p50, p84 = _percentiles(values)
                row.update({f"{name}_p16": p16, f"{name}_median": p50, f"{name}_p84": p84})
            rows.append(row)
    return rows


def disorder_study(spec: DisorderSpec, rounds, correction_modes=CORRECTION_MODES,
                   pulse: SpectralPulse | None = None, span_sigmas: float = DEFAULT_SPAN_SIGMAS,
                   n_points: int = DEFAULT_N_POINTS, check_convergence: bool = True) -> DisorderStudy:
    """Run the ensemble for every ``N`` in ``rounds`` and every correction mode.

    Samples whose registers cannot be tuned are recorded with status
    ``tuning_failed`` and left out of the statistics.

    Raises:
        NumericError: If more than 10% of the samples fail at any ``N``, or a
            spectral integral is not grid-converged.
    """
    for mode in correction_modes:
        if mode not in CORRECTION_MODES:
            raise ConfigurationError(f"unknown correction mode {mode!r}")
    pulse = pulse or SpectralPulse()
    grid = make_grid(pulse, span_sigmas, n_points)
    grids = [(grid, spectral_weight(pulse, grid))]
    if check_convergence:
        fine = grid.refined()
        grids.append((fine, spectral_weight(pulse, fine)))
    rounds = [int(n) for n in rounds]
    study = DisorderStudy(spec)
    failures = dict.fromkeys(rounds, 0)
    for i in range(spec.n_samples):
        reg_a, reg_b = sample_disorder(spec, i)
        coop = {"C_0A": reg_a.cooperativity(0), "C_1A": reg_a.cooperativity(1),
                "C_0B": reg_b.cooperativity(0), "C_1B": reg_b.cooperativity(1)}
        for n in rounds:
            tuned = (tune_register(reg_a, n), tune_register(reg_b, n))
            if not all(tuned):
                failures[n] += 1
                for mode in correction_modes:
                    study.records.append({"sample_id": i, "N": n, "correction_mode": mode,
                                          "P_t": math.nan, "F_A": math.nan, "F_B": math.nan,
                                          **coop, "status": "tuning_failed"})
                continue
            ta, tb = tuned
            outcomes = _corrected_outcomes(ta, tb, n, grids, correction_modes)
            for mode, out in zip(correction_modes, outcomes):
                study.records.append({"sample_id": i, "N": n, "correction_mode": mode,
                                      "P_t": out.p_total, "F_A": out.f_a, "F_B": out.f_b,
                                      **coop, "status": "ok"})
    for n, count in failures.items():
        if count > MAX_FAILURE_FRACTION * spec.n_samples:
            raise NumericError(f"{count} of {spec.n_samples} samples failed tuning at N = {n}")
    study.summary = _summarize(study.records, rounds, correction_modes)
    return study


def correction_for(reg_a: RegisterParams, reg_b: RegisterParams, N: int, mode: str):
    """Correction list of the given mode for a tuned register pair."""
    if mode == "U1":
        return ()
    op = register_correction(reflection(reg_a, 0, 0.0), reflection(reg_b, 0, 0.0), N)
    return (op.phase_only(),) if mode == "U2" else (op,)


def _corrected_outcomes(reg_a, reg_b, n, grids, modes):
    ops = {mode: correction_for(reg_a, reg_b, n, mode) for mode in modes}
    results = []
    for grid, weight in grids:
        a0A, a1A = path_amplitudes(reg_a, n, grid.nodes)
        a0B, a1B = path_amplitudes(reg_b, n, grid.nodes)
        row = []
        for mode in modes:
            fa, fb = path_factors(ops[mode])
            row.append(integrals_from_paths(weight, a0A, a1A, a0B, a1B, fa, fb).outcome())
        results.append(row)
    if len(results) == 2:
        for coarse, fine in zip(*results):
            change = coarse.max_relative_change(fine)
            if not change < 1e-6:
                raise NumericError(f"spectral grid not converged (relative change {change:.3g})")
    return results[0]


def with_reference_cooperativity(spec: DisorderSpec, C0: float) -> DisorderSpec:
    """Copy of ``spec`` whose reference register has cooperativity ``C0``."""
    ref = spec.reference
    return replace(spec, reference=RegisterParams.symmetric(C0, 0.0, ref.cavity.kappa,
                                                            ref.transition0.gamma))
