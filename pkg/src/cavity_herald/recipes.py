"""Pinned dataset recipes behind ``cavity-herald reproduce``.

Each recipe returns plot-ready tables (one quantity family per file, tidy
columns) plus the parameters that define it. ``quick=True`` shrinks every
scan so the whole set can be smoke-tested in seconds; the manifest records
the flag.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .disorder import RECORD_COLUMNS, DisorderSpec, correction_for, disorder_study, tune_register
from .errors import ConfigurationError, DegenerateOutcomeError, InfeasibleError, NumericError
from .imperfections import ImperfectionModel, effective_round_coefficient
from .optics import (CavityParams, RegisterParams, TransitionParams, coupling_for_cooperativity,
                     mismatched_reflection, reflection)
from .protocol import (ProtocolConfig, _integrals, herald, monochromatic_outcome,
                       optimize_detuning, solve_detuning)
from .pulse import SpectralPulse, make_grid, spectrum
from .rates import (loss_optimal_rounds, max_rate_at_fidelity, min_rounds, rate_ratio,
                    reference_detuning, width_fixed_rate, width_scaling_rate)
from .three_level import (DDSchedule, effective_sinusoid_amplitude, optimize_stepwise_detuning,
                          refine_sinusoid_amplitude, run_four_level, run_three_level,
                          temporal_herald)

FAILURES = {InfeasibleError: "infeasible", DegenerateOutcomeError: "degenerate",
            NumericError: "numeric_failure"}
ETA_I_LOSS, ETA_R_LOSS = 0.99, 0.9886


@dataclass
class Dataset:
    name: str
    columns: list
    rows: list
    meta: dict = field(default_factory=dict)


@dataclass
class Bundle:
    datasets: list
    parameters: dict


def _status(exc: Exception) -> str:
    for cls, name in FAILURES.items():
        if isinstance(exc, cls):
            return name
    raise exc


def _attempt(fn, *args, **kwargs):
    """``(result, "ok")`` or ``(None, status)`` for the package's numeric failures."""
    try:
        return fn(*args, **kwargs), "ok"
    except (InfeasibleError, DegenerateOutcomeError, NumericError) as exc:
        return None, _status(exc)


def _symmetric(C: float, **kw) -> RegisterParams:
    return RegisterParams.symmetric(C, 0.0, **kw)


def _optimize(C, N, pulse=None, model=None, objective="max_fidelity_a", threshold=0.99):
    return optimize_detuning(_symmetric(C), pulse or SpectralPulse(), N, objective, threshold,
                             model)


def _evaluate(C, N, delta, pulse=None, model=None):
    reg = _symmetric(C).with_detunings(delta, -delta)
    config = ProtocolConfig.identical(reg, N, pulse=pulse or SpectralPulse(),
                                      imperfections=model or ImperfectionModel())
    return herald(config)


def _round_range(C, n_max):
    return range(min_rounds(C), n_max + 1)


def fig2b(seed=0, quick=False):
    C = 1.0
    rounds = range(2, 5) if quick else range(2, 11)
    n_delta = 9 if quick else 41
    curves, optima = [], []
    for N in rounds:
        d_plus = solve_detuning(C, N).delta_plus
        for d in np.linspace(0.6, 1.6, n_delta) * d_plus:
            r0 = complex(reflection(_symmetric(C).with_detunings(d, -d), 0, 0.0))
            mono = monochromatic_outcome(abs(r0), math.atan2((-r0).imag, (-r0).real), N)
            out, status = _attempt(_evaluate, C, N, d)
            curves.append({"N": N, "Delta": d, "infid_mono": 1 - mono.f_a,
                           "infid_gauss": 1 - out.f_a if out else math.nan, "status": status})
        res, status = _attempt(_optimize, C, N)
        optima.append({"N": N, "Delta_closed_form": d_plus,
                       "Delta_star": res[0] if res else math.nan,
                       "infid_gauss": 1 - res[1].f_a if res else math.nan, "status": status})
    return Bundle([Dataset("fig2b_curves", ["N", "Delta", "infid_mono", "infid_gauss", "status"],
                           curves),
                   Dataset("fig2b_optima", ["N", "Delta_closed_form", "Delta_star", "infid_gauss",
                                            "status"], optima)],
                  {"C": C, "sigma_omega": 0.2, "kappa": 200.0, "rounds": list(rounds)})


def _optimum_scan(cs, n_max):
    rows = []
    for C in cs:
        for N in _round_range(C, n_max):
            sol = solve_detuning(C, N)
            res, status = _attempt(_optimize, C, N)
            delta, out = res if res else (math.nan, None)
            r0 = complex(reflection(_symmetric(C).with_detunings(sol.delta_plus, -sol.delta_plus),
                                    0, 0.0))
            rows.append({"C": C, "N": N, "Delta_star": delta,
                         "Delta_line": reference_detuning(C, N),
                         "N_line": math.pi * delta / (2 * C),
                         "infid_A": 1 - out.f_a if out else math.nan,
                         "P_t": out.p_total if out else math.nan,
                         "P_t_mono": abs(r0) ** (2 * N), "status": status})
    return rows


def fig2c(seed=0, quick=False):
    cs, n_max = (0.5, 1.0, 2.0), (6 if quick else 12)
    rows = _optimum_scan(cs, n_max)
    cols = ["C", "N", "Delta_star", "Delta_line", "N_line", "status"]
    return Bundle([Dataset("fig2c", cols, rows)], {"C": list(cs), "N_max": n_max})


def fig2d(seed=0, quick=False):
    cs, n_max = (0.5, 1.0, 2.0), (5 if quick else 12)
    rows = _optimum_scan(cs, n_max)
    return Bundle([Dataset("fig2d", ["C", "N", "Delta_star", "infid_A", "status"], rows)],
                  {"C": list(cs), "N_max": n_max})


def fig2e(seed=0, quick=False):
    cs, n_max = (0.5, 1.0, 2.0), (5 if quick else 12)
    rows = _optimum_scan(cs, n_max)
    return Bundle([Dataset("fig2e", ["C", "N", "Delta_star", "P_t", "P_t_mono", "status"], rows)],
                  {"C": list(cs), "N_max": n_max})


def fig3a(seed=0, quick=False):
    C, N_t = 2.0, 10.0
    rounds = (4, 5) if quick else range(1, 11)
    n_omegas = np.geomspace(1, 100, 5 if quick else 25)
    rows = []
    reg = _symmetric(C)
    for N in rounds:
        for n_om in n_omegas:
            res, status = _attempt(width_scaling_rate, reg, N, n_om, N_t)
            rows.append({"N": N, "N_omega": n_om, "sigma_omega": res.sigma_omega if res else math.nan,
                         "Delta": res.delta if res else math.nan,
                         "infid_A": 1 - res.outcome.f_a if res else math.nan,
                         "P_t": res.outcome.p_total if res else math.nan,
                         "R_pe": res.rate if res else math.nan, "status": status})
    cols = ["N", "N_omega", "sigma_omega", "Delta", "infid_A", "P_t", "R_pe", "status"]
    return Bundle([Dataset("fig3a", cols, rows)], {"C": C, "N_t": N_t})


def fig3b(seed=0, quick=False):
    C, N_t, n_fixed = 2.0, 10.0, 5.0
    rounds = (5,) if quick else range(1, 11)
    thresholds = (0.99,) if quick else (0.99, 0.995, 0.999)
    reg = _symmetric(C)
    rows = []
    for N in rounds:
        fixed, _ = _attempt(width_fixed_rate, reg, N, N_t, n_fixed)
        for f_t in thresholds:
            best, status = _attempt(max_rate_at_fidelity, reg, N, N_t, f_t)
            ok = best is not None and best.feasible
            rows.append({"N": N, "threshold": f_t, "N_omega_star": best.n_omega_star if ok else math.nan,
                         "R_pe": best.rate if ok else math.nan,
                         "R_pe_fixed": fixed.rate if fixed else math.nan,
                         "speedup": best.rate / fixed.rate if ok and fixed else math.nan,
                         "speedup_closed_form": rate_ratio(n_fixed, best.n_omega_star, C, N)
                         if ok else math.nan,
                         "status": status if ok or status != "ok" else "below_threshold"})
    cols = ["N", "threshold", "N_omega_star", "R_pe", "R_pe_fixed", "speedup",
            "speedup_closed_form", "status"]
    return Bundle([Dataset("fig3b", cols, rows)], {"C": C, "N_t": N_t, "n_omega_fixed": n_fixed})


def _four_transition_register(c0, c1, kappa=200.0, gamma=1.0):
    g = lambda c: coupling_for_cooperativity(c, kappa, gamma)
    return RegisterParams(CavityParams(kappa), TransitionParams(g(c0), gamma, 0.0, 0.0),
                          TransitionParams(g(c1), gamma, 0.0, 0.0))


def fig4a(seed=0, quick=False):
    coop = {"C_0A": 1.5, "C_1A": 2.0, "C_0B": 2.5, "C_1B": 3.0}
    reg_a = _four_transition_register(coop["C_0A"], coop["C_1A"])
    reg_b = _four_transition_register(coop["C_0B"], coop["C_1B"])
    rows = []
    for N in (range(2, 5) if quick else range(1, 11)):
        row = {"N": N, "status": "ok"}
        ta, tb = tune_register(reg_a, N), tune_register(reg_b, N)
        ideal, status = _attempt(_optimize, 2.0, N)
        row["infid_A_ideal"] = 1 - ideal[1].f_a if ideal else math.nan
        for mode in ("U1", "U3"):
            if not (ta and tb):
                row.update({f"infid_A_{mode}": math.nan, f"infid_B_{mode}": math.nan,
                            f"P_t_{mode}": math.nan, "status": "tuning_failed"})
                continue
            config = ProtocolConfig(N, (ta, tb), corrections=correction_for(ta, tb, N, mode))
            out, status = _attempt(herald, config)
            row.update({f"infid_A_{mode}": 1 - out.f_a if out else math.nan,
                        f"infid_B_{mode}": 1 - out.f_b if out else math.nan,
                        f"P_t_{mode}": out.p_total if out else math.nan})
            if status != "ok":
                row["status"] = status
        rows.append(row)
    cols = ["N", "infid_A_U1", "infid_B_U1", "infid_A_U3", "infid_B_U3", "infid_A_ideal",
            "P_t_U1", "P_t_U3", "status"]
    return Bundle([Dataset("fig4a", cols, rows)], coop)


def _loss_grid(cs, losses, n_max, eta_m=1.0, mismatch="identity", extra=None):
    grid, best = [], []
    for C in cs:
        res, status = _attempt(loss_optimal_rounds, _symmetric(C), losses, 0.99, n_max,
                               eta_m=eta_m, mismatch=mismatch)
        for n, delta, out, st in (res.table if res else []):
            grid.append({**(extra or {}), "C": C, "N": n,
                         "Delta": math.nan if delta is None else delta,
                         "P_t": out.p_total if out else math.nan,
                         "F_A": out.f_a if out else math.nan, "status": st})
        best.append({**(extra or {}), "C": C, "N_star": res.n_star if res and res.feasible else -1,
                     "Delta_star": res.delta if res and res.feasible else math.nan,
                     "P_t_max": res.outcome.p_total if res and res.feasible else math.nan,
                     "F_A": res.outcome.f_a if res and res.feasible else math.nan,
                     "status": status if status != "ok" or res.feasible else "below_floor"})
    return grid, best


GRID_COLS = ["C", "N", "Delta", "P_t", "F_A", "status"]
BEST_COLS = ["C", "N_star", "Delta_star", "P_t_max", "F_A", "status"]


def fig4b(seed=0, quick=False):
    cs = (1.5, 2.0) if quick else tuple(np.round(np.linspace(0.5, 3.0, 11), 6))
    n_max = 6 if quick else 12
    grid, best = _loss_grid(cs, (ETA_I_LOSS, ETA_R_LOSS), n_max)
    return Bundle([Dataset("fig4b_grid", GRID_COLS, grid), Dataset("fig4b_peak", BEST_COLS, best)],
                  {"eta_i": ETA_I_LOSS, "eta_r": ETA_R_LOSS, "f_floor": 0.99, "N_max": n_max,
                   "C": list(cs)})


def fig4c(seed=0, quick=False):
    C = 2.0
    etas = (0.9,) if quick else (0.85, 0.9, 0.95, 1.0)
    n_max = 6 if quick else 12
    rows = []
    for eta_m in etas:
        grid, _ = _loss_grid((C,), (ETA_I_LOSS, ETA_R_LOSS), n_max, eta_m, "selective_pi",
                             {"eta_m": eta_m})
        rows.extend(grid)
    return Bundle([Dataset("fig4c", ["eta_m"] + GRID_COLS, rows)],
                  {"C": C, "eta_i": ETA_I_LOSS, "eta_r": ETA_R_LOSS, "mismatch": "selective_pi",
                   "eta_m": list(etas)})


def _sinusoid_scan(C, rounds, n_ts, sigma_omega=0.2):
    reg = _symmetric(C, mode="three_level")
    rows = []
    for N in rounds:
        for n_t in n_ts:
            pulse = SpectralPulse(sigma_omega, 0.0, n_t)
            d_step, spectral = optimize_stepwise_detuning(reg, pulse, N)
            step_out = temporal_herald(*run_three_level(
                pulse, DDSchedule.for_pulse(pulse, N, "stepwise", d_step), reg))
            amp, out = refine_sinusoid_amplitude(reg, pulse, N, d_step)
            rows.append({"N": N, "N_t": n_t, "Delta_step": d_step, "Delta_tilde": amp,
                         "ratio": amp / d_step, "ratio_formula": effective_sinusoid_amplitude(1.0, n_t),
                         "infid_sin": 1 - out.f_a, "infid_step": 1 - step_out.f_a,
                         "infid_step_spectral": 1 - spectral.f_a, "P_t_sin": out.p_total})
    return rows


SIN_COLS = ["N", "N_t", "Delta_step", "Delta_tilde", "ratio", "ratio_formula", "infid_sin",
            "infid_step", "infid_step_spectral", "P_t_sin"]


def fig5c(seed=0, quick=False):
    C = 2.0
    rounds = (2,) if quick else range(1, 9)
    n_ts = (12.0,) if quick else (12.0, 16.0, 20.0)
    rows = _sinusoid_scan(C, rounds, n_ts)
    reg = _symmetric(C, mode="three_level")
    step_rows = []
    for N in rounds:
        pulse = SpectralPulse(0.2, 0.0, 10.0)
        d, _ = optimize_stepwise_detuning(reg, pulse, N)
        out = temporal_herald(*run_three_level(pulse, DDSchedule.for_pulse(pulse, N, "stepwise", d),
                                               reg))
        step_rows.append({"N": N, "N_t": 10.0, "Delta_step": d, "infid_step": 1 - out.f_a})
    return Bundle([Dataset("fig5c_sinusoid", SIN_COLS, rows),
                   Dataset("fig5c_stepwise", ["N", "N_t", "Delta_step", "infid_step"], step_rows)],
                  {"C": C, "sigma_omega": 0.2, "N_t": list(n_ts), "rounds": list(rounds)})


def s1(seed=0, quick=False):
    C, N, delta = 2.0, 4, 4.9873
    pulse = SpectralPulse()
    reg = _symmetric(C).with_detunings(delta, -delta)
    grid = make_grid(pulse, 10.0, 401 if quick else 2001)
    w = grid.nodes
    r0, r1 = reflection(reg, 0, w), reflection(reg, 1, w)
    refl = [{"omega": x, "abs_r0": abs(a), "abs_r1": abs(b), "abs_r0_N": abs(a) ** N,
             "abs_r1_N": abs(b) ** N} for x, a, b in zip(w, r0, r1)]
    c0, c1 = complex(reflection(reg, 0, 0.0)), complex(reflection(reg, 1, 0.0))
    phase = [{"n": n, "relative_phase": n * math.atan2((c0 / c1).imag, (c0 / c1).real)}
             for n in range(1, 2 * N + 1)]
    u = spectrum(pulse, w)
    f0, f1 = u * r0**N, u * r1**N
    env = [{"omega": x, "input": float(np.real(ui)), "re_f0": a.real, "im_f0": a.imag,
            "re_f1": b.real, "im_f1": b.imag} for x, ui, a, b in zip(w, u, f0, f1)]
    return Bundle([Dataset("s1_reflection", list(refl[0]), refl),
                   Dataset("s1_phase", ["n", "relative_phase"], phase),
                   Dataset("s1_envelope", list(env[0]), env)],
                  {"C": C, "N": N, "Delta": delta, "sigma_omega": 0.2, "kappa": 200.0})


def s2(seed=0, quick=False):
    C, N = 2.0, 4
    n_omegas = (5.0,) if quick else (3.0, 5.0, 8.0)
    n_ts = (4.0, 10.0) if quick else (4.0, 6.0, 8.0, 10.0, 12.0)
    reg = _symmetric(C)
    duration = []
    for n_om in n_omegas:
        delta, ref = _optimize(C, N, SpectralPulse(1.0 / n_om))
        tuned = reg.with_detunings(delta, -delta)
        for n_t in n_ts:
            pulse = SpectralPulse(1.0 / n_om, 0.0, n_t)
            u0, u1 = run_four_level(tuned, pulse, N)
            out = temporal_herald(u0, u1)
            duration.append({"n_omega": n_om, "N_t": n_t, "Delta": delta, "infid_time": 1 - out.f_a,
                             "P_t_time": out.p_total, "infid_freq": 1 - ref.f_a,
                             "P_t_freq": ref.p_total})
    scaling = []
    for C_s in ((2.0,) if quick else (1.0, 2.0)):
        r = _symmetric(C_s)
        for N_s in (range(2, 4) if quick else _round_range(C_s, 10)):
            fixed, _ = _attempt(width_fixed_rate, r, N_s, 10.0, 5.0)
            for scheme in ("fixed", 10.0, 15.0, 20.0):
                res = fixed if scheme == "fixed" else _attempt(width_scaling_rate, r, N_s, scheme)[0]
                if res is None:
                    continue
                config = ProtocolConfig.identical(r.with_detunings(res.delta, -res.delta), N_s,
                                                  pulse=SpectralPulse(res.sigma_omega))
                S = _integrals(config, config.grid()).pp
                scaling.append({"C": C_s, "N": N_s, "scheme": "width_fixed" if scheme == "fixed"
                                else "width_scaling", "N_omega": 5.0 if scheme == "fixed" else scheme,
                                "sigma_omega": res.sigma_omega, "infid_A": 1 - res.outcome.f_a,
                                "P_t": res.outcome.p_total, "S": S, "R_pe": res.rate,
                                "ratio_to_fixed": res.rate / fixed.rate if fixed else math.nan,
                                "ratio_closed_form": 1.0 if scheme == "fixed"
                                else rate_ratio(5.0, scheme, C_s, N_s)})
    return Bundle([Dataset("s2_duration", list(duration[0]), duration),
                   Dataset("s2_width_scaling", list(scaling[0]), scaling)],
                  {"C_duration": C, "N_duration": N, "n_omega": list(n_omegas), "N_t": list(n_ts)})


def s3(seed=0, quick=False):
    M = 40 if quick else 1000
    rounds = (2, 3) if quick else tuple(range(2, 11))
    spec = DisorderSpec(0.2, M, seed)
    study = disorder_study(spec, rounds)
    return Bundle([Dataset("s3_records", list(RECORD_COLUMNS), study.records),
                   Dataset("s3_summary", list(study.summary[0]), study.summary)],
                  {"sigma_rel": 0.2, "M": M, "C_0": 2.0, "rounds": list(rounds), "seed": seed})


def s4(seed=0, quick=False):
    C = 1.5
    ratio = []
    base = _symmetric(C)
    for d in np.linspace(1.0, 30.0, 8 if quick else 59):
        reg = base.with_detunings(d, -d)
        r_ideal = abs(complex(reflection(reg, 0, 0.0))) ** 2
        for eta_i in (0.99, 0.98):
            model = ImperfectionModel(eta_i=eta_i, loss_model="exact")
            r = abs(complex(effective_round_coefficient(reg, 0, 0.0, model))) ** 2
            ratio.append({"Delta": d, "eta_i": eta_i, "ratio": r / r_ideal, "eta_i_4": eta_i**4})
    outcomes = []
    etas_i = (0.99,) if quick else (0.98, 0.99, 1.0)
    etas_r = (0.9773,) if quick else (0.9551, 0.9773, 0.9886, 1.0)
    for eta_i in etas_i:
        for eta_r in etas_r:
            model = ImperfectionModel(eta_i, eta_r)
            for N in (range(2, 4) if quick else _round_range(C, 10)):
                res, status = _attempt(_optimize, C, N, model=model)
                outcomes.append({"eta_i": eta_i, "eta_r": eta_r, "N": N,
                                 "Delta": res[0] if res else math.nan,
                                 "F_A": res[1].f_a if res else math.nan,
                                 "P_t": res[1].p_total if res else math.nan, "status": status})
    return Bundle([Dataset("s4_ratio", ["Delta", "eta_i", "ratio", "eta_i_4"], ratio),
                   Dataset("s4_outcomes", ["eta_i", "eta_r", "N", "Delta", "F_A", "P_t", "status"],
                           outcomes)],
                  {"C": C, "eta_i": list(etas_i), "eta_r": list(etas_r)})


def s5(seed=0, quick=False):
    cs = (1.5, 2.0) if quick else tuple(np.round(np.linspace(0.5, 3.0, 11), 6))
    n_max = 6 if quick else 12
    grid, _ = _loss_grid(cs, (ETA_I_LOSS, ETA_R_LOSS), n_max)
    best = []
    etas_i = (0.99,) if quick else (1.0, 0.995, 0.99, 0.98)
    for eta_i in etas_i:
        best.extend(_loss_grid(cs, (eta_i, 0.9773), n_max, extra={"eta_i": eta_i})[1])
    return Bundle([Dataset("s5_grid", GRID_COLS, grid),
                   Dataset("s5_peak", ["eta_i"] + BEST_COLS, best)],
                  {"grid_eta_i": ETA_I_LOSS, "grid_eta_r": ETA_R_LOSS, "peak_eta_r": 0.9773,
                   "peak_eta_i": list(etas_i), "C": list(cs), "N_max": n_max})


def mismatch_detuning(C: float, N: int, eta_m: float, strategy: str, gamma: float = 1.0):
    """Largest detuning with ``arg(-r_tilde_0(0)) = pi / 2N`` under mode mismatch.

    Returns ``None`` when no such detuning exists in ``(0, 1000 gamma]``.
    """
    base = _symmetric(C, gamma=gamma)
    target = math.pi / (2 * N)

    def f(d):
        r = complex(mismatched_reflection(reflection(base.with_detunings(d, -d), 0, 0.0),
                                          eta_m, strategy))
        return math.atan2(-r.imag, -r.real) - target

    ds = np.geomspace(1000.0 * gamma, 1e-3 * gamma, 600)
    values = [f(d) for d in ds]
    for (d_hi, v_hi), (d_lo, v_lo) in zip(zip(ds, values), zip(ds[1:], values[1:])):
        # ignore branch jumps of the phase near +-pi
        if v_hi < 0 <= v_lo and abs(v_lo - v_hi) < math.pi:
            return brentq(f, d_lo, d_hi, xtol=1e-12)
    return None


def s6(seed=0, quick=False):
    C, eta_m = 2.0, 0.9
    rows = []
    for N in (range(2, 5) if quick else range(1, 13)):
        row = {"N": N}
        for label, strategy, eta in (("sel", "selective_pi", eta_m), ("sep", "separate", eta_m),
                                     ("id", "identity", eta_m), ("ideal", "identity", 1.0)):
            d = mismatch_detuning(C, N, eta, strategy)
            if d is None:
                row.update({f"Delta_{label}": math.nan, f"abs_r_{label}": math.nan})
                continue
            reg = _symmetric(C).with_detunings(d, -d)
            r = mismatched_reflection(reflection(reg, 0, 0.0), eta, strategy)
            row.update({f"Delta_{label}": d, f"abs_r_{label}": abs(complex(r))})
        rows.append(row)
    cols = ["N"] + [f"{k}_{l}" for l in ("sel", "sep", "id", "ideal") for k in ("Delta", "abs_r")]
    return Bundle([Dataset("s6", cols, rows)], {"C": C, "eta_m": eta_m})


def s7(seed=0, quick=False):
    cs = (2.0,) if quick else tuple(np.round(np.linspace(0.5, 3.0, 11), 6))
    etas = (0.9,) if quick else (0.85, 0.9, 0.95, 1.0)
    n_max = 5 if quick else 12
    best = []
    for eta_m in etas:
        best.extend(_loss_grid(cs, (ETA_I_LOSS, ETA_R_LOSS), n_max, eta_m, "selective_pi",
                               {"eta_m": eta_m})[1])
    return Bundle([Dataset("s7", ["eta_m"] + BEST_COLS, best)],
                  {"eta_i": ETA_I_LOSS, "eta_r": ETA_R_LOSS, "mismatch": "selective_pi",
                   "eta_m": list(etas), "C": list(cs)})


def s8(seed=0, quick=False):
    C, N = 2.0, 4
    n_ts = (12.0,) if quick else (4.0, 6.0, 8.0, 10.0, 12.0, 16.0, 20.0)
    rows = _sinusoid_scan(C, (N,), n_ts)
    return Bundle([Dataset("s8", SIN_COLS, rows)], {"C": C, "N": N, "N_t": list(n_ts)})


FIGURES = {
    "fig2b": fig2b, "fig2c": fig2c, "fig2d": fig2d, "fig2e": fig2e, "fig3a": fig3a,
    "fig3b": fig3b, "fig4a": fig4a, "fig4b": fig4b, "fig4c": fig4c, "fig5c": fig5c,
    "s1": s1, "s2": s2, "s3": s3, "s4": s4, "s5": s5, "s6": s6, "s7": s7, "s8": s8,
}


def run_recipe(figure: str, seed: int = 0, quick: bool = False) -> Bundle:
    """Run the recipe registered under ``figure``."""
    if figure not in FIGURES:
        raise ConfigurationError(f"unknown figure id {figure!r}; choose from {sorted(FIGURES)}")
    return FIGURES[figure](seed=seed, quick=quick)
