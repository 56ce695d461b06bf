"""Command-line front end.

Every subcommand writes one table (CSV with a ``#`` JSON header, or JSON) to
``--out`` (default standard output). Exit codes: 0 success, 2 usage or invalid
configuration, 3 infeasible configuration, 4 numeric failure.
"""

from __future__ import annotations

import argparse
import itertools
import json
import math
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import __version__
from .config import OPTIMIZE_CHOICES, RunConfig, load_config
from .disorder import RECORD_COLUMNS, DisorderSpec, disorder_study
from .errors import (ConfigurationError, DegenerateOutcomeError, DomainError, InfeasibleError,
                     NumericError)
from .imperfections import (averaged_phase_noise_fidelity, monte_carlo_phase_noise_fidelity,
                            phase_averaged_outcome, rms_length_scaling, small_noise_fidelity)
from .io import write_table
from .optics import RegisterParams, cooperativity, empty_cavity_reflection, reflection
from .protocol import ProtocolConfig, _integrals, herald, optimize_detuning, solve_detuning
from .pulse import SpectralPulse, make_grid, width_scaling_sigma
from .rates import (DEFAULT_N_OMEGA_FIXED, encoding_duration, loss_optimal_rounds,
                    max_rate_at_fidelity, min_rounds, rate_ratio, reference_detuning,
                    width_fixed_rate)
from .three_level import (DDSchedule, effective_sinusoid_amplitude, frequency_domain_three_level,
                          optimize_stepwise_detuning, refine_sinusoid_amplitude, run_three_level,
                          temporal_herald)

EXIT_OK, EXIT_USAGE, EXIT_INFEASIBLE, EXIT_NUMERIC = 0, 2, 3, 4
THREADS_ENV = "CAVITY_HERALD_THREADS"
OBJECTIVE_FOR = {"fidelity": "max_fidelity_a", "pt_floor": "max_pt_at_floor"}

# (flag, config key, type, help)
CONFIG_FLAGS = [
    ("--N", "protocol.rounds", int, "number of encoding rounds (default: smallest feasible)"),
    ("--mode", "protocol.mode", str, "reflection or transmission"),
    ("--C", "protocol.cooperativity", float, "cooperativity of both transitions"),
    ("--g", "protocol.coupling", float, "coupling rate; overrides --C"),
    ("--kappa", "protocol.kappa", float, "total cavity decay rate"),
    ("--gamma", "protocol.gamma", float, "total transition decay rate"),
    ("--delta", "protocol.delta", float, "detuning of transition 0 (transition 1 at -delta)"),
    ("--sigma-omega", "protocol.sigma_omega", float, "spectral width of the photon"),
    ("--n-t", "protocol.n_t", float, "window length in temporal widths"),
    ("--optimize", "protocol.optimize", str, "detuning choice: none, fidelity or pt_floor"),
    ("--threshold", "protocol.threshold", float, "fidelity floor"),
    ("--root", "protocol.root", str, "closed-form root: plus or minus"),
    ("--eta-i", "imperfections.eta_i", float, "cavity escape efficiency"),
    ("--eta-r", "imperfections.eta_r", float, "transmission of one external cycle"),
    ("--eta-m", "imperfections.eta_m", float, "fiber-cavity mode overlap"),
    ("--mismatch", "imperfections.mismatch", str, "identity, separate or selective_pi"),
    ("--loss-model", "imperfections.loss_model", str, "multiplicative or exact"),
    ("--delta0", "imperfections.delta_0", float, "static interferometer phase offset"),
    ("--sigma-delta", "imperfections.sigma_delta", float, "interferometer phase jitter"),
    ("--grid-span", "grid.span_sigmas", float, "spectral grid half-width in sigma_omega"),
    ("--grid-points", "grid.n_points", int, "number of spectral grid points"),
    ("--format", "output.format", str, "csv or json"),
    ("--out", "output.path", str, "output path ('-' for standard output)"),
    ("--seed", "seed", int, "random seed"),
]

POINT_COLUMNS = ["C", "N", "Delta", "sigma_omega", "N_omega", "eta_i", "eta_r", "eta_m",
                 "P_A", "P_B", "P_t", "F_A", "F_B", "R_pe", "feasible", "status"]
PHASE_COLUMNS = ["P_A_avg", "P_B_avg", "F_A_avg", "F_B_avg"]
SWEEP_AXES = {
    "C": ("protocol.cooperativity", float),
    "N": ("protocol.rounds", int),
    "Delta": ("protocol.delta", float),
    "eta_i": ("imperfections.eta_i", float),
    "eta_r": ("imperfections.eta_r", float),
    "eta_m": ("imperfections.eta_m", float),
    "N_omega": (None, float),
}


class UsageError(ConfigurationError):
    """Invalid flag combination."""


def _dest(key: str) -> str:
    return "cfg__" + key.replace(".", "__")


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="strict JSON configuration file")
    for flag, key, typ, text in CONFIG_FLAGS:
        common.add_argument(flag, dest=_dest(key), type=typ, default=None, help=text)
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cavity-herald",
                                     description="Multi-round cavity phase-encoding simulator.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    common = _common_parser()

    p = sub.add_parser("reflect", parents=[common], help="reflection spectra of one register")
    p.add_argument("--transitions", default="0,1", help="comma-separated spin indices")

    sub.add_parser("herald", parents=[common], help="single-point herald evaluation")

    p = sub.add_parser("sweep", parents=[common], help="Cartesian-product parameter sweep")
    p.add_argument("--axis", action="append", default=[], metavar="NAME=SPEC",
                   help="NAME=v1,v2,... or NAME=start:stop:num; NAME in "
                        + ", ".join(SWEEP_AXES))

    p = sub.add_parser("optimize-rate", parents=[common],
                       help="width-scaling rate at a fidelity floor")
    p.add_argument("--n-omega-fixed", type=float, default=DEFAULT_N_OMEGA_FIXED,
                   help="width-fixed comparison n_omega")
    p.add_argument("--n-omega-range", default="1:100", help="search range lo:hi for N_omega")
    p.add_argument("--over-rounds", type=int, default=None, metavar="N_MAX",
                   help="instead, scan N up to N_MAX and report the loss-optimal round number")

    p = sub.add_parser("disorder", parents=[common], help="register disorder ensemble")
    p.add_argument("--samples", type=int, default=1000, help="ensemble size M")
    p.add_argument("--sigma-rel", type=float, default=0.2, help="relative spread of g, gamma, kappa")
    p.add_argument("--rounds", default="2,3,4,5,6,7,8,9,10", help="comma-separated N values")
    p.add_argument("--corrections", default="U1,U2,U3", help="comma-separated correction modes")
    p.add_argument("--summary", action="store_true", help="emit percentile summary instead")

    p = sub.add_parser("phase-noise", parents=[common], help="interferometer phase-noise fidelity")
    p.add_argument("--samples", type=int, default=100000, help="Monte Carlo draws")
    p.add_argument("--length", type=float, default=None, help="target link length")
    p.add_argument("--ref-length", type=float, default=None, help="length the rms refers to")

    p = sub.add_parser("three-level", parents=[common], help="time-domain three-level run")
    p.add_argument("--modulation", choices=("stepwise", "sinusoid"), default=None)
    p.add_argument("--amplitude", type=float, default=None, help="modulation amplitude")
    p.add_argument("--refine", action="store_true", default=None,
                   help="refine the sinusoid amplitude by time-domain optimization")
    p.add_argument("--richardson", action="store_true", default=None,
                   help="check time-step convergence")
    p.add_argument("--dump-envelopes", default=None, metavar="PATH",
                   help="write per-window envelopes to PATH")
    p.add_argument("--dump-stride", type=int, default=10, help="sample stride of the dump")

    from .recipes import FIGURES
    p = sub.add_parser("reproduce", help="run a pinned figure recipe")
    p.add_argument("figure", choices=sorted(FIGURES))
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--quick", action="store_true", help="reduced grid sizes for smoke tests")
    return parser


def run_config(args) -> RunConfig:
    """Merge the configuration file (if any) with command-line overrides."""
    base = load_config(args.config) if getattr(args, "config", None) else RunConfig()
    overrides = {key: getattr(args, _dest(key)) for _, key, _, _ in CONFIG_FLAGS
                 if hasattr(args, _dest(key))}
    if overrides.get("protocol.cooperativity") is not None and overrides.get("protocol.coupling") is None:
        # an explicit --C wins over a coupling from the file
        base = replace(base, protocol=replace(base.protocol, coupling=None))
    for name in ("modulation", "amplitude", "refine", "richardson"):
        value = getattr(args, name, None)
        if value is not None:
            overrides[f"schedule.{name}"] = value
    cfg = base.override(overrides)
    if cfg.protocol.optimize not in OPTIMIZE_CHOICES:
        raise UsageError(f"--optimize must be one of {OPTIMIZE_CHOICES}")
    return cfg


def _cooperativity(cfg: RunConfig) -> float:
    p = cfg.protocol
    if p.coupling is not None:
        return cooperativity(p.coupling, p.kappa, p.gamma)
    return p.cooperativity


def _register(cfg: RunConfig, delta: float = 0.0, mode: str = "four_level") -> RegisterParams:
    p = cfg.protocol
    return RegisterParams.symmetric(_cooperativity(cfg), delta, p.kappa, p.gamma,
                                    two_sided=p.mode == "transmission", mode=mode)


def _pulse(cfg: RunConfig, sigma: float | None = None) -> SpectralPulse:
    return SpectralPulse(cfg.protocol.sigma_omega if sigma is None else sigma, 0.0,
                         cfg.protocol.n_t)


def _rounds(cfg: RunConfig, C: float) -> int:
    p = cfg.protocol
    return p.rounds if p.rounds is not None else min_rounds(C, p.mode)


def _feasible_solution(C, N, cfg):
    p = cfg.protocol
    if not C > 0:
        raise InfeasibleError(f"infeasible: C = {C:g} violates the bound C >= sin(pi/2N)")
    sol = solve_detuning(C, N, p.gamma, p.mode)
    if not sol:
        raise InfeasibleError(sol.message)
    return sol


def evaluate_point(cfg: RunConfig, n_omega: float | None = None) -> dict:
    """Resolve ``N``, ``sigma_omega`` and ``Delta`` and evaluate one herald attempt.

    Raises the package exceptions on failure; :func:`sweep_point` turns them into
    status values.
    """
    p = cfg.protocol
    C = _cooperativity(cfg)
    N = _rounds(cfg, C)
    sol = _feasible_solution(C, N, cfg)
    ref = reference_detuning(C, N, p.gamma)
    sigma = width_scaling_sigma(ref, n_omega) if n_omega is not None else p.sigma_omega
    pulse = _pulse(cfg, sigma)
    model = cfg.imperfections.model()
    reg = _register(cfg)
    grid_kw = dict(span_sigmas=cfg.grid.span_sigmas, n_points=cfg.grid.n_points)
    if p.delta is not None:
        delta = p.delta
    elif p.optimize == "none":
        delta = sol.select(p.root)
    else:
        delta, _ = optimize_detuning(reg, pulse, N, OBJECTIVE_FOR[p.optimize], p.threshold,
                                     model, p.mode, **grid_kw)
    config = ProtocolConfig.identical(reg.with_detunings(delta, -delta), N, pulse=pulse,
                                      mode=p.mode, imperfections=model, **grid_kw)
    out = herald(config)
    duration = encoding_duration(N, p.n_t, sigma)
    row = {"C": C, "N": N, "Delta": delta, "sigma_omega": sigma, "N_omega": ref / sigma,
           "eta_i": model.eta_i, "eta_r": model.eta_r, "eta_m": model.eta_m,
           "P_A": out.p_a, "P_B": out.p_b, "P_t": out.p_total, "F_A": out.f_a, "F_B": out.f_b,
           "R_pe": out.p_total / duration, "feasible": bool(out.f_a >= p.threshold),
           "status": "ok"}
    if not model.phase_noise.is_trivial:
        ints = _integrals(config, config.grid())
        avg = phase_averaged_outcome(ints.pp, ints.mp, model.phase_noise)
        row.update({"P_A_avg": avg.p_a, "P_B_avg": avg.p_b, "F_A_avg": avg.f_a,
                    "F_B_avg": avg.f_b})
    return row


def point_columns(cfg: RunConfig) -> list:
    phase = not cfg.imperfections.model().phase_noise.is_trivial
    return POINT_COLUMNS + (PHASE_COLUMNS if phase else [])


def sweep_point(task) -> dict:
    """Evaluate one sweep point; failures become a status value."""
    cfg, point = task
    if "C" in point:
        cfg = replace(cfg, protocol=replace(cfg.protocol, coupling=None))
    cfg = cfg.override({SWEEP_AXES[k][0]: v for k, v in point.items() if SWEEP_AXES[k][0]})
    try:
        return evaluate_point(cfg, point.get("N_omega"))
    except InfeasibleError:
        status = "infeasible"
    except DegenerateOutcomeError:
        status = "degenerate"
    except NumericError:
        status = "numeric_failure"
    except (ConfigurationError, DomainError):
        status = "invalid"
    row = dict.fromkeys(point_columns(cfg), math.nan)
    row.update({"C": _cooperativity(cfg), "N": cfg.protocol.rounds, "Delta": cfg.protocol.delta,
                "eta_i": cfg.imperfections.eta_i, "eta_r": cfg.imperfections.eta_r,
                "eta_m": cfg.imperfections.eta_m, "N_omega": point.get("N_omega"),
                "feasible": False, "status": status})
    return {k: (math.nan if v is None else v) for k, v in row.items()}


def parse_axis(text: str):
    """Parse ``NAME=v1,v2`` or ``NAME=start:stop:num`` into ``(name, values)``."""
    name, sep, spec = text.partition("=")
    if not sep or name not in SWEEP_AXES:
        raise UsageError(f"bad axis {text!r}; expected NAME=SPEC with NAME in {list(SWEEP_AXES)}")
    typ = SWEEP_AXES[name][1]
    try:
        if ":" in spec:
            start, stop, num = spec.split(":")
            values = np.linspace(float(start), float(stop), int(num)).tolist()
            if typ is int:
                values = [int(round(v)) for v in values]
        else:
            values = [typ(v) for v in spec.split(",") if v != ""]
    except ValueError as exc:
        raise UsageError(f"bad axis values in {text!r}: {exc}") from exc
    if not values:
        raise UsageError(f"axis {name} has no values")
    return name, values


def _workers(n_tasks: int) -> int:
    env = os.environ.get(THREADS_ENV)
    limit = os.cpu_count() or 1
    if env:
        try:
            limit = max(1, int(env))
        except ValueError as exc:
            raise UsageError(f"{THREADS_ENV} must be an integer") from exc
    return max(1, min(limit, n_tasks))


def run_sweep(cfg: RunConfig, axes) -> list:
    """Evaluate the Cartesian product of ``axes`` in lexicographic order."""
    names = [n for n, _ in axes]
    if len(set(names)) != len(names):
        raise UsageError("each axis may appear only once")
    tasks = [(cfg, dict(zip(names, combo))) for combo in
             itertools.product(*(values for _, values in axes))]
    workers = _workers(len(tasks))
    if workers == 1:
        return [sweep_point(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(sweep_point, tasks, chunksize=max(1, len(tasks) // (4 * workers))))


def _meta(command: str, cfg: RunConfig, **extra) -> dict:
    config = cfg.to_dict()
    # the destination does not change the result, so identical runs give identical bytes
    del config["output"]["path"]
    return {"command": command, "version": __version__, "config": config,
            "layers": cfg.imperfections.model().layers(), **extra}


def _emit(cfg: RunConfig, columns, rows, meta) -> None:
    write_table(cfg.output.path, columns, rows, meta, cfg.output.format)


def cmd_reflect(args, cfg: RunConfig) -> None:
    p = cfg.protocol
    try:
        spins = [int(s) for s in args.transitions.split(",")]
    except ValueError as exc:
        raise UsageError("--transitions must be comma-separated integers") from exc
    if any(s not in (0, 1) for s in spins) or not spins:
        raise UsageError("--transitions accepts 0 and 1")
    C = _cooperativity(cfg)
    delta = p.delta
    if delta is None:
        N = p.rounds or (min_rounds(C) if C > 0 else 1)
        sol = solve_detuning(C, N, p.gamma) if C > 0 else None
        delta = sol.delta_plus if sol else 0.0
    reg = _register(cfg, delta)
    grid = make_grid(_pulse(cfg), cfg.grid.span_sigmas, cfg.grid.n_points)
    w = grid.nodes
    columns, data = ["omega"], [w]
    for s in spins:
        r = reflection(reg, s, w) if reg.coupling(s) > 0 else empty_cavity_reflection(reg.cavity, w)
        columns += [f"re_r{s}", f"im_r{s}", f"abs2_r{s}", f"arg_r{s}"]
        data += [r.real, r.imag, np.abs(r) ** 2, np.angle(r)]
    rows = list(zip(*(np.asarray(d, float).tolist() for d in data)))
    _emit(cfg, columns, rows, _meta("reflect", cfg, delta=delta, cooperativity=C))


def cmd_herald(args, cfg: RunConfig) -> None:
    row = evaluate_point(cfg)
    _emit(cfg, point_columns(cfg), [row], _meta("herald", cfg))


def cmd_sweep(args, cfg: RunConfig) -> None:
    if not args.axis:
        raise UsageError("sweep needs at least one --axis")
    axes = [parse_axis(a) for a in args.axis]
    rows = run_sweep(cfg, axes)
    _emit(cfg, point_columns(cfg), rows,
          _meta("sweep", cfg, axes={n: v for n, v in axes}))


def _range(text):
    try:
        lo, hi = (float(v) for v in text.split(":"))
    except ValueError as exc:
        raise UsageError(f"bad range {text!r}; expected lo:hi") from exc
    if not 0 < lo < hi:
        raise UsageError("range must satisfy 0 < lo < hi")
    return lo, hi


def cmd_optimize_rate(args, cfg: RunConfig) -> None:
    p = cfg.protocol
    C = _cooperativity(cfg)
    reg = _register(cfg)
    model = cfg.imperfections.model()
    grid_kw = dict(span_sigmas=cfg.grid.span_sigmas, n_points=cfg.grid.n_points)
    if args.over_rounds is not None:
        res = loss_optimal_rounds(reg, (model.eta_i, model.eta_r), p.threshold, args.over_rounds,
                                  _pulse(cfg), OBJECTIVE_FOR.get(p.optimize, "max_fidelity_a"),
                                  model.loss_model, model.eta_m, model.mismatch)
        columns = ["N", "Delta", "P_t", "F_A", "F_B", "status", "optimal"]
        rows = []
        for n, delta, out, status in res.table:
            rows.append({"N": n, "Delta": math.nan if delta is None else delta,
                         "P_t": out.p_total if out else math.nan,
                         "F_A": out.f_a if out else math.nan,
                         "F_B": out.f_b if out else math.nan,
                         "status": status, "optimal": n == res.n_star})
        _emit(cfg, columns, rows, _meta("optimize-rate", cfg, n_star=res.n_star, cooperativity=C))
        return
    N = _rounds(cfg, C)
    _feasible_solution(C, N, cfg)
    kw = dict(imperfections=model, mode=p.mode, **grid_kw)
    best = max_rate_at_fidelity(reg, N, p.n_t, p.threshold, _range(args.n_omega_range), **kw)
    fixed = width_fixed_rate(reg, N, p.n_t, args.n_omega_fixed, **kw)
    columns = ["C", "N", "N_t", "N_omega", "Delta", "sigma_omega", "P_t", "F_A", "R_pe",
               "feasible", "R_pe_fixed", "F_A_fixed", "speedup", "speedup_closed_form"]
    if best.feasible:
        row = {"C": C, "N": N, "N_t": p.n_t, "N_omega": best.n_omega_star, "Delta": best.delta,
               "sigma_omega": best.sigma_omega, "P_t": best.outcome.p_total,
               "F_A": best.outcome.f_a, "R_pe": best.rate, "feasible": True,
               "speedup_closed_form": rate_ratio(args.n_omega_fixed, best.n_omega_star, C, N)}
    else:
        row = {c: math.nan for c in columns}
        row.update({"C": C, "N": N, "N_t": p.n_t, "feasible": False, "R_pe": 0.0})
    row.update({"R_pe_fixed": fixed.rate, "F_A_fixed": fixed.outcome.f_a,
                "speedup": best.rate / fixed.rate})
    _emit(cfg, columns, [row], _meta("optimize-rate", cfg, n_omega_fixed=args.n_omega_fixed))


def _int_list(text, name):
    try:
        return [int(v) for v in text.split(",") if v]
    except ValueError as exc:
        raise UsageError(f"--{name} must be comma-separated integers") from exc


def cmd_disorder(args, cfg: RunConfig) -> None:
    p = cfg.protocol
    # the ensemble is centred on C = 2 unless a cooperativity is given explicitly
    explicit = args.config or p.coupling is not None or getattr(args, _dest("protocol.cooperativity"))
    C = _cooperativity(cfg) if explicit else 2.0
    spec = DisorderSpec(args.sigma_rel, args.samples, cfg.seed,
                        RegisterParams.symmetric(C, 0.0, p.kappa, p.gamma))
    rounds = _int_list(args.rounds, "rounds")
    modes = [m for m in args.corrections.split(",") if m]
    study = disorder_study(spec, rounds, modes, _pulse(cfg), cfg.grid.span_sigmas,
                           cfg.grid.n_points)
    meta = _meta("disorder", cfg, samples=args.samples, sigma_rel=args.sigma_rel,
                 rounds=rounds, corrections=modes, reference_cooperativity=C)
    if args.summary:
        columns = list(study.summary[0]) if study.summary else []
        _emit(cfg, columns, study.summary, meta)
    else:
        _emit(cfg, RECORD_COLUMNS, study.records, meta)


def cmd_phase_noise(args, cfg: RunConfig) -> None:
    noise = cfg.imperfections.model().phase_noise
    if args.samples < 2:
        raise UsageError("--samples must be at least 2")
    mean, err = monte_carlo_phase_noise_fidelity(noise, args.samples, cfg.seed)
    columns = ["delta_0", "sigma_delta", "delta_rms", "F_closed", "F_small_noise", "F_mc",
               "F_mc_stderr", "samples"]
    row = {"delta_0": noise.delta_0, "sigma_delta": noise.sigma_delta,
           "delta_rms": noise.delta_rms, "F_closed": averaged_phase_noise_fidelity(noise),
           "F_small_noise": small_noise_fidelity(noise), "F_mc": mean, "F_mc_stderr": err,
           "samples": args.samples}
    if (args.length is None) != (args.ref_length is None):
        raise UsageError("--length and --ref-length must be given together")
    if args.length is not None:
        rms = rms_length_scaling(args.ref_length, noise.delta_rms, args.length)
        columns += ["length", "delta_rms_projected", "F_small_noise_projected"]
        row.update({"length": args.length, "delta_rms_projected": rms,
                    "F_small_noise_projected": 1 - rms**2 / 4})
    _emit(cfg, columns, [row], _meta("phase-noise", cfg, samples=args.samples))


def cmd_three_level(args, cfg: RunConfig) -> None:
    p, sch = cfg.protocol, cfg.schedule
    if p.mode != "reflection":
        raise UsageError("three-level runs use the reflection geometry")
    C = _cooperativity(cfg)
    N = _rounds(cfg, C)
    _feasible_solution(C, N, cfg)
    pulse = _pulse(cfg)
    if args.dump_stride < 1:
        raise UsageError("--dump-stride must be positive")
    reg = _register(cfg, mode="three_level")
    if p.delta is not None:
        delta = p.delta
        spectral = frequency_domain_three_level(reg, pulse, N, delta, cfg.grid.span_sigmas,
                                                cfg.grid.n_points)
    else:
        delta, spectral = optimize_stepwise_detuning(reg, pulse, N)
    if sch.modulation == "stepwise":
        amplitude = delta if sch.amplitude is None else sch.amplitude
    elif sch.refine:
        amplitude, _ = refine_sinusoid_amplitude(reg, pulse, N, delta)
    else:
        amplitude = (effective_sinusoid_amplitude(delta, p.n_t) if sch.amplitude is None
                     else sch.amplitude)
    schedule = DDSchedule.for_pulse(pulse, N, sch.modulation, amplitude)
    history = [] if args.dump_envelopes else None
    u0, u1 = run_three_level(pulse, schedule, reg, richardson=sch.richardson, history=history)
    out = temporal_herald(u0, u1)
    columns = ["modulation", "C", "N", "N_t", "sigma_omega", "Delta_step", "amplitude",
               "P_A", "P_B", "P_t", "F_A", "F_B", "F_A_spectral", "truncation_loss_max"]
    row = {"modulation": sch.modulation, "C": C, "N": N, "N_t": p.n_t, "sigma_omega": p.sigma_omega,
           "Delta_step": delta, "amplitude": amplitude, "P_A": out.p_a, "P_B": out.p_b,
           "P_t": out.p_total, "F_A": out.f_a, "F_B": out.f_b, "F_A_spectral": spectral.f_a,
           "truncation_loss_max": max(u0.truncation_loss + u1.truncation_loss, default=0.0)}
    meta = _meta("three-level", cfg)
    _emit(cfg, columns, [row], meta)
    if history is not None:
        rows = []
        for k, a, b in history:
            t = a.times[::args.dump_stride] + k * schedule.tau_dd
            va, vb = a.values[::args.dump_stride], b.values[::args.dump_stride]
            rows.extend(zip([k] * len(t), t.tolist(), va.real.tolist(), va.imag.tolist(),
                            vb.real.tolist(), vb.imag.tolist()))
        write_table(args.dump_envelopes, ["window", "t", "re_u0", "im_u0", "re_u1", "im_u1"],
                    rows, meta, cfg.output.format)


def cmd_reproduce(args) -> None:
    from .recipes import run_recipe
    start = time.perf_counter()
    bundle = run_recipe(args.figure, seed=args.seed, quick=args.quick)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    files = []
    for ds in bundle.datasets:
        path = out / f"{ds.name}.csv"
        meta = {"figure": args.figure, "seed": args.seed, **ds.meta}
        write_table(path, ds.columns, ds.rows, meta, "csv")
        files.append(path.name)
    manifest = {
        "figure": args.figure, "version": __version__, "seed": args.seed, "quick": args.quick,
        "parameters": bundle.parameters, "files": files,
        "command": ["cavity-herald", "reproduce", args.figure, "--out", str(args.out),
                    "--seed", str(args.seed)] + (["--quick"] if args.quick else []),
        "runtime_seconds": round(time.perf_counter() - start, 3),
    }
    (out / "manifest.json").write_text(json.dumps(manifest, indent=1, sort_keys=True) + "\n")


COMMANDS = {
    "reflect": cmd_reflect,
    "herald": cmd_herald,
    "sweep": cmd_sweep,
    "optimize-rate": cmd_optimize_rate,
    "disorder": cmd_disorder,
    "phase-noise": cmd_phase_noise,
    "three-level": cmd_three_level,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "reproduce":
            cmd_reproduce(args)
        else:
            COMMANDS[args.command](args, run_config(args))
    except InfeasibleError as exc:
        print(f"cavity-herald: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (NumericError, DegenerateOutcomeError) as exc:
        print(f"cavity-herald: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ConfigurationError, DomainError) as exc:
        print(f"cavity-herald: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
