"""Repeated phase encoding on two registers and the interferometric heralding algebra.

A photon is split between two registers A and B, reflected (or transmitted)
``N`` times by each, and recombined. With ``c_{s,M}`` the per-round amplitude of
branch ``s`` in register ``M``, the path amplitudes are ``a_{s,M} = c_{s,M}**N``,
``r_{+-,M} = (a_{0,M} +- a_{1,M}) / 2`` and ``r^{+-}_alpha = (r_{alpha,A} +- r_{alpha,B}) / 2``.
The port probabilities and fidelities follow from spectral integrals of these
amplitudes weighted by the photon spectrum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .errors import (ConfigurationError, DegenerateOutcomeError, DomainError,
                     Infeasible, InfeasibleError, NumericError)
from .imperfections import (CorrectionOp, ImperfectionModel, effective_round_coefficient,
                            path_factors)
from .optics import RegisterParams
from .outcome import HeraldOutcome
from .pulse import (DEFAULT_N_POINTS, DEFAULT_SPAN_SIGMAS, QuadratureGrid, SpectralPulse,
                    make_grid, spectrum)

PROTOCOL_MODES = ("reflection", "transmission")
OBJECTIVES = ("max_fidelity_a", "max_pt_at_floor")

CONVERGENCE_RTOL = 1e-6
DEGENERATE_TOL = 1e-12


@dataclass(frozen=True)
class ProtocolConfig:
    """Everything needed to evaluate one heralding attempt.

    Attributes:
        rounds: Number of encoding rounds ``N`` shared by both registers.
        registers: Registers ``(A, B)``.
        pulse: Incident photon.
        mode: ``"reflection"`` or ``"transmission"``.
        corrections: Optional path corrections.
        imperfections: Per-round loss and mismatch.
        span_sigmas: Half-width of the spectral grid in units of ``sigma_omega``.
        n_points: Number of spectral grid points.
    """

    rounds: int
    registers: tuple
    pulse: SpectralPulse = field(default_factory=SpectralPulse)
    mode: str = "reflection"
    corrections: tuple = ()
    imperfections: ImperfectionModel = field(default_factory=ImperfectionModel)
    span_sigmas: float = DEFAULT_SPAN_SIGMAS
    n_points: int = DEFAULT_N_POINTS

    def __post_init__(self):
        if int(self.rounds) != self.rounds or self.rounds < 1:
            raise ConfigurationError(f"rounds must be a positive integer, got {self.rounds!r}")
        if len(self.registers) != 2:
            raise ConfigurationError("exactly two registers are required")
        if self.mode not in PROTOCOL_MODES:
            raise ConfigurationError(f"unknown protocol mode {self.mode!r}")
        if len(self.corrections) > 2:
            raise ConfigurationError("at most two corrections are supported")
        object.__setattr__(self, "registers", tuple(self.registers))
        object.__setattr__(self, "corrections", tuple(self.corrections))

    @classmethod
    def identical(cls, register: RegisterParams, rounds: int, **kwargs) -> "ProtocolConfig":
        return cls(rounds=rounds, registers=(register, register), **kwargs)

    def grid(self) -> QuadratureGrid:
        return make_grid(self.pulse, self.span_sigmas, self.n_points)


def int_power(c, n: int):
    """``c**n`` by repeated squaring, so no complex logarithm is involved."""
    result = np.ones_like(c)
    base = c
    while n:
        if n & 1:
            result = result * base
        n >>= 1
        if n:
            base = base * base
    return result


def n_round_coefficients(reg: RegisterParams, N: int, omega=0.0,
                         imperfections: ImperfectionModel | None = None,
                         mode: str = "reflection"):
    """Symmetric and antisymmetric N-round amplitudes ``(r_plus, r_minus)`` of one register."""
    if N < 1:
        raise ConfigurationError("N must be at least 1")
    a0, a1 = path_amplitudes(reg, int(N), omega, imperfections, mode)
    rp, rm = (a0 + a1) / 2, (a0 - a1) / 2
    if rp.ndim == 0:
        return complex(rp), complex(rm)
    return rp, rm


def monochromatic_outcome(R: float, theta: float, N: int) -> HeraldOutcome:
    """Closed-form outcome for a monochromatic photon with per-round amplitude ``-R exp(+-i theta)``."""
    if not 0.0 <= R <= 1.0:
        raise DomainError(f"R must lie in [0, 1], got {R!r}")
    rn = R ** (2 * N)
    s2 = math.sin(N * theta) ** 2
    c2 = math.cos(N * theta) ** 2
    return HeraldOutcome.from_ports(rn * (1 + c2) / 2, rn * s2 / 2, s2 / (1 + c2), 1.0)


@dataclass(frozen=True)
class PortIntegrals:
    """Spectrally weighted powers of the four interferometer amplitudes."""

    pp: float  # |r_+^+|^2
    pm: float  # |r_+^-|^2
    mp: float  # |r_-^+|^2
    mm: float  # |r_-^-|^2

    def outcome(self) -> HeraldOutcome:
        p_a = 0.5 * (2 * self.pp + self.mp + self.mm)
        p_b = 0.5 * (2 * self.pm + self.mp + self.mm)
        if p_a < 1e-30 and p_b < 1e-30:
            raise DegenerateOutcomeError("both ports have vanishing click probability")
        f_a = self.mp / (2 * p_a) if p_a > 0 else 0.0
        f_b = self.mp / (2 * p_b) if p_b > 0 else 0.0
        return HeraldOutcome.from_ports(p_a, p_b, f_a, f_b)

    def infidelity_a(self) -> float:
        """``1 - F_A`` evaluated without cancellation."""
        return (2 * self.pp + self.mm) / (2 * self.pp + self.mp + self.mm)


def spectral_weight(pulse: SpectralPulse, grid: QuadratureGrid) -> np.ndarray:
    """Quadrature weights times the photon power spectrum."""
    return grid.weights * spectrum(pulse, grid.nodes) ** 2


def integrals_from_paths(weight, a0A, a1A, a0B, a1B, fa: complex = 1, fb: complex = 1) -> PortIntegrals:
    """Port integrals from N-round path amplitudes and two-pass correction factors."""
    if fa != 1:
        a0A, a1A = fa * a0A, fa * a1A
    if fb != 1:
        a0B, a1B = fb * a0B, fb * a1B
    rpA, rmA = (a0A + a1A) / 2, (a0A - a1A) / 2
    rpB, rmB = (a0B + a1B) / 2, (a0B - a1B) / 2
    power = lambda z: float(np.dot(weight, z.real**2 + z.imag**2))
    return PortIntegrals(power((rpA + rpB) / 2), power((rpA - rpB) / 2),
                         power((rmA + rmB) / 2), power((rmA - rmB) / 2))


def path_amplitudes(reg: RegisterParams, N: int, omega,
                    imperfections: ImperfectionModel | None = None, mode: str = "reflection"):
    """N-round amplitudes ``(a_0, a_1)`` of both spin branches of one register."""
    w = np.asarray(omega, dtype=float)
    c0 = np.asarray(effective_round_coefficient(reg, 0, w, imperfections, mode), complex)
    c1 = np.asarray(effective_round_coefficient(reg, 1, w, imperfections, mode), complex)
    return int_power(c0, N), int_power(c1, N)


def _integrals(config: ProtocolConfig, grid: QuadratureGrid) -> PortIntegrals:
    w = grid.nodes
    reg_a, reg_b = config.registers
    amp = lambda reg: path_amplitudes(reg, config.rounds, w, config.imperfections, config.mode)
    a0A, a1A = amp(reg_a)
    a0B, a1B = (a0A, a1A) if reg_b == reg_a else amp(reg_b)
    fa, fb = path_factors(config.corrections)
    return integrals_from_paths(spectral_weight(config.pulse, grid), a0A, a1A, a0B, a1B, fa, fb)


def herald(config: ProtocolConfig, check_convergence: bool = True) -> HeraldOutcome:
    """Port probabilities and fidelities of one configuration.

    Args:
        config: Protocol configuration.
        check_convergence: Re-evaluate on a grid with half the node spacing and
            require every field to agree to a relative ``1e-6``.

    Raises:
        DegenerateOutcomeError: If neither port can click.
        NumericError: If the grid-doubling check fails.
    """
    grid = config.grid()
    out = _integrals(config, grid).outcome()
    if check_convergence:
        fine = _integrals(config, grid.refined()).outcome()
        change = out.max_relative_change(fine)
        if not change < CONVERGENCE_RTOL:
            raise NumericError(f"spectral grid not converged (relative change {change:.3g})")
    return out


def required_rounds(Delta: float, C: float, gamma: float = 1.0, mode: str = "reflection") -> float:
    """Rounds needed to accumulate a conditional pi phase in the large-detuning regime."""
    if not (Delta > 0 and C > 0):
        raise DomainError("Delta and C must be positive")
    n = math.pi * Delta / (2 * C * gamma)
    return 2 * n if mode == "transmission" else n


@dataclass(frozen=True)
class DetuningSolution:
    """Closed-form detunings meeting the resonant entangling condition.

    Attributes:
        status: ``"feasible"``, ``"degenerate"`` (double root on the bound) or ``"infeasible"``.
        delta_plus: Larger physical root, or ``None``.
        delta_minus: Smaller physical root, or ``None`` when it is not a positive solution.
        bound: Smallest cooperativity admitting a solution at this ``N``.
        C: Cooperativity used.
        N: Rounds used.
    """

    status: str
    delta_plus: float | None
    delta_minus: float | None
    bound: float
    C: float
    N: int

    def __bool__(self) -> bool:
        return self.status != "infeasible"

    @property
    def message(self) -> str:
        if self.status == "infeasible":
            return (f"infeasible: C = {self.C:g} violates the bound C >= sin(pi/2N) "
                    f"= {self.bound:.6g} for N = {self.N}")
        return f"{self.status}: delta_plus = {self.delta_plus!r}"

    def select(self, root: str = "plus") -> float:
        if self.status == "infeasible":
            raise InfeasibleError(self.message)
        value = self.delta_plus if root == "plus" else self.delta_minus
        if value is None:
            raise InfeasibleError(f"no physical '{root}' root for C = {self.C:g}, N = {self.N}")
        return value


def cooperativity_bound(N: int, mode: str = "reflection") -> float:
    """Smallest cooperativity for which ``N`` rounds can reach the entangling condition."""
    if mode == "reflection":
        return math.sin(math.pi / (2 * N))
    if N == 1:
        return math.inf
    a2 = math.tan(math.pi / (2 * N)) ** 2
    # positive root of C^2 - 4 A^2 (1 + C) = 0
    return 2 * a2 + 2 * math.sqrt(a2 * a2 + a2)


def solve_detuning(C: float, N: int, gamma: float = 1.0,
                   mode: str = "reflection") -> DetuningSolution:
    """Detunings ``+-Delta`` at which ``arg(-c_0(0)) = pi / (2N)`` for symmetric transitions.

    Only positive detunings whose phase lands on the principal branch are
    reported; for ``C > 1`` in reflection this leaves a single root.
    """
    if not C > 0 or int(N) != N or N < 1:
        raise DomainError("C must be positive and N a positive integer")
    N = int(N)
    bound = cooperativity_bound(N, mode)
    if mode == "reflection":
        if abs(C - bound) <= DEGENERATE_TOL:
            status = "degenerate"
        elif C < bound:
            return DetuningSolution("infeasible", None, None, bound, C, N)
        else:
            status = "feasible"
        # roots are in units of 2 Delta / gamma
        if N == 1:
            root = math.sqrt(max(C * C - 1.0, 0.0))
            roots = (root, None)
        else:
            a = math.tan(math.pi / (2 * N))
            disc = math.sqrt(max(C * C + (C * C - 1) * a * a, 0.0))
            roots = ((C + disc) / a, (C - disc) / a)
    elif mode == "transmission":
        if math.isinf(bound) or C < bound - DEGENERATE_TOL:
            return DetuningSolution("infeasible", None, None, bound, C, N)
        status = "degenerate" if abs(C - bound) <= DEGENERATE_TOL * max(1.0, bound) else "feasible"
        a = math.tan(math.pi / (2 * N))
        disc = math.sqrt(max(C * C - 4 * a * a * (1 + C), 0.0))
        roots = ((C + disc) / (2 * a), (C - disc) / (2 * a))
    else:
        raise ConfigurationError(f"unknown protocol mode {mode!r}")
    plus, minus = (None if r is None else gamma * r / 2 for r in roots)
    if minus is not None and minus <= 0:
        minus = None
    if status == "degenerate" and minus is None:
        minus = plus
    return DetuningSolution(status, plus, minus, bound, C, N)


def transmission_match_detuning(C1: float, gamma1: float, t0_magnitude: float):
    """Detuning of transition 1 matching a resonant transmission magnitude ``t0_magnitude``.

    Returns the negative root, or :class:`Infeasible`.
    """
    t2 = t0_magnitude**2
    if not t0_magnitude < 1.0:
        return Infeasible(f"|t0| = {t0_magnitude:.6g} must be below 1")
    num = t2 * (1 + C1) ** 2 - 1.0
    if num < 0:
        return Infeasible(f"|t0|^2 (1+C1)^2 = {t2 * (1 + C1) ** 2:.6g} must exceed 1")
    return -(gamma1 / 2.0) * math.sqrt(num / (1.0 - t2))


def _symmetric_config(template: RegisterParams, Delta: float, rounds: int, pulse, imperfections,
                      mode, span_sigmas, n_points) -> ProtocolConfig:
    reg = template.with_detunings(Delta, -Delta)
    return ProtocolConfig(rounds, (reg, reg), pulse, mode, (), imperfections, span_sigmas, n_points)


def _minimize_bounded(f, lo, hi, xatol):
    res = minimize_scalar(f, bounds=(lo, hi), method="bounded",
                          options={"xatol": xatol, "maxiter": 500})
    if not np.isfinite(res.fun):
        raise NumericError("objective evaluated to a non-finite value")
    edge = 10 * xatol
    return res.x, (res.x - lo < edge or hi - res.x < edge)


def optimize_detuning(reg_template: RegisterParams, pulse: SpectralPulse, N: int,
                      objective: str = "max_fidelity_a", threshold: float = 0.99,
                      imperfections: ImperfectionModel | None = None, mode: str = "reflection",
                      span_sigmas: float = DEFAULT_SPAN_SIGMAS,
                      n_points: int = DEFAULT_N_POINTS, xatol: float = 1e-6,
                      seed_delta: float | None = None):
    """Optimize the symmetric detuning ``Delta`` (transition 0 at ``+Delta``, 1 at ``-Delta``).

    The search runs over ``[0.5, 2]`` times the closed-form seed and is retried once
    on ``[0.25, 4]`` if the optimum sits on the bracket edge.

    Args:
        reg_template: Register whose coupling, decay and cavity are used; its
            stored detunings are ignored.
        pulse: Incident photon.
        N: Number of rounds.
        objective: ``"max_fidelity_a"``, or ``"max_pt_at_floor"`` to maximize the
            total click probability while keeping ``F_A >= threshold``.
        threshold: Fidelity floor of the second objective.
        imperfections: Loss and mismatch model.
        mode: ``"reflection"`` or ``"transmission"``.
        span_sigmas: Spectral grid half-width.
        n_points: Spectral grid size.
        xatol: Absolute tolerance on ``Delta``.
        seed_delta: Override for the closed-form seed.

    Returns:
        ``(Delta_star, outcome)``. Under ``max_pt_at_floor`` with an unreachable
        floor, the fidelity-optimal point is returned and
        ``outcome.f_a < threshold`` signals it.

    Raises:
        InfeasibleError: If no closed-form seed exists for ``(C, N)``.
        NumericError: If no interior optimum exists after widening.
    """
    if objective not in OBJECTIVES:
        raise ConfigurationError(f"unknown objective {objective!r}")
    imperfections = imperfections or ImperfectionModel()
    if seed_delta is None:
        sol = solve_detuning(reg_template.cooperativity(0), N, reg_template.transition0.gamma, mode)
        if sol.status != "feasible":
            raise InfeasibleError(sol.message)
        seed_delta = sol.delta_plus
    make = lambda d: _symmetric_config(reg_template, d, N, pulse, imperfections, mode,
                                       span_sigmas, n_points)
    grid = make(seed_delta).grid()
    cache: dict[float, PortIntegrals] = {}

    def integrals(d):
        if d not in cache:
            cache[d] = _integrals(make(d), grid)
        return cache[d]

    infid = lambda d: integrals(d).infidelity_a()
    for lo_f, hi_f in ((0.5, 2.0), (0.25, 4.0)):
        lo, hi = lo_f * seed_delta, hi_f * seed_delta
        d_f, at_edge = _minimize_bounded(infid, lo, hi, xatol)
        if not at_edge:
            break
    else:
        raise NumericError(f"no interior fidelity optimum in [{lo:.6g}, {hi:.6g}]")

    best = d_f
    if objective == "max_pt_at_floor":
        best = _max_pt_at_floor(integrals, d_f, lo, hi, threshold, xatol)
    return best, herald(make(best))


def _max_pt_at_floor(integrals, d_f, lo, hi, threshold, xatol):
    fid = lambda d: 1.0 - integrals(d).infidelity_a()
    if fid(d_f) < threshold:
        return d_f
    gap = lambda d: fid(d) - threshold
    edges = []
    for end in (lo, hi):
        if gap(end) >= 0:
            edges.append(end)
            continue
        root = brentq(gap, min(end, d_f), max(end, d_f), xtol=1e-12, rtol=1e-14)
        # step back inside the feasible set if the root landed just outside
        step = 1e-12
        while gap(root) < 0:
            root = root + step if root < d_f else root - step
            step *= 2
        edges.append(root)
    a, b = edges
    pt = lambda d: integrals(d).outcome().p_total
    res = minimize_scalar(lambda d: -pt(d), bounds=(a, b), method="bounded",
                          options={"xatol": xatol, "maxiter": 500})
    candidates = [x for x in (a, b, res.x) if gap(x) >= 0]
    return max(candidates, key=pt)


def degenerate_or_infeasible(C: float, N: int, mode: str = "reflection") -> bool:
    """True when ``(C, N)`` has no strictly feasible resonant entangling condition."""
    return solve_detuning(C, N, mode=mode).status != "feasible"


__all__ = [
    "ProtocolConfig", "HeraldOutcome", "DetuningSolution", "CorrectionOp",
    "n_round_coefficients", "monochromatic_outcome", "herald", "required_rounds",
    "solve_detuning", "cooperativity_bound", "optimize_detuning",
    "transmission_match_detuning", "degenerate_or_infeasible",
]
