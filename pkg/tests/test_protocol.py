import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cavity_herald.errors import ConfigurationError, DomainError, InfeasibleError
from cavity_herald.optics import RegisterParams, reflection
from cavity_herald.protocol import (ProtocolConfig, cooperativity_bound, herald, int_power,
                                    monochromatic_outcome, n_round_coefficients,
                                    optimize_detuning, required_rounds, solve_detuning,
                                    transmission_match_detuning)
from cavity_herald.pulse import SpectralPulse, make_grid, spectrum
from cavity_herald.errors import Infeasible


def _phase(r):
    r = complex(r)
    return math.atan2(-r.imag, -r.real)


@settings(max_examples=30, deadline=None)
@given(st.floats(0.3, 4.0), st.integers(1, 10), st.floats(0.05, 0.5), st.floats(0.5, 15.0))
def test_bookkeeping(C, N, sigma, delta):
    reg = RegisterParams.symmetric(C, delta)
    pulse = SpectralPulse(sigma)
    out = herald(ProtocolConfig.identical(reg, N, pulse=pulse), check_convergence=False)
    grid = make_grid(pulse)
    w = grid.nodes
    total = grid.integrate((np.abs(reflection(reg, 0, w)) ** (2 * N)
                            + np.abs(reflection(reg, 1, w)) ** (2 * N)) / 2 * spectrum(pulse, w) ** 2)
    assert out.p_a + out.p_b == pytest.approx(total, abs=1e-9)
    assert out.f_b == 1.0


@given(st.floats(0.3, 4.0), st.integers(1, 8), st.floats(-10, 10), st.floats(0.0, 20.0))
def test_parallelogram(C, N, w, delta):
    reg = RegisterParams.symmetric(C, delta)
    rp, rm = n_round_coefficients(reg, N, w)
    expected = (abs(reflection(reg, 0, w)) ** (2 * N) + abs(reflection(reg, 1, w)) ** (2 * N)) / 2
    assert abs(rp) ** 2 + abs(rm) ** 2 == pytest.approx(expected, abs=1e-12)


def test_int_power_matches_power():
    z = np.array([0.3 + 0.4j, -0.9 + 0.1j])
    for n in range(0, 9):
        np.testing.assert_allclose(int_power(z, n), z**n, rtol=1e-13)


def test_entangling_point_zeroes_r_plus():
    delta = solve_detuning(2.0, 4).delta_plus
    rp, _ = n_round_coefficients(RegisterParams.symmetric(2.0, delta), 4, 0.0)
    assert abs(rp) < 1e-10


@pytest.mark.parametrize("C", [0.5, 1.0, 2.0, 3.0])
def test_solver_consistency(C):
    for N in range(2, 21):
        sol = solve_detuning(C, N)
        if sol.status != "feasible":
            continue
        phase = _phase(reflection(RegisterParams.symmetric(C, sol.delta_plus), 0, 0.0))
        assert phase - math.pi / (2 * N) == pytest.approx(0.0, abs=1e-10)
        if sol.delta_minus is not None:
            phase = _phase(reflection(RegisterParams.symmetric(C, sol.delta_minus), 0, 0.0))
            assert phase - math.pi / (2 * N) == pytest.approx(0.0, abs=1e-10)


def test_feasibility_bound():
    assert solve_detuning(0.5, 2).status == "infeasible"
    assert solve_detuning(0.5, 3).status == "degenerate"
    assert solve_detuning(0.5, 4).status == "feasible"
    assert solve_detuning(1.0, 1).status == "degenerate"
    assert not solve_detuning(0.2, 2)
    with pytest.raises(InfeasibleError):
        solve_detuning(0.2, 2).select()
    assert cooperativity_bound(4) == pytest.approx(math.sin(math.pi / 8))


def test_minus_root_only_below_unit_cooperativity():
    assert solve_detuning(2.0, 4).delta_minus is None
    sol = solve_detuning(0.8, 4)
    assert 0 < sol.delta_minus < sol.delta_plus


def test_monochromatic_closed_forms():
    out = monochromatic_outcome(1.0, math.pi / 8, 4)
    assert (out.p_a, out.p_b, out.f_a, out.f_b) == pytest.approx((0.5, 0.5, 1.0, 1.0))
    out = monochromatic_outcome(0.9, 0.0, 3)
    assert out.p_b == 0 and out.f_a == 0 and out.p_a == pytest.approx(0.9**6)
    with pytest.raises(DomainError):
        monochromatic_outcome(1.2, 0.1, 2)


def test_narrowband_limit_far_from_boundary():
    reg = RegisterParams.symmetric(2.0, solve_detuning(2.0, 4).delta_plus)
    out = herald(ProtocolConfig.identical(reg, 4, pulse=SpectralPulse(1e-3)))
    r0 = reflection(reg, 0, 0.0)
    mono = monochromatic_outcome(abs(r0), _phase(r0), 4)
    assert out.max_relative_change(mono) < 1e-6


def test_required_rounds():
    assert required_rounds(4.9873, 2.0) == pytest.approx(3.92, abs=0.01)
    assert required_rounds(2 * 4.9873, 2.0) == pytest.approx(2 * required_rounds(4.9873, 2.0))
    with pytest.raises(DomainError):
        required_rounds(-1.0, 2.0)


def test_optimizer_fidelity_dominates_and_n_large():
    pulse = SpectralPulse(0.2)
    d, out = optimize_detuning(RegisterParams.symmetric(2.0, 0.0), pulse, 20)
    assert d / solve_detuning(2.0, 20).delta_plus == pytest.approx(1.0, abs=0.02)
    reg = RegisterParams.symmetric(2.0, solve_detuning(2.0, 20).delta_plus)
    assert out.f_a >= herald(ProtocolConfig.identical(reg, 20, pulse=pulse)).f_a - 1e-12


def test_pt_floor_objective_respects_floor():
    reg = RegisterParams.symmetric(2.0, 0.0)
    d_f, out_f = optimize_detuning(reg, SpectralPulse(0.2), 5)
    d_p, out_p = optimize_detuning(reg, SpectralPulse(0.2), 5, "max_pt_at_floor", 0.99)
    assert out_p.f_a >= 0.99 - 1e-9
    assert out_p.p_total >= out_f.p_total - 1e-12


def test_transmission_mode():
    sol = solve_detuning(3.0, 6, mode="transmission")
    assert sol.status == "feasible"
    reg = RegisterParams.symmetric(3.0, sol.delta_plus, two_sided=True)
    out = herald(ProtocolConfig.identical(reg, 6, mode="transmission"))
    assert out.f_b == 1.0 and out.f_a > 0.9
    assert isinstance(transmission_match_detuning(1.0, 1.0, 0.2), Infeasible)
    assert transmission_match_detuning(3.0, 1.0, 0.5) < 0


def test_config_validation():
    reg = RegisterParams.symmetric(1.0, 1.0)
    with pytest.raises(ConfigurationError):
        ProtocolConfig(0, (reg, reg))
    with pytest.raises(ConfigurationError):
        ProtocolConfig(2, (reg,))
    with pytest.raises(ConfigurationError):
        ProtocolConfig(2, (reg, reg), mode="bogus")
