import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cavity_herald.errors import ConfigurationError, DegenerateOutcomeError, DomainError, Infeasible
from cavity_herald.imperfections import (CorrectionOp, ImperfectionModel, PhaseNoiseModel,
                                         averaged_phase_noise_fidelity,
                                         effective_round_coefficient, match_amplitude_detuning,
                                         monte_carlo_phase_noise_fidelity, path_factors,
                                         phase_averaged_outcome, phase_noise_outcome,
                                         register_correction, rms_length_scaling,
                                         small_noise_fidelity)
from cavity_herald.optics import RegisterParams, reflection
from cavity_herald.protocol import ProtocolConfig, herald, solve_detuning
from cavity_herald.pulse import SpectralPulse


def _entangled(C=2.0, N=4):
    return RegisterParams.symmetric(C, solve_detuning(C, N).delta_plus)


@given(st.floats(0.5, 1.0), st.floats(0.5, 1.0), st.integers(1, 10))
def test_multiplicative_loss_scales_probability_exactly(eta_i, eta_r, N):
    reg = _entangled()
    ideal = herald(ProtocolConfig.identical(reg, N), check_convergence=False)
    model = ImperfectionModel(eta_i, eta_r)
    lossy = herald(ProtocolConfig.identical(reg, N, imperfections=model), check_convergence=False)
    assert lossy.p_total == pytest.approx(ideal.p_total * (eta_i**4 * eta_r) ** N, rel=1e-12)
    assert lossy.f_a == pytest.approx(ideal.f_a, rel=1e-12)


def test_exact_loss_model_is_close_to_multiplicative():
    reg = _entangled()
    c_mult = effective_round_coefficient(reg, 0, 0.0, ImperfectionModel(0.99))
    c_exact = effective_round_coefficient(reg, 0, 0.0, ImperfectionModel(0.99, loss_model="exact"))
    assert abs(c_exact) <= abs(reflection(reg, 0, 0.0))
    assert abs(c_exact) == pytest.approx(abs(c_mult), rel=5e-3)


def test_transmission_coefficient_with_mismatch():
    reg = RegisterParams.symmetric(3.0, 2.0, two_sided=True)
    ideal = effective_round_coefficient(reg, 0, 0.0, mode="transmission")
    c = effective_round_coefficient(reg, 0, 0.0, ImperfectionModel(eta_m=0.9), mode="transmission")
    assert c == pytest.approx(0.9 * ideal)
    with pytest.raises(ConfigurationError):
        effective_round_coefficient(reg, 0, 0.0, mode="bogus")


def test_correction_equalizes_and_attenuates_only():
    a, b = 0.9 * np.exp(0.2j), 0.7 * np.exp(-0.1j)
    op = register_correction(a, b, 5)
    assert op.target_path == "A" and op.amplitude <= 1
    assert op.factor * a**5 == pytest.approx(b**5)
    op2 = register_correction(b, a, 5)
    assert op2.target_path == "B"
    with pytest.raises(DegenerateOutcomeError):
        register_correction(0.0, b, 3)


def test_correction_is_idempotent_on_equal_registers():
    op = register_correction(0.8 * np.exp(0.3j), 0.8 * np.exp(0.3j), 6)
    assert op.factor == pytest.approx(1.0)
    assert path_factors((op,)) == pytest.approx((1.0, 1.0))


def test_path_factors_combine():
    ops = (CorrectionOp(0.9, 0.1, "A"), CorrectionOp(0.8, -0.2, "B"))
    fa, fb = path_factors(ops)
    assert fa == pytest.approx(ops[0].factor) and fb == pytest.approx(ops[1].factor)
    assert ops[0].phase_only().amplitude == 1.0
    with pytest.raises(DomainError):
        CorrectionOp(1.5)
    with pytest.raises(ConfigurationError):
        CorrectionOp(0.5, 0.0, "C")


def test_amplitude_matching():
    C0, C1 = 2.0, 1.5
    reg0 = RegisterParams.symmetric(C0, 4.0)
    target = abs(reflection(reg0, 0, 0.0))
    d1 = match_amplitude_detuning(C1, 1.0, target)
    assert d1 < 0
    reg1 = RegisterParams.symmetric(C1, d1)
    assert abs(reflection(reg1, 0, 0.0)) == pytest.approx(target, abs=1e-12)
    assert isinstance(match_amplitude_detuning(3.0, 1.0, 0.1), Infeasible)
    assert isinstance(match_amplitude_detuning(3.0, 1.0, 1.0), Infeasible)


def test_phase_noise_closed_form_and_small_noise():
    m = PhaseNoiseModel(0.0, 0.085)
    assert averaged_phase_noise_fidelity(m) >= 0.998
    assert small_noise_fidelity(m) == pytest.approx(averaged_phase_noise_fidelity(m), abs=1e-5)
    assert averaged_phase_noise_fidelity(PhaseNoiseModel()) == 1.0


def test_monte_carlo_converges_as_inverse_sqrt():
    m = PhaseNoiseModel(0.2, 0.4)
    ref = averaged_phase_noise_fidelity(m)
    errs = []
    for n in (10_000, 160_000):
        mean, se = monte_carlo_phase_noise_fidelity(m, n, seed=5)
        assert abs(mean - ref) < 4 * se
        errs.append(se)
    assert errs[0] / errs[1] == pytest.approx(4.0, rel=0.05)


def test_monte_carlo_is_deterministic():
    m = PhaseNoiseModel(0.1, 0.3)
    assert (monte_carlo_phase_noise_fidelity(m, 1000, seed=9)
            == monte_carlo_phase_noise_fidelity(m, 1000, seed=9))


def test_phase_noise_outcome_at_zero_error_is_ideal():
    out = phase_noise_outcome(0.0, 1.0, 0.0)
    assert (out.p_a, out.p_b, out.f_a, out.f_b) == pytest.approx((0.5, 0.5, 1.0, 1.0))
    out = phase_noise_outcome(0.0, 1.0, 0.3)
    assert out.f_a == pytest.approx(math.cos(0.15) ** 2) == out.f_b


def test_phase_averaged_outcome_reduces_to_closed_form():
    m = PhaseNoiseModel(0.1, 0.2)
    out = phase_averaged_outcome(0.0, 1.0, m)
    assert (out.f_a * out.p_a + out.f_b * out.p_b) / out.p_total == pytest.approx(
        averaged_phase_noise_fidelity(m), abs=1e-12)
    trivial = phase_averaged_outcome(0.01, 0.9, PhaseNoiseModel())
    direct = phase_noise_outcome(0.1, math.sqrt(0.9), 0.0)
    assert trivial.max_relative_change(direct) < 1e-12


def test_length_scaling():
    assert rms_length_scaling(10.0, 0.05, 40.0) == pytest.approx(0.05 * 8)
    with pytest.raises(DomainError):
        rms_length_scaling(0.0, 0.05, 1.0)


@pytest.mark.parametrize("kwargs", [{"eta_i": 0.0}, {"eta_r": 1.2}, {"eta_m": -0.1}])
def test_model_domain(kwargs):
    with pytest.raises(DomainError):
        ImperfectionModel(**kwargs)


def test_model_configuration():
    with pytest.raises(ConfigurationError):
        ImperfectionModel(mismatch="bogus")
    with pytest.raises(ConfigurationError):
        ImperfectionModel(loss_model="bogus")
    with pytest.raises(DomainError):
        PhaseNoiseModel(0.0, -1.0)
    assert ImperfectionModel(0.99, 0.9886).round_probability_factor == pytest.approx(0.99**4 * 0.9886)


def test_mismatch_reduces_fidelity_identity_vs_selective():
    reg = _entangled()
    pulse = SpectralPulse(0.2)
    ident = herald(ProtocolConfig.identical(reg, 4, pulse=pulse,
                                            imperfections=ImperfectionModel(eta_m=0.95)))
    assert ident.f_b == 1.0
