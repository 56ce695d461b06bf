import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cavity_herald.errors import ConfigurationError, DomainError
from cavity_herald.optics import (CavityParams, RegisterParams, TransitionParams,
                                  empty_cavity_reflection, excited_population_ss, filter_loss,
                                  large_detuning_expansion, lossy_effective_reflection,
                                  mismatched_reflection, reflection, transmission)

coop = st.floats(0.05, 10.0)
detuning = st.floats(-50.0, 50.0)
omega = st.floats(-20.0, 20.0)


@given(coop, detuning, omega)
def test_reflection_is_passive(C, delta, w):
    reg = RegisterParams.symmetric(C, delta)
    assert abs(reflection(reg, 0, w)) <= 1 + 1e-12


@given(coop, detuning, omega)
def test_lossless_single_sided_reflection_is_unitary(C, delta, w):
    # without spontaneous emission nothing leaves the cavity except through the input mirror
    g = math.sqrt(C * 200 / 4)
    reg = RegisterParams(CavityParams(200.0), TransitionParams(g, 0.0, 0.0, delta),
                         TransitionParams(g, 0.0, 0.0, -delta))
    assert abs(reflection(reg, 0, w)) == pytest.approx(1.0, abs=1e-12)


@given(coop, detuning, omega)
def test_conjugate_symmetry(C, delta, w):
    reg = RegisterParams.symmetric(C, delta)
    assert reflection(reg, 1, w) == pytest.approx(np.conj(reflection(reg, 0, -w)), abs=1e-13)


@given(coop, detuning, omega)
def test_two_sided_energy_balance(C, delta, w):
    reg = RegisterParams.symmetric(C, delta, two_sided=True)
    r, t = reflection(reg, 0, w), transmission(reg, 0, w)
    assert abs(r) ** 2 + abs(t) ** 2 <= 1 + 1e-12


def test_two_sided_lossless_is_unitary():
    g = math.sqrt(2.0 * 200 / 4)
    reg = RegisterParams(CavityParams(100.0, 100.0), TransitionParams(g, 0.0, 0.0, 3.0),
                         TransitionParams(g, 0.0, 0.0, -3.0))
    w = np.linspace(-30, 30, 101)
    total = np.abs(reflection(reg, 0, w)) ** 2 + np.abs(transmission(reg, 0, w)) ** 2
    np.testing.assert_allclose(total, 1.0, atol=1e-12)


def test_zero_coupling_reduces_to_empty_cavity():
    reg = RegisterParams.symmetric(0.0, 4.0)
    w = np.linspace(-10, 10, 21)
    np.testing.assert_allclose(reflection(reg, 0, w), empty_cavity_reflection(reg.cavity, w))
    assert reflection(reg, 0, 0.0) == pytest.approx(-1.0)


def test_resonant_reflection_closed_form():
    # on resonance r = (C - 1) / (C + 1) for a single-sided lossless cavity
    for C in (0.5, 1.0, 2.0, 5.0):
        assert reflection(RegisterParams.symmetric(C, 0.0), 0, 0.0) == pytest.approx((C - 1) / (C + 1))


def test_array_and_scalar_agree():
    reg = RegisterParams.symmetric(2.0, 5.0)
    w = np.array([-1.0, 0.0, 2.5])
    arr = reflection(reg, 0, w)
    assert arr.shape == (3,)
    for wi, ri in zip(w, arr):
        assert complex(reflection(reg, 0, float(wi))) == ri


def test_three_level_dark_branch_is_empty_cavity():
    reg = RegisterParams.symmetric(2.0, 5.0, mode="three_level")
    assert reflection(reg, 1, 0.3) == pytest.approx(empty_cavity_reflection(reg.cavity, 0.3))
    assert reg.cooperativity(1) == 0.0


@pytest.mark.parametrize("O", [20.0, 50.0, 200.0])
def test_large_detuning_expansion_matches_exact(O):
    C = 2.0
    R, theta = large_detuning_expansion(C, O)
    r = complex(reflection(RegisterParams.symmetric(C, O / 2), 0, 0.0))
    assert abs(abs(r) - R) < 4 * C / O**3 * 10
    assert abs(math.atan2(-r.imag, -r.real) - theta) < 10 * (2 * C / O) ** 3


def test_large_detuning_expansion_warns_at_small_o():
    with pytest.warns(RuntimeWarning):
        large_detuning_expansion(2.0, 2.0)


def test_excited_population_falls_as_inverse_square():
    reg = RegisterParams.symmetric(2.0, 0.0)
    p1 = excited_population_ss(reg, Delta=50.0)
    p2 = excited_population_ss(reg, Delta=100.0)
    assert p1 / p2 == pytest.approx(4.0, rel=1e-2)
    assert excited_population_ss(reg, Delta=0.0) > p1


def test_escape_efficiency_keeps_total_decay():
    cav = CavityParams(200.0).with_escape_efficiency(0.9)
    assert cav.kappa == pytest.approx(200.0)
    assert cav.eta_i == pytest.approx(0.9)


def test_mismatch_strategies():
    r = -0.9
    assert mismatched_reflection(r, 0.9, "identity") == pytest.approx(0.9 * r + 0.1)
    assert mismatched_reflection(r, 0.9, "separate") == pytest.approx(0.9 * r)
    assert mismatched_reflection(r, 0.9, "selective_pi") == pytest.approx(0.9 * r - 0.1)
    assert mismatched_reflection(r, 1.0, "identity") == r
    with pytest.raises(ConfigurationError):
        mismatched_reflection(r, 0.9, "bogus")


def test_filter_loss_is_bounded():
    loss = filter_loss(0.95, 0.3, 0.9)
    assert 0.0 <= loss <= 1.0
    assert filter_loss(0.95, 0.3, 1.0) == pytest.approx(0.0, abs=1e-12)


def test_lossy_reflection_scaling():
    assert lossy_effective_reflection(1.0, 0.99, 0.9) == pytest.approx(0.99**2 * math.sqrt(0.9))
    with pytest.raises(DomainError):
        lossy_effective_reflection(1.0, 1.1, 0.9)


def test_invalid_parameters():
    with pytest.raises(DomainError):
        TransitionParams(g=-1.0)
    with pytest.raises(DomainError):
        TransitionParams(g=float("nan"))
    with pytest.raises(DomainError):
        CavityParams(0.0)
    with pytest.raises(DomainError):
        reflection(RegisterParams.symmetric(1.0, 1.0), 0, float("inf"))
    with pytest.raises(ConfigurationError):
        transmission(RegisterParams.symmetric(1.0, 1.0), 0, 0.0)
    with pytest.raises(ConfigurationError):
        RegisterParams.symmetric(1.0, 1.0).transition(2)


@settings(max_examples=25)
@given(st.floats(0.1, 5.0), st.floats(0.5, 30.0))
def test_reflection_phase_is_odd_in_detuning(C, delta):
    r_plus = complex(reflection(RegisterParams.symmetric(C, delta), 0, 0.0))
    r_minus = complex(reflection(RegisterParams.symmetric(C, -delta), 0, 0.0))
    assert r_plus == pytest.approx(r_minus.conjugate(), abs=1e-13)
