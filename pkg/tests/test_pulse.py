import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.integrate import trapezoid

from cavity_herald.errors import ConfigurationError, DomainError
from cavity_herald.pulse import SpectralPulse, make_grid, spectrum, temporal, width_scaling_sigma


@given(st.floats(0.01, 10.0), st.floats(-5.0, 5.0))
def test_spectrum_is_normalized(sigma, center):
    pulse = SpectralPulse(sigma, center)
    grid = make_grid(pulse)
    assert grid.integrate(spectrum(pulse, grid.nodes) ** 2) == pytest.approx(1.0, abs=1e-9)


@given(st.floats(0.05, 5.0))
def test_parseval(sigma):
    pulse = SpectralPulse(sigma)
    t = np.linspace(-12 * pulse.sigma_t, 12 * pulse.sigma_t, 8001)
    assert trapezoid(np.abs(temporal(pulse, t)) ** 2, t) == pytest.approx(1.0, abs=1e-9)


def test_temporal_is_fourier_transform_of_spectrum():
    pulse = SpectralPulse(0.5, center=0.3)
    grid = make_grid(pulse, n_points=8001)
    for t in (-3.0, 0.0, 1.7):
        ft = np.dot(grid.weights, spectrum(pulse, grid.nodes) * np.exp(-1j * grid.nodes * t))
        ft /= math.sqrt(2 * math.pi)
        assert ft == pytest.approx(complex(temporal(pulse, t)), abs=1e-10)


def test_grid_refinement_halves_spacing():
    grid = make_grid(SpectralPulse(0.2), n_points=401)
    fine = grid.refined()
    assert len(fine.nodes) == 801
    assert fine.nodes[0] == grid.nodes[0] and fine.nodes[-1] == grid.nodes[-1]
    np.testing.assert_allclose(fine.nodes[::2], grid.nodes)


def test_grid_doubling_converges():
    pulse = SpectralPulse(0.2)
    f = lambda w: spectrum(pulse, w) ** 2 * np.cos(w * 3.0)
    grid = make_grid(pulse, n_points=401)
    coarse, fine = grid.integrate(f(grid.nodes)), grid.refined().integrate(f(grid.refined().nodes))
    assert abs(coarse - fine) < 1e-10


def test_window_and_sigma_t():
    pulse = SpectralPulse(0.25, n_t=8)
    assert pulse.sigma_t == 4.0
    assert pulse.window == 32.0


def test_width_scaling_sigma():
    assert width_scaling_sigma(10.0, 4.0) == 2.5
    with pytest.raises(DomainError):
        width_scaling_sigma(0.0, 4.0)


@pytest.mark.parametrize("kwargs", [{"span_sigmas": 5.0}, {"n_points": 400}, {"n_points": 101}])
def test_grid_preconditions(kwargs):
    with pytest.raises(ConfigurationError):
        make_grid(SpectralPulse(), **kwargs)


@pytest.mark.parametrize("kwargs", [{"sigma_omega": 0.0}, {"sigma_omega": -1.0}, {"n_t": 0.5},
                                    {"center": float("nan")}])
def test_pulse_preconditions(kwargs):
    with pytest.raises(DomainError):
        SpectralPulse(**kwargs)
