import math

import numpy as np
import pytest

from cavity_herald.disorder import (DisorderSpec, correction_for, disorder_study,
                                    sample_disorder, tune_register, with_reference_cooperativity)
from cavity_herald.errors import ConfigurationError, DomainError
from cavity_herald.optics import RegisterParams, reflection


def test_sampling_is_deterministic_and_indexed():
    spec = DisorderSpec(0.2, 10, seed=7)
    assert sample_disorder(spec, 3) == sample_disorder(spec, 3)
    assert sample_disorder(spec, 3) != sample_disorder(spec, 4)
    reg_a, reg_b = sample_disorder(spec, 0)
    ref = spec.reference
    assert reg_a.cavity == ref.cavity
    assert reg_a.transition0.g == ref.transition0.g


def test_zero_disorder_reproduces_reference():
    spec = DisorderSpec(0.0, 2)
    reg_a, reg_b = sample_disorder(spec, 1)
    assert reg_a.cooperativity(1) == pytest.approx(2.0)
    assert reg_b.cooperativity(0) == pytest.approx(2.0)


def test_log_cooperativity_moments():
    # C ~ g^2 / (kappa gamma) so log C has variance ~ (4 + 1 + 1) sigma^2 for small sigma
    spec = DisorderSpec(0.05, 4000, seed=1)
    logs = np.array([math.log(sample_disorder(spec, i)[1].cooperativity(0)) for i in range(spec.n_samples)])
    assert logs.mean() == pytest.approx(math.log(2.0), abs=0.01)
    assert logs.std() == pytest.approx(math.sqrt(6) * 0.05, rel=0.08)


def test_tuning_meets_entangling_condition():
    spec = DisorderSpec(0.2, 5, seed=3)
    reg_a, _ = sample_disorder(spec, 2)
    tuned = tune_register(reg_a, 5)
    r0, r1 = complex(reflection(tuned, 0, 0.0)), complex(reflection(tuned, 1, 0.0))
    assert abs(r0) == pytest.approx(abs(r1), abs=1e-10)
    diff = 5 * (math.atan2(-r0.imag, -r0.real) - math.atan2(-r1.imag, -r1.real))
    assert diff == pytest.approx(math.pi, abs=1e-9)


def test_u3_dominates_on_small_study():
    study = disorder_study(DisorderSpec(0.2, 40, seed=11), [4, 6])
    for n in (4, 6):
        med = {row["correction_mode"]: row["infid_A_median"] for row in study.summary if row["N"] == n}
        assert med["U3"] <= med["U2"] + 1e-12 <= med["U1"] + 2e-12
    ok = [r for r in study.records if r["status"] == "ok" and r["correction_mode"] == "U3"]
    assert all(r["F_A"] >= 0 for r in ok)


def test_study_is_deterministic():
    a = disorder_study(DisorderSpec(0.2, 5, seed=4), [5], check_convergence=False)
    b = disorder_study(DisorderSpec(0.2, 5, seed=4), [5], check_convergence=False)
    assert a.records == b.records


def test_correction_modes():
    reg = RegisterParams.symmetric(2.0, 5.0)
    assert correction_for(reg, reg, 4, "U1") == ()
    (op,) = correction_for(reg, reg, 4, "U2")
    assert op.amplitude == 1.0
    with pytest.raises(ConfigurationError):
        disorder_study(DisorderSpec(0.2, 2), [4], correction_modes=("U9",))


def test_spec_validation_and_reference():
    with pytest.raises(DomainError):
        DisorderSpec(-0.1)
    with pytest.raises(DomainError):
        DisorderSpec(0.1, 0)
    spec = with_reference_cooperativity(DisorderSpec(), 3.0)
    assert spec.reference.cooperativity(0) == pytest.approx(3.0)
