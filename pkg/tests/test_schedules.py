"""Batch-size schedules, summability validation, deviation constants."""
import math

import pytest

from dcstream import (
    RademacherBound,
    SampleSchedule,
    ScheduleOverflowError,
    rademacher_discrete,
    rademacher_holder_in_w,
    rademacher_holder_in_z,
    validate_schedule,
)


# ------------------------------------------------------- SampleSchedule

def test_schedule_sizes_match_ceiling_rule():
    s = SampleSchedule(c=1, p=2.0)
    assert [s.size(k) for k in (1, 2, 3, 10)] == [1, 4, 9, 100]
    t = SampleSchedule(c=3, p=1.5)
    assert t.size(2) == math.ceil(3 * 2**1.5) == 9


def test_schedule_is_nondecreasing():
    for sched in (SampleSchedule(1, 2.0), SampleSchedule(5, 0.3), SampleSchedule(2, 3.0, cap=40)):
        sizes = [sched.size(k) for k in range(1, 200)]
        assert all(a <= b for a, b in zip(sizes, sizes[1:]))
        assert min(sizes) >= 1


def test_schedule_cap_clips():
    s = SampleSchedule(c=1, p=2.0, cap=10)
    assert [s.size(k) for k in (1, 3, 4, 100)] == [1, 9, 10, 10]


def test_schedule_rejects_bad_parameters():
    with pytest.raises(ValueError):
        SampleSchedule(c=0)
    with pytest.raises(ValueError):
        SampleSchedule(p=0.0)
    with pytest.raises(ValueError):
        SampleSchedule(p=math.inf)
    with pytest.raises(ValueError):
        SampleSchedule(cap=0)
    with pytest.raises(ValueError):
        SampleSchedule().size(0)


def test_schedule_overflow_is_detected():
    s = SampleSchedule(c=1, p=8.0)
    with pytest.raises(ScheduleOverflowError):
        s.size(10**7)  # (1e7)^8 = 1e56 >> 2^53


def test_schedule_exact_up_to_large_k():
    # stays below the 2^53 exactness guard: 2 * (10^5)^3 = 2e15 < 9.0e15
    s = SampleSchedule(c=2, p=3.0)
    for k in (1, 17, 999, 10**5):
        assert s.size(k) == math.ceil(2.0 * float(k) ** 3)
    with pytest.raises(ScheduleOverflowError):
        s.size(10**6)


def test_schedule_labels():
    assert SampleSchedule(1, 2.0).label() == "k^2"
    assert SampleSchedule(3, 1.5, cap=7).label() == "3*k^1.5,cap=7"


# ---------------------------------------------------- validate_schedule

def test_validator_accepts_and_rejects_reference_pairs():
    assert validate_schedule(SampleSchedule(1, 2.0), 1.0).valid
    assert validate_schedule(SampleSchedule(1, 3.0), 0.45).valid
    assert not validate_schedule(SampleSchedule(1, 1.0), 1.0).valid
    assert not validate_schedule(SampleSchedule(1, 2.0), 0.45).valid


def test_validator_is_monotone_in_p():
    for beta in (0.3, 0.5, 1.0):
        valid_ps = [p / 10 for p in range(1, 80) if validate_schedule(SampleSchedule(1, p / 10), beta).valid]
        if valid_ps:
            threshold = min(valid_ps)
            for p in (threshold + 0.1, threshold + 1.0, threshold * 3):
                assert validate_schedule(SampleSchedule(1, p), beta).valid


def test_validator_flags_capped_schedules():
    result = validate_schedule(SampleSchedule(1, 5.0, cap=100), 1.0)
    assert not result.valid
    assert result.capped
    assert "capped" in result.reason


def test_validator_reports_reason():
    r = validate_schedule(SampleSchedule(1, 1.0), 1.0)
    assert "diverges" in r.reason
    r = validate_schedule(SampleSchedule(1, 2.0), 1.0)
    assert "finite" in r.reason


def test_validator_rejects_beta_out_of_range():
    for beta in (0.0, -1.0, 1.5):
        with pytest.raises(ValueError):
            validate_schedule(SampleSchedule(1, 2.0), beta)


# --------------------------------------------------- deviation constants

def test_holder_in_w_reference_value():
    # M=1, L=1, gamma=1, D=2, m=1, alpha=0.25:
    # N_g = L*D^gamma*m^(gamma/2) + M*sqrt(m)/sqrt(gamma*(1-2*alpha)*e)
    #     = 2 + 1/sqrt(0.5*e)
    bound = rademacher_holder_in_w(1.0, 1.0, 1.0, 2.0, 1, 0.25)
    assert bound.n_g == pytest.approx(2.0 + 1.0 / math.sqrt(0.5 * math.e), abs=1e-12)
    assert bound.alpha == 0.25


def test_holder_in_w_dimension_scaling():
    b1 = rademacher_holder_in_w(1.0, 1.0, 1.0, 1.0, 1, 0.25)
    b4 = rademacher_holder_in_w(1.0, 1.0, 1.0, 1.0, 4, 0.25)
    # both terms carry sqrt(m) at gamma=1, so m=4 doubles the constant
    assert b4.n_g == pytest.approx(2.0 * b1.n_g, rel=1e-12)


def test_holder_in_w_rejects_alpha_at_half():
    with pytest.raises(ValueError):
        rademacher_holder_in_w(1.0, 1.0, 1.0, 1.0, 1, 0.5)
    with pytest.raises(ValueError):
        rademacher_holder_in_w(1.0, 1.0, 1.5, 1.0, 1, 0.25)
    with pytest.raises(ValueError):
        rademacher_holder_in_w(0.0, 1.0, 1.0, 1.0, 1, 0.25)


def test_holder_in_z_reference_value():
    # M=1, L=1, gamma=1, D=1, n=2:
    # N_g = M + L*D^gamma*n^(gamma/2) = 1 + sqrt(2); alpha = 1/(2+2)
    bound = rademacher_holder_in_z(1.0, 1.0, 1.0, 1.0, 2)
    assert bound.n_g == pytest.approx(1.0 + math.sqrt(2.0), abs=1e-12)
    assert bound.alpha == pytest.approx(0.25, abs=1e-12)


def test_holder_in_z_high_dimension_is_impractical():
    bound = rademacher_holder_in_z(1.0, 1.0, 1.0, 1.0, 100)
    assert bound.alpha == pytest.approx(1.0 / 102.0, abs=1e-15)
    assert bound.impractical
    assert bound.min_growth_exponent == pytest.approx(102.0, rel=1e-12)


def test_discrete_reference_values():
    assert rademacher_discrete(1.0, 4, 16) == pytest.approx(0.5, abs=1e-15)
    assert rademacher_discrete(1.0, 1, 1) == pytest.approx(1.0, abs=1e-15)
    assert rademacher_discrete(2.0, 9, 9) == pytest.approx(2.0, abs=1e-15)


def test_discrete_quarter_sample_halves_bound():
    for j in (1, 3, 25):
        assert rademacher_discrete(1.7, 5, 4 * j) == pytest.approx(
            rademacher_discrete(1.7, 5, j) / 2.0, rel=1e-15
        )


def test_discrete_rejects_bad_inputs():
    with pytest.raises(ValueError):
        rademacher_discrete(0.0, 4, 1)
    with pytest.raises(ValueError):
        rademacher_discrete(1.0, 0, 1)
    with pytest.raises(ValueError):
        rademacher_discrete(1.0, 4, 0)


def test_bound_type_validation():
    with pytest.raises(ValueError):
        RademacherBound(n_g=0.0, alpha=0.5)
    with pytest.raises(ValueError):
        RademacherBound(n_g=1.0, alpha=0.0)
    with pytest.raises(ValueError):
        RademacherBound(n_g=1.0, alpha=1.5)
    assert not RademacherBound(n_g=1.0, alpha=0.5).impractical
