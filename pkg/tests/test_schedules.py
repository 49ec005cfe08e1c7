import math

import numpy as np
import pytest

from tdqwalk import (
    AlphaBetaLockSchedule,
    AlternatingAlphaSchedule,
    CoinParams,
    ConstantSchedule,
    ExplicitSchedule,
    LinearBetaSchedule,
    RandomPhaseSchedule,
    ScheduleExhaustedError,
    UsageError,
    generate_params,
)
from tdqwalk.schedules import BLOCK, SCHEDULE_KINDS

PI = math.pi


def test_linear_beta_third_step():
    s = LinearBetaSchedule(PI / 4, 0, PI / 7)
    assert generate_params(s, 3).beta == pytest.approx(2 * PI / 7, abs=1e-15)
    assert generate_params(s, 3).alpha == 0


def test_linear_beta_obeys_second_difference():
    s = LinearBetaSchedule(0.4, 0.3, 1.9)
    for t in range(3, 60):
        lhs = s.beta_at(t)
        rhs = 2 * s.beta_at(t - 1) - s.beta_at(t - 2)
        assert math.remainder(lhs - rhs, 2 * PI) == pytest.approx(0, abs=1e-12)


def test_linear_beta_reduced_at_large_t():
    s = LinearBetaSchedule(0.4, 0.1, 0.1 + PI / 7)
    t = 100_001
    beta = s.beta_at(t)
    assert 0 <= beta < 2 * PI
    # 100000*pi/7 is 7142 full turns plus 12*pi/7
    assert beta == pytest.approx(0.1 + 12 * PI / 7, abs=1e-11)


def test_alternating_alpha_parity():
    s = AlternatingAlphaSchedule(PI / 4, 0.3, 1.1)
    assert generate_params(s, 4).alpha == 1.1
    assert generate_params(s, 5).alpha == 0.3
    assert generate_params(s, 1).alpha == 0.3
    assert s.delta == pytest.approx(0.8)


def test_constant():
    s = ConstantSchedule(0.5, 0.1, 0.2)
    assert generate_params(s, 7) == CoinParams(0.1, 0.2, 0.5)


def test_explicit_exhausted():
    s = ExplicitSchedule([CoinParams(0, 0, 0.1), CoinParams(0, 0, 0.2)])
    assert generate_params(s, 2).theta == 0.2
    with pytest.raises(ScheduleExhaustedError):
        generate_params(s, 3)


def test_lock_holds_last_phase():
    s = AlphaBetaLockSchedule(PI / 4, (0.2, 0.9))
    assert generate_params(s, 1) == CoinParams(0.2, -0.2, PI / 4)
    assert generate_params(s, 2) == CoinParams(0.9, -0.9, PI / 4)
    assert generate_params(s, 50) == CoinParams(0.9, -0.9, PI / 4)


def test_lock_needs_a_phase():
    with pytest.raises(UsageError):
        AlphaBetaLockSchedule(PI / 4, ())


@pytest.mark.parametrize(
    "schedule",
    [
        ConstantSchedule(0.1),
        LinearBetaSchedule(0.1, 0, 1),
        AlternatingAlphaSchedule(0.1, 0, 1),
        RandomPhaseSchedule(0.1),
        ExplicitSchedule([CoinParams(0, 0, 0)]),
        AlphaBetaLockSchedule(0.1),
    ],
)
def test_step_zero_rejected(schedule):
    with pytest.raises(UsageError):
        generate_params(schedule, 0)


def test_every_kind_has_a_class():
    kinds = {c.kind for c in (ConstantSchedule, LinearBetaSchedule, AlternatingAlphaSchedule,
                              RandomPhaseSchedule, ExplicitSchedule, AlphaBetaLockSchedule)}
    assert kinds == set(SCHEDULE_KINDS)


def test_random_stream_frozen():
    # regression values of the documented Philox stream
    s = RandomPhaseSchedule(0.7, "alpha", seed=12345)
    assert s.phases(1)[0] == 4.061326502749698
    assert s.phases(2)[0] == 4.864866793797413
    assert s.phases(3)[0] == 4.941324778549345
    assert s.phases(BLOCK + 1)[0] == 4.755196195891473
    both = RandomPhaseSchedule(0.7, "both", seed=12345)
    assert both.phases(1) == (4.061326502749698, 4.864866793797413)
    assert both.phases(2) == (4.941324778549345, 1.002775531958802)


def test_random_stream_matches_documented_formula():
    seed = 99
    g = np.random.Generator(np.random.Philox(key=seed, counter=[0, 0, 2, 0]))
    draws = 2 * PI * g.random(BLOCK)
    s = RandomPhaseSchedule(0.3, "beta", alpha=0.25, seed=seed)
    for j in (0, 1, 777, BLOCK - 1):
        alpha, beta = s.phases(2 * BLOCK + j + 1)
        assert alpha == 0.25
        assert beta == draws[j]


def test_random_phase_order_independent():
    s = RandomPhaseSchedule(0.3, "both", seed=5)
    forward = [s.params(t) for t in range(1, 300)]
    backward = [s.params(t) for t in reversed(range(1, 300))][::-1]
    assert forward == backward
    assert forward == [RandomPhaseSchedule(0.3, "both", seed=5).params(t) for t in range(1, 300)]


def test_random_phases_differ_by_seed_and_are_uniform():
    a = np.array([RandomPhaseSchedule(0.3, seed=1).phases(t)[0] for t in range(1, 5001)])
    b = np.array([RandomPhaseSchedule(0.3, seed=2).phases(t)[0] for t in range(1, 5001)])
    assert not np.array_equal(a, b)
    assert a.min() >= 0 and a.max() < 2 * PI
    assert a.mean() == pytest.approx(PI, abs=0.1)


def test_random_phase_rejects_bad_options():
    with pytest.raises(UsageError):
        RandomPhaseSchedule(0.3, "gamma")
    with pytest.raises(UsageError):
        RandomPhaseSchedule(0.3, seed=-1)


def test_describe_is_json_ready():
    import json

    for s in (LinearBetaSchedule(0.1, 0, 1), ExplicitSchedule([CoinParams(0, 1, 2)]),
              AlphaBetaLockSchedule(0.2, (1.0, 2.0))):
        doc = json.loads(json.dumps(s.describe()))
        assert doc["kind"] == s.kind
