import math

import pytest

from tdqwalk import (
    AlphaBetaLockSchedule,
    ConfigError,
    ConstantSchedule,
    ExplicitSchedule,
    LinearBetaSchedule,
    RandomPhaseSchedule,
    UsageError,
    load_config,
    parse_config,
)
from tdqwalk.config import parse_angle

PI = math.pi

MINIMAL = """
eta = pi/4
schedule = constant
theta = pi/4
steps = 100
"""

FIG2 = """[run]
eta = pi/3
schedule = linear_beta
theta = pi/4
beta1 = 0
beta2 = pi/7   # second-step phase
steps = 30
"""


def test_minimal():
    cfg = parse_config(MINIMAL)
    assert cfg.init.eta == pytest.approx(PI / 4)
    assert cfg.init.gamma == 0
    assert cfg.schedule == ConstantSchedule(PI / 4)
    assert cfg.steps == 100
    assert cfg.format == "csv" and cfg.parity_filter and cfg.ensemble == 1
    assert cfg.seed is None


def test_figure_config_with_header_and_comment():
    cfg = parse_config(FIG2)
    assert cfg.schedule == LinearBetaSchedule(PI / 4, 0, PI / 7)
    assert cfg.init.eta == pytest.approx(PI / 3)


def test_missing_required_field_named():
    text = FIG2.replace("beta2 = pi/7   # second-step phase\n", "")
    with pytest.raises(ConfigError) as err:
        parse_config(text)
    assert err.value.field == "beta2"
    assert "beta2" in str(err.value)


def test_unknown_key_located():
    with pytest.raises(ConfigError) as err:
        parse_config(MINIMAL + "colour = blue\n")
    assert err.value.field == "colour"
    assert err.value.line == 6
    assert "line 6" in str(err.value)


def test_key_foreign_to_kind():
    with pytest.raises(ConfigError) as err:
        parse_config(MINIMAL + "beta2 = 1\n")
    assert err.value.field == "beta2"


def test_unknown_schedule_kind():
    with pytest.raises(ConfigError) as err:
        parse_config(MINIMAL.replace("constant", "zigzag"))
    assert err.value.field == "schedule"
    assert err.value.line == 3


def test_negative_steps():
    with pytest.raises(ConfigError) as err:
        parse_config(MINIMAL.replace("100", "-4"))
    assert err.value.field == "steps"


def test_syntax_error_line():
    with pytest.raises(ConfigError) as err:
        parse_config("eta = 0\nthis line is garbage\n")
    assert err.value.line == 2


def test_duplicate_key():
    with pytest.raises(ConfigError) as err:
        parse_config(MINIMAL + "steps = 3\n")
    assert err.value.field == "steps"


def test_bad_angle_expression():
    with pytest.raises(ConfigError) as err:
        parse_config(MINIMAL.replace("theta = pi/4", "theta = __import__('os')"))
    assert err.value.field == "theta"


@pytest.mark.parametrize(
    "text, value",
    [("0", 0.0), ("pi", PI), ("3*pi/4", 3 * PI / 4), ("-pi/2", -PI / 2), ("2**-1", 0.5), ("1e-3", 1e-3)],
)
def test_parse_angle(text, value):
    assert parse_angle(text) == pytest.approx(value)


@pytest.mark.parametrize("text", ["pi/0", "e", "abs(1)", "1 if 1 else 2", "", "inf"])
def test_parse_angle_rejects(text):
    with pytest.raises(ValueError):
        parse_angle(text)


def test_checkpoints_and_options():
    cfg = parse_config(MINIMAL + "checkpoints = 50, 10, 50\nformat = json\nparity_filter = off\nout = res\n")
    assert cfg.checkpoints == (10, 50)
    assert cfg.format == "json" and not cfg.parity_filter and cfg.out == "res"


def test_checkpoints_out_of_range():
    with pytest.raises(ConfigError) as err:
        parse_config(MINIMAL + "checkpoints = 101\n")
    assert err.value.field == "checkpoints"


def test_random_phase_config():
    cfg = parse_config("""
eta = pi/4
schedule = random_phase
theta = pi/4
randomize = beta
seed = 42
steps = 10
ensemble = 4
""")
    assert cfg.schedule == RandomPhaseSchedule(PI / 4, "beta", seed=42)
    assert cfg.seed == 42 and cfg.ensemble == 4
    assert cfg.with_seed(7).seed == 7


def test_ensemble_only_for_random():
    with pytest.raises(ConfigError) as err:
        parse_config(MINIMAL + "ensemble = 3\n")
    assert err.value.field == "ensemble"


def test_explicit_list():
    cfg = parse_config("""
eta = 0
schedule = explicit_list
thetas = pi/4, pi/3, 0
betas = 0, 1, 2
steps = 3
""")
    assert isinstance(cfg.schedule, ExplicitSchedule)
    assert [c.beta for c in cfg.schedule.steps] == [0, 1, 2]
    assert [c.alpha for c in cfg.schedule.steps] == [0, 0, 0]


def test_explicit_list_length_checks():
    base = "eta = 0\nschedule = explicit_list\nthetas = 1, 2\n"
    with pytest.raises(ConfigError) as err:
        parse_config(base + "alphas = 1\nsteps = 2\n")
    assert err.value.field == "alphas"
    with pytest.raises(ConfigError) as err:
        parse_config(base + "steps = 3\n")
    assert err.value.field == "steps"


def test_lock_config():
    cfg = parse_config("eta = pi/4\ngamma = pi/2\nschedule = alpha_beta_lock\ntheta = pi/4\n"
                       "phases = 0, pi/4\nsteps = 3\n")
    assert cfg.schedule == AlphaBetaLockSchedule(PI / 4, (0.0, PI / 4))


def test_config_errors_are_usage_errors():
    assert issubclass(ConfigError, UsageError)


def test_echo_is_json_ready(tmp_path):
    import json

    path = tmp_path / "c.ini"
    path.write_text(FIG2)
    doc = json.loads(json.dumps(load_config(str(path)).echo()))
    assert doc["schedule"]["kind"] == "linear_beta"
    assert doc["steps"] == 30
