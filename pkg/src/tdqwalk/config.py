"""Flat ``key = value`` run configuration.

A document is a single INI section (the ``[run]`` header is optional)::

    eta = pi/3
    schedule = linear_beta
    theta = pi/4
    beta1 = 0
    beta2 = pi/7
    steps = 30

Angles accept plain numbers or arithmetic on ``pi`` (``3*pi/4``).  Lists are
comma separated.  Keys that do not belong to the chosen schedule kind are
rejected.

=================  ====================================================
key                meaning
=================  ====================================================
eta, gamma         initial coin state (gamma defaults to 0)
schedule           constant | linear_beta | alternating_alpha |
                   random_phase | explicit_list | alpha_beta_lock
theta              mixing angle (all kinds except explicit_list)
alpha, beta        fixed phases (constant, random_phase; alpha for
                   linear_beta, beta for alternating_alpha)
beta1, beta2       linear_beta
alpha1, alpha2     alternating_alpha
randomize, seed    random_phase: alpha | beta | both, unsigned seed
alphas, betas,     explicit_list: one entry per step (alphas/betas
thetas             default to zeros)
phases             alpha_beta_lock: phi_1, phi_2, ... (last one held)
steps              number of steps T >= 0
checkpoints        extra snapshot steps within [0, T]
format             csv | json
out                output directory
parity_filter      on | off
ensemble           number of seeds (random_phase only), >= 1
=================  ====================================================
"""

from __future__ import annotations

import ast
import configparser
import math
import operator
import re
from dataclasses import dataclass, replace
from typing import Callable, Mapping

from .coin import CoinParams, InitialState
from .errors import ConfigError, WalkError
from .schedules import (
    SCHEDULE_KINDS,
    AlphaBetaLockSchedule,
    AlternatingAlphaSchedule,
    ConstantSchedule,
    ExplicitSchedule,
    LinearBetaSchedule,
    RandomPhaseSchedule,
    Schedule,
)

COMMON_KEYS = {
    "eta", "gamma", "schedule", "steps", "checkpoints", "format", "out",
    "parity_filter", "ensemble",
}
KIND_KEYS = {
    "constant": {"theta", "alpha", "beta"},
    "linear_beta": {"theta", "beta1", "beta2", "alpha"},
    "alternating_alpha": {"theta", "alpha1", "alpha2", "beta"},
    "random_phase": {"theta", "randomize", "alpha", "beta", "seed"},
    "explicit_list": {"alphas", "betas", "thetas"},
    "alpha_beta_lock": {"theta", "phases"},
}
REQUIRED = {
    "constant": ("theta",),
    "linear_beta": ("theta", "beta1", "beta2"),
    "alternating_alpha": ("theta", "alpha1", "alpha2"),
    "random_phase": ("theta",),
    "explicit_list": ("thetas",),
    "alpha_beta_lock": ("theta", "phases"),
}
ALL_KEYS = COMMON_KEYS.union(*KIND_KEYS.values())


@dataclass(frozen=True)
class RunConfig:
    init: InitialState
    schedule: Schedule
    steps: int
    checkpoints: tuple[int, ...] = ()
    format: str = "csv"
    out: str = "out"
    parity_filter: bool = True
    ensemble: int = 1

    @property
    def seed(self) -> int | None:
        return getattr(self.schedule, "seed", None)

    def with_seed(self, seed: int) -> RunConfig:
        if not isinstance(self.schedule, RandomPhaseSchedule):
            return self
        return replace(self, schedule=self.schedule.with_seed(seed))

    def echo(self) -> dict:
        return {
            "eta": self.init.eta,
            "gamma": self.init.gamma,
            "schedule": self.schedule.describe(),
            "steps": self.steps,
            "checkpoints": list(self.checkpoints),
            "format": self.format,
            "parity_filter": self.parity_filter,
            "ensemble": self.ensemble,
        }


_BINOPS: dict[type, Callable[[float, float], float]] = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
    ast.Pow: operator.pow,
}


def parse_angle(text: str) -> float:
    """Evaluate a number or an arithmetic expression in ``pi``."""
    try:
        tree = ast.parse(text.strip(), mode="eval")
    except SyntaxError as exc:
        raise ValueError(f"cannot read {text!r} as an angle") from exc

    def ev(node: ast.AST) -> float:
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return float(node.value)
        if isinstance(node, ast.Name) and node.id == "pi":
            return math.pi
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        raise ValueError(f"unsupported expression in {text!r}")

    try:
        value = ev(tree)
    except (ZeroDivisionError, OverflowError) as exc:
        raise ValueError(f"cannot evaluate {text!r}: {exc}") from exc
    if not math.isfinite(value):
        raise ValueError(f"{text!r} is not finite")
    return value


def _key_lines(text: str) -> dict[str, int]:
    lines = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        m = re.match(r"\s*([A-Za-z_][\w]*)\s*[=:]", line)
        if m and m.group(1) not in lines:
            lines[m.group(1)] = lineno
    return lines


def read_mapping(text: str) -> tuple[dict[str, str], dict[str, int]]:
    """Parse the document into raw string values and their line numbers."""
    parser = configparser.ConfigParser(
        interpolation=None, inline_comment_prefixes=("#", ";"), default_section="__none__"
    )
    parser.optionxform = str
    has_header = any(line.strip().startswith("[") for line in text.splitlines())
    body = text if has_header else "[run]\n" + text
    shift = 0 if has_header else 1
    try:
        parser.read_string(body)
    except configparser.ParsingError as exc:
        lineno = exc.errors[0][0] if exc.errors else getattr(exc, "lineno", None)
        lineno = lineno - shift if lineno is not None else None
        raise ConfigError("malformed line (expected 'key = value')", line=lineno) from None
    except configparser.DuplicateOptionError as exc:
        raise ConfigError("key given twice", line=exc.lineno - shift, field=exc.option) from None
    except configparser.Error as exc:
        raise ConfigError(str(exc).splitlines()[0]) from None
    sections = parser.sections()
    if sections != ["run"]:
        raise ConfigError(f"expected a single [run] section, found {sections}")
    return dict(parser["run"]), _key_lines(text)


def parse_config(text: str) -> RunConfig:
    values, lines = read_mapping(text)
    return config_from_mapping(values, lines)


def load_config(path: str) -> RunConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())


class _Fields:
    def __init__(self, values: Mapping[str, str], lines: Mapping[str, int]):
        self.values = values
        self.lines = lines

    def error(self, key: str, message: str) -> ConfigError:
        return ConfigError(message, line=self.lines.get(key), field=key)

    def has(self, key: str) -> bool:
        return key in self.values

    def raw(self, key: str) -> str:
        if key not in self.values:
            raise self.error(key, "required field is missing")
        return str(self.values[key]).strip()

    def angle(self, key: str, default: float | None = None) -> float:
        if default is not None and key not in self.values:
            return default
        try:
            return parse_angle(self.raw(key))
        except ValueError as exc:
            raise self.error(key, str(exc)) from None

    def angles(self, key: str) -> list[float]:
        parts = [p for p in self.raw(key).split(",") if p.strip()]
        if not parts:
            raise self.error(key, "list is empty")
        try:
            return [parse_angle(p) for p in parts]
        except ValueError as exc:
            raise self.error(key, str(exc)) from None

    def integer(self, key: str, default: int | None = None, minimum: int = 0) -> int:
        if default is not None and key not in self.values:
            return default
        text = self.raw(key)
        try:
            value = int(text)
        except ValueError:
            raise self.error(key, f"expected an integer, got {text!r}") from None
        if value < minimum:
            raise self.error(key, f"must be >= {minimum}, got {value}")
        return value

    def choice(self, key: str, options: dict[str, object], default: str) -> object:
        text = self.raw(key).lower() if key in self.values else default
        if text not in options:
            raise self.error(key, f"expected one of {sorted(options)}, got {text!r}")
        return options[text]


def config_from_mapping(values: Mapping[str, str], lines: Mapping[str, int] | None = None) -> RunConfig:
    """Validate raw key/value strings into a :class:`RunConfig`."""
    f = _Fields(values, lines or {})
    unknown = sorted(set(values) - ALL_KEYS)
    if unknown:
        raise f.error(unknown[0], "unknown key")
    kind = f.raw("schedule").lower()
    if kind not in SCHEDULE_KINDS:
        raise f.error("schedule", f"unknown schedule kind {kind!r}; expected one of {list(SCHEDULE_KINDS)}")
    foreign = sorted(set(values) - COMMON_KEYS - KIND_KEYS[kind])
    if foreign:
        raise f.error(foreign[0], f"not used by schedule kind {kind!r}")
    for key in REQUIRED[kind]:
        f.raw(key)

    init = InitialState(f.angle("eta"), f.angle("gamma", 0.0))
    schedule = _build_schedule(kind, f)
    steps = f.integer("steps")
    if isinstance(schedule, ExplicitSchedule) and steps > len(schedule.steps):
        raise f.error("steps", f"explicit schedule lists only {len(schedule.steps)} steps")
    checkpoints: tuple[int, ...] = ()
    if f.has("checkpoints"):
        try:
            checkpoints = tuple(sorted({int(c) for c in f.raw("checkpoints").split(",") if c.strip()}))
        except ValueError:
            raise f.error("checkpoints", "expected comma-separated integers") from None
        outside = [c for c in checkpoints if not 0 <= c <= steps]
        if outside:
            raise f.error("checkpoints", f"{outside} fall outside [0, {steps}]")
    fmt = f.choice("format", {"csv": "csv", "json": "json"}, "csv")
    parity = f.choice(
        "parity_filter", {"on": True, "off": False, "true": True, "false": False}, "on"
    )
    ensemble = f.integer("ensemble", default=1, minimum=1)
    if ensemble > 1 and kind != "random_phase":
        raise f.error("ensemble", "ensembles only make sense for random_phase schedules")
    out = f.raw("out") if f.has("out") else "out"
    return RunConfig(init, schedule, steps, checkpoints, fmt, out, parity, ensemble)


def _build_schedule(kind: str, f: _Fields) -> Schedule:
    try:
        if kind == "constant":
            return ConstantSchedule(f.angle("theta"), f.angle("alpha", 0.0), f.angle("beta", 0.0))
        if kind == "linear_beta":
            return LinearBetaSchedule(
                f.angle("theta"), f.angle("beta1"), f.angle("beta2"), f.angle("alpha", 0.0)
            )
        if kind == "alternating_alpha":
            return AlternatingAlphaSchedule(
                f.angle("theta"), f.angle("alpha1"), f.angle("alpha2"), f.angle("beta", 0.0)
            )
        if kind == "random_phase":
            randomize = f.choice("randomize", {k: k for k in ("alpha", "beta", "both")}, "alpha")
            return RandomPhaseSchedule(
                f.angle("theta"),
                randomize,
                f.angle("alpha", 0.0),
                f.angle("beta", 0.0),
                f.integer("seed", default=0),
            )
        if kind == "explicit_list":
            thetas = f.angles("thetas")
            alphas = f.angles("alphas") if f.has("alphas") else [0.0] * len(thetas)
            betas = f.angles("betas") if f.has("betas") else [0.0] * len(thetas)
            for key, seq in (("alphas", alphas), ("betas", betas)):
                if len(seq) != len(thetas):
                    raise f.error(key, f"has {len(seq)} entries but thetas has {len(thetas)}")
            return ExplicitSchedule([CoinParams(a, b, t) for a, b, t in zip(alphas, betas, thetas)])
        return AlphaBetaLockSchedule(f.angle("theta"), tuple(f.angles("phases")))
    except ConfigError:
        raise
    except WalkError as exc:
        raise ConfigError(str(exc)) from None
