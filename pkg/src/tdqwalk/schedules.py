"""Rules that pick the coin for every step ``t >= 1``.

Every schedule is an immutable value and ``params(t)`` is a pure function of
the schedule and ``t``; asking for the same step twice, in any order, gives
the same coin.

Random phases come from a counter-based stream.  Step ``t`` lives in block
``k = (t - 1) // BLOCK`` at slot ``j = (t - 1) % BLOCK`` and its phase is::

    2*pi * Generator(Philox(key=seed, counter=[0, 0, k, 0])).random(BLOCK * width)[width*j + i]

with ``width = 2`` and ``i = 0`` (alpha) / ``i = 1`` (beta) when both phases
are randomized, ``width = 1`` and ``i = 0`` otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import ClassVar, Sequence

import numpy as np

from .coin import TWO_PI, CoinParams, _wrap
from .errors import InvalidParameterError, ScheduleExhaustedError, UsageError

BLOCK = 4096
SCHEDULE_KINDS = (
    "constant",
    "linear_beta",
    "alternating_alpha",
    "random_phase",
    "explicit_list",
    "alpha_beta_lock",
)


def _finite(**values: float) -> None:
    for name, value in values.items():
        if not math.isfinite(value):
            raise InvalidParameterError(f"{name} must be finite, got {value!r}")


def _check_step(t: int) -> None:
    if t < 1:
        raise UsageError(f"coin parameters are defined for t >= 1, got t={t}")


class Schedule:
    kind: ClassVar[str]

    def params(self, t: int) -> CoinParams:
        raise NotImplementedError

    def describe(self) -> dict:
        """JSON-ready echo of the schedule."""
        out = {"kind": self.kind}
        for name, value in vars(self).items():
            if name.startswith("_"):
                continue
            if isinstance(value, tuple):
                value = [v.__dict__ if isinstance(v, CoinParams) else v for v in value]
            out[name] = value
        return out


@dataclass(frozen=True)
class ConstantSchedule(Schedule):
    theta: float
    alpha: float = 0.0
    beta: float = 0.0
    kind: ClassVar[str] = "constant"

    def __post_init__(self) -> None:
        object.__setattr__(self, "_coin", CoinParams(self.alpha, self.beta, self.theta))

    def params(self, t: int) -> CoinParams:
        _check_step(t)
        return self._coin


@dataclass(frozen=True)
class LinearBetaSchedule(Schedule):
    """``beta_t = beta1 + (t - 1)(beta2 - beta1)``, reduced mod 2*pi."""

    theta: float
    beta1: float
    beta2: float
    alpha: float = 0.0
    kind: ClassVar[str] = "linear_beta"

    def __post_init__(self) -> None:
        _finite(theta=self.theta, beta1=self.beta1, beta2=self.beta2, alpha=self.alpha)

    @property
    def delta(self) -> float:
        return self.beta2 - self.beta1

    def beta_at(self, t: int) -> float:
        _check_step(t)
        drift = math.fmod((t - 1) * self.delta, TWO_PI)
        return _wrap(self.beta1 + drift)

    def params(self, t: int) -> CoinParams:
        return CoinParams(self.alpha, self.beta_at(t), self.theta)


@dataclass(frozen=True)
class AlternatingAlphaSchedule(Schedule):
    """``alpha1`` on odd steps, ``alpha2`` on even steps, constant ``beta``."""

    theta: float
    alpha1: float
    alpha2: float
    beta: float = 0.0
    kind: ClassVar[str] = "alternating_alpha"

    def __post_init__(self) -> None:
        object.__setattr__(
            self,
            "_coins",
            (
                CoinParams(self.alpha2, self.beta, self.theta),
                CoinParams(self.alpha1, self.beta, self.theta),
            ),
        )

    @property
    def delta(self) -> float:
        return self.alpha2 - self.alpha1

    def params(self, t: int) -> CoinParams:
        _check_step(t)
        return self._coins[t % 2]


@lru_cache(maxsize=64)
def _phase_block(seed: int, block: int, width: int) -> np.ndarray:
    gen = np.random.Generator(np.random.Philox(key=seed, counter=[0, 0, block, 0]))
    out = TWO_PI * gen.random(BLOCK * width)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class RandomPhaseSchedule(Schedule):
    """I.i.d. uniform phases on ``[0, 2*pi)`` for ``alpha``, ``beta`` or both."""

    theta: float
    randomize: str = "alpha"
    alpha: float = 0.0
    beta: float = 0.0
    seed: int = 0
    kind: ClassVar[str] = "random_phase"

    def __post_init__(self) -> None:
        if self.randomize not in ("alpha", "beta", "both"):
            raise UsageError(
                f"randomize must be 'alpha', 'beta' or 'both', got {self.randomize!r}"
            )
        if not 0 <= self.seed < 2**128:
            raise UsageError(f"seed must be an unsigned 128-bit integer, got {self.seed}")
        _finite(theta=self.theta, alpha=self.alpha, beta=self.beta)

    def with_seed(self, seed: int) -> RandomPhaseSchedule:
        return RandomPhaseSchedule(self.theta, self.randomize, self.alpha, self.beta, seed)

    def phases(self, t: int) -> tuple[float, float]:
        _check_step(t)
        width = 2 if self.randomize == "both" else 1
        block, slot = divmod(t - 1, BLOCK)
        draws = _phase_block(int(self.seed), block, width)
        if self.randomize == "alpha":
            return float(draws[slot]), self.beta
        if self.randomize == "beta":
            return self.alpha, float(draws[slot])
        return float(draws[2 * slot]), float(draws[2 * slot + 1])

    def params(self, t: int) -> CoinParams:
        alpha, beta = self.phases(t)
        return CoinParams(alpha, beta, self.theta)


@dataclass(frozen=True)
class ExplicitSchedule(Schedule):
    """The ``t``-th coin is ``steps[t - 1]``."""

    steps: tuple[CoinParams, ...]
    kind: ClassVar[str] = "explicit_list"

    def __init__(self, steps: Sequence[CoinParams]):
        object.__setattr__(self, "steps", tuple(steps))

    def params(self, t: int) -> CoinParams:
        _check_step(t)
        if t > len(self.steps):
            raise ScheduleExhaustedError(
                f"explicit schedule defines {len(self.steps)} steps, asked for t={t}"
            )
        return self.steps[t - 1]


@dataclass(frozen=True)
class AlphaBetaLockSchedule(Schedule):
    """``alpha_t = phi_t`` and ``beta_t = -phi_t``.

    ``phases`` lists ``phi_1, phi_2, ...``; past its end the last value is held.
    """

    theta: float
    phases: tuple[float, ...] = field(default=(0.0,))
    kind: ClassVar[str] = "alpha_beta_lock"

    def __post_init__(self) -> None:
        object.__setattr__(self, "phases", tuple(float(p) for p in self.phases))
        if not self.phases:
            raise UsageError("alpha_beta_lock needs at least one phase")
        _finite(theta=self.theta, **{f"phases[{i}]": p for i, p in enumerate(self.phases)})

    def params(self, t: int) -> CoinParams:
        _check_step(t)
        phi = self.phases[min(t, len(self.phases)) - 1]
        return CoinParams(phi, -phi, self.theta)


def generate_params(schedule: Schedule, t: int) -> CoinParams:
    """Coin parameters the schedule assigns to step ``t`` (``t >= 1``)."""
    return schedule.params(t)
