"""Cross-validation of the engine against the reference implementations."""

from __future__ import annotations

import math
import types
from dataclasses import dataclass

import numpy as np

from .coin import CoinParams, InitialState, ab_amplitudes, interference_c
from .engine import Walker, WalkState
from .observables import chirality_probs, pmf
from .oracle import chirality_formulas, closed_form, dense_evolve, pmf_formulas_t123
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

TOL_CLOSED_FORM = 1e-12
TOL_DENSE = 1e-12
TOL_TRIG = 1e-14
TOL_CHIRALITY = 1e-13


def random_init(rng: np.random.Generator) -> InitialState:
    return InitialState(rng.uniform(0, math.pi), rng.uniform(0, 2 * math.pi))


def random_coin(rng: np.random.Generator) -> CoinParams:
    return CoinParams(*rng.uniform(0, 2 * math.pi, 3))


def random_schedule(rng: np.random.Generator, kind: str, steps: int) -> Schedule:
    """A schedule of ``kind`` with uniformly drawn parameters."""
    u = lambda: float(rng.uniform(0, 2 * math.pi))  # noqa: E731
    if kind == "constant":
        return ConstantSchedule(u(), u(), u())
    if kind == "linear_beta":
        return LinearBetaSchedule(u(), u(), u(), u())
    if kind == "alternating_alpha":
        return AlternatingAlphaSchedule(u(), u(), u(), u())
    if kind == "random_phase":
        which = ("alpha", "beta", "both")[int(rng.integers(3))]
        return RandomPhaseSchedule(u(), which, u(), u(), int(rng.integers(2**63)))
    if kind == "explicit_list":
        return ExplicitSchedule([random_coin(rng) for _ in range(max(steps, 1))])
    if kind == "alpha_beta_lock":
        return AlphaBetaLockSchedule(u(), tuple(u() for _ in range(int(rng.integers(1, 4)))))
    raise ValueError(f"unknown schedule kind {kind!r}")


@dataclass
class SuiteResult:
    name: str
    checks: int
    max_error: float
    tolerance: float
    worst: str = ""

    @property
    def passed(self) -> bool:
        return self.max_error <= self.tolerance

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        text = f"{status} {self.name}: {self.checks} checks, max error {self.max_error:.3e} (tol {self.tolerance:.0e})"
        if not self.passed and self.worst:
            text += f"\n     worst case: {self.worst}"
        return text


def _engine(init: InitialState, schedule: Schedule, steps: int, kernel) -> WalkState:
    # no norm guard: a broken kernel should show up as a located amplitude error
    w = Walker(init, capacity=steps, tol=math.inf, kernel=kernel)
    w.run(schedule, steps)
    return w.snapshot()


def _state_diff(a: WalkState, b: WalkState) -> tuple[float, str]:
    dp = np.abs(a.psi_plus - b.psi_plus)
    dm = np.abs(a.psi_minus - b.psi_minus)
    if dp.max() >= dm.max():
        return float(dp.max()), f"psi_plus at n={int(dp.argmax()) - a.t}"
    return float(dm.max()), f"psi_minus at n={int(dm.argmax()) - a.t}"


class _Tracker:
    def __init__(self, name: str, tol: float):
        self.result = SuiteResult(name, 0, 0.0, tol)

    def add(self, err: float, where: str) -> None:
        self.result.checks += 1
        if err > self.result.max_error or math.isnan(err):
            self.result.max_error = err if not math.isnan(err) else math.inf
            self.result.worst = where


def check_closed_forms(rng, draws: int, kernel=None) -> SuiteResult:
    """Closed form, dense evolution and engine agree for ``t <= 3``."""
    tr = _Tracker("closed form = dense = engine (t <= 3)", TOL_CLOSED_FORM)
    for d in range(draws):
        init = random_init(rng)
        coins = [random_coin(rng) for _ in range(3)]
        sched = ExplicitSchedule(coins)
        for t in (1, 2, 3):
            ref = closed_form(init, *coins, t=t).to_state()
            for label, state in (
                ("engine", _engine(init, sched, t, kernel)),
                ("dense", dense_evolve(init, sched, t)),
            ):
                err, where = _state_diff(state, ref)
                tr.add(err, f"draw {d}, t={t}, {label} vs closed form, {where}; init={init}, coins={coins}")
    return tr.result


def check_dense(rng, draws: int, max_steps: int = 12, kernel=None) -> SuiteResult:
    """Engine and dense matrix evolution agree for every schedule kind."""
    tr = _Tracker(f"engine = dense evolver (T <= {max_steps}, all kinds)", TOL_DENSE)
    for d in range(draws):
        kind = SCHEDULE_KINDS[d % len(SCHEDULE_KINDS)]
        steps = int(rng.integers(0, max_steps + 1))
        init = random_init(rng)
        sched = random_schedule(rng, kind, steps)
        err, where = _state_diff(_engine(init, sched, steps, kernel), dense_evolve(init, sched, steps))
        tr.add(err, f"draw {d}, {kind}, T={steps}, {where}; init={init}, schedule={sched}")
    return tr.result


def check_trig_forms(rng, draws: int) -> SuiteResult:
    """Trigonometric PMF formulas equal the |a|^2, |b|^2, c decomposition."""
    tr = _Tracker("trigonometric PMF forms = modulus forms (t <= 3)", TOL_TRIG)
    for d in range(draws):
        init = random_init(rng)
        p1, p2, p3 = (random_coin(rng) for _ in range(3))
        a, b = ab_amplitudes(init, p1)
        a_sq, b_sq = abs(a) ** 2, abs(b) ** 2
        c = interference_c(p1.alpha, p3.alpha, p1.beta, p2.beta, p3.beta, a, b)
        c2, s2 = math.cos(p2.theta) ** 2, math.sin(p2.theta) ** 2
        c3, s3 = math.cos(p3.theta) ** 2, math.sin(p3.theta) ** 2
        mix = math.sin(2 * p3.theta) * s2 * c
        modulus = {
            1: {1: a_sq, -1: b_sq},
            2: {2: c2 * a_sq, 0: s2, -2: c2 * b_sq},
            3: {3: c3 * c2 * a_sq, 1: s3 * a_sq + c3 * s2 * b_sq + mix,
                -1: c3 * s2 * a_sq + s3 * b_sq - mix, -3: c3 * c2 * b_sq},
        }
        trig = pmf_formulas_t123(init, p1, p2, p3)
        for t in (1, 2, 3):
            for n, value in modulus[t].items():
                tr.add(abs(trig[t][n] - value), f"draw {d}, rho({n},{t}); init={init}, coins={(p1, p2, p3)}")
    return tr.result


def check_chirality(rng, draws: int, kernel=None) -> SuiteResult:
    """Closed-form P+/P- for t <= 3 equal direct summation."""
    tr = _Tracker("chirality formulas = direct summation (t <= 3)", TOL_CHIRALITY)
    for d in range(draws):
        init = random_init(rng)
        coins = [random_coin(rng) for _ in range(3)]
        formulas = chirality_formulas(init, *coins)
        for t in (1, 2, 3):
            direct = chirality_probs(closed_form(init, *coins, t=t).to_state())
            engine = chirality_probs(_engine(init, ExplicitSchedule(coins), t, kernel))
            for label, got in (("closed form", direct), ("engine", engine)):
                err = max(abs(got[0] - formulas[t][0]), abs(got[1] - formulas[t][1]))
                tr.add(err, f"draw {d}, t={t}, {label}; init={init}, coins={coins}")
    return tr.result


def check_engine_trig(rng, draws: int, kernel=None) -> SuiteResult:
    """Engine PMF at t <= 3 equals the trigonometric formulas."""
    tr = _Tracker("engine PMF = trigonometric formulas (t <= 3)", TOL_CHIRALITY)
    for d in range(draws):
        init = random_init(rng)
        coins = [random_coin(rng) for _ in range(3)]
        trig = pmf_formulas_t123(init, *coins)
        for t in (1, 2, 3):
            dist = pmf(_engine(init, ExplicitSchedule(coins), t, kernel))
            for n, value in trig[t].items():
                tr.add(abs(dist[n] - value), f"draw {d}, rho({n},{t}); init={init}, coins={coins}")
    return tr.result


def oracle_check(seed: int = 0, draws: int = 500, kernel: types.ModuleType | None = None) -> list[SuiteResult]:
    """Run every cross-validation suite with ``draws`` random cases each."""
    rng = np.random.default_rng(seed)
    return [
        check_closed_forms(rng, draws, kernel=kernel),
        check_dense(rng, draws, kernel=kernel),
        check_trig_forms(rng, draws),
        check_chirality(rng, draws, kernel=kernel),
        check_engine_trig(rng, draws, kernel=kernel),
    ]
