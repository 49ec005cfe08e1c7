"""Comparisons and ensembles built on the engine and observables."""

from __future__ import annotations

import cmath
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

from .coin import CoinParams, InitialState, ab_amplitudes
from .config import RunConfig
from .engine import WalkState, evolve, run_walk
from .errors import UsageError
from .observables import (
    SiteSeries,
    allowed_sites,
    chirality_probs,
    distribution_distance,
    gauge_twist_check,
    gaussian_reference,
    magnetization,
    moments,
    pmf,
)
from .schedules import (
    AlphaBetaLockSchedule,
    AlternatingAlphaSchedule,
    ConstantSchedule,
    LinearBetaSchedule,
    RandomPhaseSchedule,
    Schedule,
)


def constant_reference(schedule: Schedule) -> ConstantSchedule:
    """Time-independent walk that an invariance schedule reproduces."""
    if isinstance(schedule, LinearBetaSchedule):
        return ConstantSchedule(schedule.theta, schedule.alpha, schedule.beta1)
    if isinstance(schedule, AlternatingAlphaSchedule):
        return ConstantSchedule(schedule.theta, schedule.alpha1, schedule.beta)
    raise UsageError(f"{schedule.kind} schedules have no gauge-equivalent constant walk")


def twist_of(schedule: Schedule) -> tuple[str, float]:
    """``(mode, delta)`` for :func:`gauge_twist_check`."""
    if isinstance(schedule, (LinearBetaSchedule, AlternatingAlphaSchedule)):
        return schedule.kind, schedule.delta
    raise UsageError(f"{schedule.kind} schedules carry no gauge twist")


@dataclass
class Comparison:
    t: int
    max_amplitude_diff: float
    max_pmf_diff: float
    total_variation: float
    kolmogorov_smirnov: float
    max_chirality_diff: float
    max_magnetization_diff: float
    twist_residual: float | None = None

    def to_dict(self) -> dict:
        return asdict(self)


def compare_states(
    a: WalkState, b: WalkState, mode: str | None = None, delta: float = 0.0
) -> Comparison:
    if a.t != b.t:
        raise UsageError(f"cannot compare states at t={a.t} and t={b.t}")
    amp = max(np.max(np.abs(a.psi_plus - b.psi_plus)), np.max(np.abs(a.psi_minus - b.psi_minus)))
    pa, pb = pmf(a), pmf(b)
    tv, ks = distribution_distance(pa, pb)
    ca, cb = chirality_probs(a), chirality_probs(b)
    ma, mb = magnetization(a), magnetization(b)
    return Comparison(
        t=a.t,
        max_amplitude_diff=float(amp),
        max_pmf_diff=float(np.max(np.abs(pa.values - pb.values))),
        total_variation=tv,
        kolmogorov_smirnov=ks,
        max_chirality_diff=max(abs(ca[0] - cb[0]), abs(ca[1] - cb[1])),
        max_magnetization_diff=float(np.max(np.abs(ma.values - mb.values))),
        twist_residual=None if mode is None else gauge_twist_check(a, b, delta, mode),
    )


def compare_configs(a: RunConfig, b: RunConfig, mode: str | None = "auto") -> Comparison:
    """Run both configurations to their common final step and compare.

    ``mode='auto'`` applies the gauge twist implied by ``a``'s schedule when
    it has one; ``None`` skips the twist check.
    """
    if a.steps != b.steps:
        raise UsageError(f"configs run to different steps ({a.steps} vs {b.steps})")
    delta = 0.0
    if mode == "auto":
        try:
            mode, delta = twist_of(a.schedule)
        except UsageError:
            mode = None
    elif mode is not None:
        kind, delta = twist_of(a.schedule)
        if kind != mode:
            raise UsageError(f"twist mode {mode!r} does not match schedule kind {kind!r}")
    sa = run_walk(a.init, a.schedule, a.steps)
    sb = run_walk(b.init, b.schedule, b.steps)
    return compare_states(sa, sb, mode, delta)


def variance_slope(times: Sequence[int], variances: Sequence[float]) -> float:
    """Least-squares slope of ``log(variance)`` against ``log(t)``."""
    slope, _ = np.polyfit(np.log(np.asarray(times, float)), np.log(np.asarray(variances, float)), 1)
    return float(slope)


def _member_pmfs(init, schedule, times, kernel) -> dict[int, np.ndarray]:
    traj = evolve(init, schedule, max(times), times, kernel=kernel)
    return {t: pmf(traj[t]).values for t in times}


@dataclass
class EnsembleResult:
    """Random-phase ensemble; ``pmfs[t]`` is the member-averaged distribution."""

    times: list[int]
    seeds: list[int]
    pmfs: dict[int, SiteSeries]
    member_variances: np.ndarray
    member_tv: np.ndarray
    variances: list[float] = field(default_factory=list)
    means: list[float] = field(default_factory=list)
    tv_gaussian: list[float] = field(default_factory=list)
    ks_gaussian: list[float] = field(default_factory=list)

    @property
    def slope(self) -> float:
        return variance_slope(self.times, self.variances)

    def gaussian(self, t: int) -> SiteSeries:
        k = self.times.index(t)
        return gaussian_reference(self.means[k], self.variances[k], t)


def random_phase_ensemble(
    init: InitialState,
    schedule: RandomPhaseSchedule,
    times: Sequence[int],
    members: int,
    *,
    threads: int = 1,
    kernel=None,
) -> EnsembleResult:
    """Average the PMF over ``members`` seeds ``seed, seed+1, ...``.

    The average is taken in seed order, so the result does not depend on
    ``threads``.
    """
    if members < 1:
        raise UsageError("an ensemble needs at least one member")
    times = sorted(set(int(t) for t in times))
    if not times or times[0] < 1:
        raise UsageError("ensemble times must be positive")
    seeds = [schedule.seed + k for k in range(members)]
    schedules = [schedule.with_seed(s) for s in seeds]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            runs = list(pool.map(lambda s: _member_pmfs(init, s, times, kernel), schedules))
    else:
        runs = [_member_pmfs(init, s, times, kernel) for s in schedules]

    member_var = np.empty((members, len(times)))
    member_tv = np.empty((members, len(times)))
    for i, run in enumerate(runs):
        for k, t in enumerate(times):
            series = SiteSeries(allowed_sites(t), run[t])
            mean, var = moments(series)
            member_var[i, k] = var
            member_tv[i, k] = distribution_distance(series, gaussian_reference(mean, var, t))[0]

    result = EnsembleResult(times, seeds, {}, member_var, member_tv)
    for t in times:
        avg = np.zeros(t + 1)
        for run in runs:
            avg += run[t]
        series = SiteSeries(allowed_sites(t), avg / members)
        mean, var = moments(series)
        tv, ks = distribution_distance(series, gaussian_reference(mean, var, t))
        result.pmfs[t] = series
        result.means.append(mean)
        result.variances.append(var)
        result.tv_gaussian.append(tv)
        result.ks_gaussian.append(ks)
    return result


@dataclass
class LockDeviation:
    """Effect of changing the second phase under ``alpha_t = -beta_t``."""

    phi1: float
    phi2: float
    total_variation: float
    rho_shift: float
    c_measured: float
    c_predicted: float
    c_reference: float


def lock_counterexample(init: InitialState, theta: float, phi1: float, phi2: float) -> LockDeviation:
    """Compare the locked walk with phases ``(phi1, phi2, phi2)`` against ``phi1`` throughout.

    ``c_measured`` is recovered from the engine's ``rho(1, 3)`` by removing
    the ``|a|^2`` and ``|b|^2`` terms; ``c_predicted`` is
    ``Re[exp(2i(beta2 - beta1)) conj(b) a]`` with ``beta_t = -phi_t``.
    """
    ref = run_walk(init, AlphaBetaLockSchedule(theta, (phi1,)), 3)
    test = run_walk(init, AlphaBetaLockSchedule(theta, (phi1, phi2)), 3)
    a, b = ab_amplitudes(init, CoinParams(phi1, -phi1, theta))
    a_sq, b_sq = abs(a) ** 2, abs(b) ** 2
    s2sq, c3sq, s3sq = math.sin(theta) ** 2, math.cos(theta) ** 2, math.sin(theta) ** 2
    weight = math.sin(2 * theta) * s2sq
    rho_test = pmf(test)[1]
    c_measured = (rho_test - s3sq * a_sq - c3sq * s2sq * b_sq) / weight
    beta1, beta2 = -phi1, -phi2
    predicted = (cmath.exp(2j * (beta2 - beta1)) * b.conjugate() * a).real
    reference = (b.conjugate() * a).real
    return LockDeviation(
        phi1=phi1,
        phi2=phi2,
        total_variation=distribution_distance(pmf(test), pmf(ref))[0],
        rho_shift=rho_test - pmf(ref)[1],
        c_measured=c_measured,
        c_predicted=predicted,
        c_reference=reference,
    )
