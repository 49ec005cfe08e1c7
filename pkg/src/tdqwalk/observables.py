"""Measurement-side quantities computed from a :class:`WalkState`."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Union

import numpy as np

from .coin import TWO_PI
from .engine import WalkState
from .errors import UsageError


@dataclass(frozen=True, eq=False)
class SiteSeries:
    """Values attached to lattice sites, ``values[k]`` at ``sites[k]``."""

    sites: np.ndarray
    values: np.ndarray

    def __getitem__(self, n: int) -> float:
        k = np.searchsorted(self.sites, n)
        if k < len(self.sites) and self.sites[k] == n:
            return float(self.values[k])
        return 0.0

    def __len__(self) -> int:
        return len(self.sites)

    def total(self) -> float:
        return math.fsum(self.values)

    def to_dict(self) -> dict[int, float]:
        return {int(n): float(v) for n, v in zip(self.sites, self.values)}


Distribution = Union[SiteSeries, Mapping[int, float]]


def allowed_sites(t: int) -> np.ndarray:
    """Sites ``-t, -t+2, ..., t`` reachable at step ``t``."""
    return np.arange(-t, t + 1, 2)


def _restrict(state: WalkState, values: np.ndarray, parity_filter: bool) -> SiteSeries:
    if parity_filter:
        return SiteSeries(allowed_sites(state.t), values[::2])
    return SiteSeries(state.sites, values)


def pmf(state: WalkState, parity_filter: bool = True) -> SiteSeries:
    """Position distribution ``|psi_+(n)|^2 + |psi_-(n)|^2``.

    With ``parity_filter`` only the reachable sublattice is reported; the
    other sites hold exact zeros.
    """
    rho = np.abs(state.psi_plus) ** 2 + np.abs(state.psi_minus) ** 2
    return _restrict(state, rho, parity_filter)


def chirality_probs(state: WalkState) -> tuple[float, float]:
    p_plus = math.fsum(np.abs(state.psi_plus) ** 2)
    p_minus = math.fsum(np.abs(state.psi_minus) ** 2)
    return p_plus, p_minus


def magnetization(state: WalkState, parity_filter: bool = True) -> SiteSeries:
    """Local ``|psi_+(n)|^2 - |psi_-(n)|^2``."""
    m = np.abs(state.psi_plus) ** 2 - np.abs(state.psi_minus) ** 2
    return _restrict(state, m, parity_filter)


def moments(state: WalkState | Distribution) -> tuple[float, float]:
    """Mean and variance of the position."""
    dist = pmf(state) if isinstance(state, WalkState) else _as_series(state)
    n = dist.sites.astype(np.float64)
    p = dist.values
    mean = math.fsum(n * p)
    var = math.fsum((n - mean) ** 2 * p)
    return mean, var


@dataclass(frozen=True, eq=False)
class ObservableReport:
    t: int
    pmf: SiteSeries
    p_plus: float
    p_minus: float
    magnetization: SiteSeries
    mean: float
    variance: float


def report(state: WalkState, parity_filter: bool = True) -> ObservableReport:
    p_plus, p_minus = chirality_probs(state)
    mean, var = moments(state)
    return ObservableReport(
        t=state.t,
        pmf=pmf(state, parity_filter),
        p_plus=p_plus,
        p_minus=p_minus,
        magnetization=magnetization(state, parity_filter),
        mean=mean,
        variance=var,
    )


def twist_phases(t: int, delta: float, mode: str) -> tuple[np.ndarray, np.ndarray]:
    """Gauge factors mapping the constant-coin run onto a time-dependent one.

    Returns ``(phase_plus, phase_minus)`` over sites ``-t..t``.  ``mode`` is
    ``linear_beta`` (``delta = beta2 - beta1``) or ``alternating_alpha``
    (``delta = alpha2 - alpha1``).
    """
    n = np.arange(-t, t + 1)
    if mode == "linear_beta":
        k_plus, k_minus = n - t, n + t
    elif mode == "alternating_alpha":
        if t % 2 == 0:
            k_plus = k_minus = n
        else:
            k_plus, k_minus = n - 1, n + 1
    else:
        raise UsageError(f"unknown twist mode {mode!r}")
    # k is even on every occupied site, so k*delta/2 = (k/2)*delta exactly
    return _phase(k_plus, delta), _phase(k_minus, delta)


def _phase(k: np.ndarray, delta: float) -> np.ndarray:
    half = k // 2
    odd = (k % 2).astype(np.float64)
    angle = np.fmod(half * delta + odd * (delta / 2.0), TWO_PI)
    return np.exp(1j * angle)


def gauge_twist_check(
    state_td: WalkState, state_ref: WalkState, delta: float, mode: str
) -> float:
    """Largest ``|psi_td - twist * psi_ref|`` over sites and components."""
    if state_td.t != state_ref.t:
        raise UsageError(f"states are at different steps ({state_td.t} vs {state_ref.t})")
    if delta == 0.0:
        return float(max(np.max(np.abs(state_td.psi_plus - state_ref.psi_plus)),
                         np.max(np.abs(state_td.psi_minus - state_ref.psi_minus))))
    ph_p, ph_m = twist_phases(state_td.t, delta, mode)
    err_p = np.abs(state_td.psi_plus - ph_p * state_ref.psi_plus)
    err_m = np.abs(state_td.psi_minus - ph_m * state_ref.psi_minus)
    return float(max(err_p.max(), err_m.max()))


def _as_series(dist: Distribution) -> SiteSeries:
    if isinstance(dist, SiteSeries):
        return dist
    items = sorted(dist.items())
    return SiteSeries(
        np.array([k for k, _ in items], dtype=np.int64),
        np.array([v for _, v in items], dtype=np.float64),
    )


def align(p: Distribution, q: Distribution) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Put two distributions on the union of their sites."""
    p, q = _as_series(p), _as_series(q)
    sites = np.union1d(p.sites, q.sites)
    pv = np.zeros(len(sites))
    qv = np.zeros(len(sites))
    pv[np.searchsorted(sites, p.sites)] = p.values
    qv[np.searchsorted(sites, q.sites)] = q.values
    return sites, pv, qv


def distribution_distance(p: Distribution, q: Distribution) -> tuple[float, float]:
    """Total-variation and Kolmogorov-Smirnov distances between two PMFs."""
    _, pv, qv = align(p, q)
    for name, v in (("p", pv), ("q", qv)):
        s = math.fsum(v)
        if abs(s - 1.0) > 1e-6:
            raise UsageError(f"{name} is not normalized (sum = {s!r})")
    tv = 0.5 * math.fsum(np.abs(pv - qv))
    ks = float(np.max(np.abs(np.cumsum(pv) - np.cumsum(qv))))
    return min(tv, 1.0), min(ks, 1.0)


def gaussian_reference(mean: float, variance: float, t: int) -> SiteSeries:
    """Discrete Gaussian on the reachable sites of step ``t``, renormalized.

    Only every second site is populated, so before renormalizing each site
    carries ``2 / sqrt(2*pi*variance)`` times the usual bell.
    """
    if not variance > 0.0:
        raise UsageError(f"variance must be positive, got {variance!r}")
    sites = allowed_sites(t)
    z = (sites - mean) ** 2 / (2.0 * variance)
    # constant prefactors cancel on renormalizing; shifting z avoids underflow
    w = np.exp(-(z - z.min()))
    return SiteSeries(sites, w / math.fsum(w))
