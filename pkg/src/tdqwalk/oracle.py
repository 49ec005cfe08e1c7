"""Reference implementations that share no code path with the stepping kernel.

* :func:`closed_form` writes the amplitudes for ``t <= 3`` out term by term.
* :func:`dense_evolve` builds the full shift and coin matrices over the
  truncated lattice and multiplies them.
* :func:`pmf_formulas_t123` evaluates the trigonometric probability formulas.
* :func:`classical_walk_mc` samples the classical persistent random walk
  that the walk approaches under random phases.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .coin import CoinParams, InitialState
from .engine import WalkState
from .errors import UnsupportedError
from .schedules import Schedule

DENSE_MAX_STEPS = 14


def _ab(init: InitialState, p1: CoinParams) -> tuple[complex, complex]:
    phi = p1.alpha + p1.beta - init.gamma
    e = cmath.exp(-1j * phi)
    ce, se = math.cos(init.eta), math.sin(init.eta)
    c1, s1 = math.cos(p1.theta), math.sin(p1.theta)
    return ce * c1 + e * se * s1, ce * s1 - e * se * c1


@dataclass(frozen=True)
class ClosedFormState:
    """Amplitudes keyed by ``(component, n)`` with component ``'+'`` or ``'-'``."""

    t: int
    amplitudes: dict[tuple[str, int], complex]

    def to_state(self) -> WalkState:
        plus = np.zeros(2 * self.t + 1, dtype=np.complex128)
        minus = np.zeros(2 * self.t + 1, dtype=np.complex128)
        for (comp, n), amp in self.amplitudes.items():
            (plus if comp == "+" else minus)[n + self.t] = amp
        return WalkState(self.t, plus, minus)

    def pmf(self) -> dict[int, float]:
        out: dict[int, float] = {}
        for (_, n), amp in self.amplitudes.items():
            out[n] = out.get(n, 0.0) + abs(amp) ** 2
        return out


def closed_form(
    init: InitialState,
    p1: CoinParams,
    p2: CoinParams | None = None,
    p3: CoinParams | None = None,
    t: int = 3,
) -> ClosedFormState:
    if t not in (1, 2, 3):
        raise UnsupportedError(f"closed forms exist for t = 1, 2, 3 only, got t={t}")
    if (t >= 2 and p2 is None) or (t == 3 and p3 is None):
        raise UnsupportedError(f"t={t} needs coin parameters for every step up to t")
    a, b = _ab(init, p1)
    E = lambda x: cmath.exp(1j * x)  # noqa: E731
    a1, b1 = p1.alpha, p1.beta
    if t == 1:
        return ClosedFormState(1, {("+", 1): E(a1) * a, ("-", -1): E(b1) * b})

    a2, b2 = p2.alpha, p2.beta
    c2, s2 = math.cos(p2.theta), math.sin(p2.theta)
    if t == 2:
        return ClosedFormState(2, {
            ("+", 2): E(a1 + a2) * c2 * a,
            ("+", 0): s2 * E(b1 - b2) * b,
            ("-", 0): s2 * E(a1 + b2) * a,
            ("-", -2): -E(b1 - a2) * c2 * b,
        })

    a3, b3 = p3.alpha, p3.beta
    c3, s3 = math.cos(p3.theta), math.sin(p3.theta)
    return ClosedFormState(3, {
        ("+", 3): E(a1 + a2 + a3) * c3 * c2 * a,
        ("+", 1): E(b1 - b2 + a3) * c3 * s2 * b + E(a1 + b2 - b3) * s3 * s2 * a,
        ("-", 1): E(a1 + a2 + b3) * s3 * c2 * a,
        ("+", -1): -E(b1 - a2 - b3) * s3 * c2 * b,
        ("-", -1): -(E(a1 + b2 - a3) * c3 * s2 * a - E(b1 - b2 + b3) * s3 * s2 * b),
        ("-", -3): E(b1 - a2 - a3) * c3 * c2 * b,
    })


def _shift_matrix(size: int) -> np.ndarray:
    """Shift on the basis ``(+, n=-T..T), (-, n=-T..T)``; edge flux is dropped."""
    right = np.eye(size, k=-1)  # |n> -> |n+1>
    left = np.eye(size, k=1)  # |n> -> |n-1>
    zero = np.zeros((size, size))
    return np.block([[right, zero], [zero, left]])


def dense_evolve(init: InitialState, schedule: Schedule, steps: int) -> WalkState:
    """Evolve by explicit ``S (U_t x I)`` matrix products on ``2(2T+1)`` states."""
    if steps > DENSE_MAX_STEPS:
        raise UnsupportedError(
            f"dense evolution is limited to {DENSE_MAX_STEPS} steps, got {steps}"
        )
    if steps < 0:
        raise UnsupportedError("steps must be non-negative")
    size = 2 * steps + 1
    psi = np.zeros(2 * size, dtype=np.complex128)
    psi[steps] = math.cos(init.eta)
    psi[size + steps] = cmath.exp(1j * init.gamma) * math.sin(init.eta)
    shift = _shift_matrix(size)
    ident = np.eye(size)
    for t in range(1, steps + 1):
        p = schedule.params(t)
        ct, st = math.cos(p.theta), math.sin(p.theta)
        coin = np.array([
            [cmath.exp(1j * p.alpha) * ct, cmath.exp(-1j * p.beta) * st],
            [cmath.exp(1j * p.beta) * st, -cmath.exp(-1j * p.alpha) * ct],
        ])
        psi = shift @ (np.kron(coin, ident) @ psi)
    return WalkState(steps, psi[:size].copy(), psi[size:].copy())


def pmf_formulas_t123(
    init: InitialState, p1: CoinParams, p2: CoinParams, p3: CoinParams
) -> dict[int, dict[int, float]]:
    """Position distributions for ``t = 1, 2, 3`` from the trigonometric formulas."""
    phi = p1.alpha + p1.beta - init.gamma
    cross = math.sin(2 * init.eta) * math.sin(2 * p1.theta) * math.cos(phi)
    diag = math.cos(2 * init.eta) * math.cos(2 * p1.theta)
    a_sq = 0.5 * (1.0 + diag + cross)
    b_sq = 0.5 * (1.0 - diag - cross)
    c2sq, s2sq = math.cos(p2.theta) ** 2, math.sin(p2.theta) ** 2
    c3sq, s3sq = math.cos(p3.theta) ** 2, math.sin(p3.theta) ** 2
    c = interference_term(init, p1, p2, p3)
    mix = math.sin(2 * p3.theta) * s2sq * c
    return {
        1: {1: a_sq, -1: b_sq},
        2: {2: c2sq * a_sq, 0: s2sq, -2: c2sq * b_sq},
        3: {
            3: c3sq * c2sq * a_sq,
            1: s3sq * a_sq + c3sq * s2sq * b_sq + mix,
            -1: c3sq * s2sq * a_sq + s3sq * b_sq - mix,
            -3: c3sq * c2sq * b_sq,
        },
    }


def interference_term(
    init: InitialState, p1: CoinParams, p2: CoinParams, p3: CoinParams
) -> float:
    a, b = _ab(init, p1)
    phase = (p1.alpha - p3.alpha) - (p1.beta - 2 * p2.beta + p3.beta)
    return (cmath.exp(1j * phase) * b.conjugate() * a).real


def chirality_formulas(
    init: InitialState, p1: CoinParams, p2: CoinParams, p3: CoinParams
) -> dict[int, tuple[float, float]]:
    """``(P_+, P_-)`` for ``t = 1, 2, 3`` from the closed-form expressions."""
    rho = pmf_formulas_t123(init, p1, p2, p3)
    r_p, r_m = rho[1][1], rho[1][-1]
    c2sq, s2sq = math.cos(p2.theta) ** 2, math.sin(p2.theta) ** 2
    a_sq, b_sq = r_p, r_m
    base = math.cos(2 * p3.theta) * math.cos(2 * p2.theta) * (a_sq - b_sq)
    mix = math.sin(2 * p3.theta) * s2sq * interference_term(init, p1, p2, p3)
    return {
        1: (r_p, r_m),
        2: (c2sq * r_p + s2sq * r_m, c2sq * r_m + s2sq * r_p),
        3: (0.5 * (1.0 + base) + mix, 0.5 * (1.0 - base) - mix),
    }


def classical_walk_mc(
    steps: int, walkers: int, seed: int, theta: float = math.pi / 4, eta: float = math.pi / 4
) -> dict[int, float]:
    """Empirical position distribution of the classical persistent walk.

    Each walker starts moving right with probability ``cos(eta)^2`` and keeps
    its direction at every step with probability ``cos(theta)^2``.
    """
    rng = np.random.default_rng(seed)
    direction = np.where(rng.random(walkers) < math.cos(eta) ** 2, 1, -1)
    keep = math.cos(theta) ** 2
    position = np.zeros(walkers, dtype=np.int64)
    for _ in range(steps):
        flip = rng.random(walkers) >= keep
        direction = np.where(flip, -direction, direction)
        position += direction
    sites, counts = np.unique(position, return_counts=True)
    return {int(n): c / walkers for n, c in zip(sites, counts)}
