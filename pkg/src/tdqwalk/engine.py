"""Exact evolution of the walker's two-component wave function.

Storage is dense over the lattice.  A :class:`Walker` owns two pairs of
buffers covering ``n in [-capacity-1, capacity+1]`` and swaps them every
step; only sites with ``n = t (mod 2)`` are written, the rest keep exact
zeros from allocation.
"""

from __future__ import annotations

import types
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from . import kernels
from .coin import CoinParams, InitialState, coin_entries, initial_spinor
from .errors import IntegrityError, UsageError
from .schedules import Schedule

NORM_TOL = 1e-9
CHECK_EVERY = 1024


@dataclass(frozen=True, eq=False)
class WalkState:
    """Snapshot at step ``t``; array index ``i`` holds site ``n = i - t``."""

    t: int
    psi_plus: np.ndarray
    psi_minus: np.ndarray

    def __post_init__(self) -> None:
        size = 2 * self.t + 1
        if self.psi_plus.shape != (size,) or self.psi_minus.shape != (size,):
            raise UsageError(f"state at t={self.t} needs arrays of length {size}")

    @property
    def origin_offset(self) -> int:
        return self.t

    @property
    def sites(self) -> np.ndarray:
        return np.arange(-self.t, self.t + 1)

    def amplitudes(self, n: int) -> tuple[complex, complex]:
        if abs(n) > self.t:
            return 0j, 0j
        i = n + self.t
        return complex(self.psi_plus[i]), complex(self.psi_minus[i])

    def norm(self) -> float:
        return float(np.vdot(self.psi_plus, self.psi_plus).real
                     + np.vdot(self.psi_minus, self.psi_minus).real)


class Walker:
    """Mutable evolution with preallocated double buffers.

    ``capacity`` is the largest ``t`` the buffers hold; stepping past it
    reallocates.  ``check_every`` sets how often the norm is tested against
    ``tol``; the state is never renormalized.
    """

    def __init__(
        self,
        init: InitialState | WalkState,
        capacity: int = 64,
        *,
        check_every: int = CHECK_EVERY,
        tol: float = NORM_TOL,
        kernel: types.ModuleType | None = None,
    ):
        if check_every < 1:
            raise UsageError("check_every must be >= 1")
        self.check_every = check_every
        self.tol = tol
        self._kernel = kernel if kernel is not None else kernels
        if isinstance(init, WalkState):
            self.t = init.t
            self._alloc(max(capacity, init.t))
            lo = self._offset - init.t
            self._p[lo:lo + 2 * init.t + 1] = init.psi_plus
            self._m[lo:lo + 2 * init.t + 1] = init.psi_minus
        else:
            self.t = 0
            self._alloc(max(capacity, 0))
            self._p[self._offset], self._m[self._offset] = initial_spinor(init)

    def _alloc(self, capacity: int) -> None:
        self.capacity = capacity
        self._offset = capacity + 1
        size = 2 * capacity + 3
        self._p = np.zeros(size, dtype=np.complex128)
        self._m = np.zeros(size, dtype=np.complex128)
        self._q = np.zeros(size, dtype=np.complex128)
        self._r = np.zeros(size, dtype=np.complex128)

    def _grow(self) -> None:
        old_p, old_m, old_off, t = self._p, self._m, self._offset, self.t
        self._alloc(max(2 * self.capacity, 16))
        lo = self._offset - t
        self._p[lo:lo + 2 * t + 1] = old_p[old_off - t:old_off + t + 1]
        self._m[lo:lo + 2 * t + 1] = old_m[old_off - t:old_off + t + 1]

    def step(self, params: CoinParams) -> None:
        if self.t >= self.capacity:
            self._grow()
        t = self.t + 1
        u_pp, u_pm, u_mp, u_mm = coin_entries(params)
        self._kernel.advance(
            self._p, self._m, self._q, self._r,
            self._offset - t, self._offset + t,
            u_pp, u_pm, u_mp, u_mm,
        )
        self._p, self._q = self._q, self._p
        self._m, self._r = self._r, self._m
        self.t = t
        if t % self.check_every == 0:
            self.check_norm()

    def run(self, schedule: Schedule, until: int) -> None:
        """Advance to step ``until`` using the schedule's coins."""
        for t in range(self.t + 1, until + 1):
            self.step(schedule.params(t))

    def norm(self) -> float:
        return float(self._kernel.norm_sq(
            self._p, self._m, self._offset - self.t, self._offset + self.t
        ))

    def check_norm(self) -> float:
        total = self.norm()
        if not abs(total - 1.0) <= self.tol:
            raise IntegrityError(
                f"total probability {total!r} at t={self.t} drifted beyond {self.tol}"
            )
        return total

    def snapshot(self) -> WalkState:
        lo, hi = self._offset - self.t, self._offset + self.t + 1
        return WalkState(self.t, self._p[lo:hi].copy(), self._m[lo:hi].copy())


@dataclass
class Trajectory:
    """Snapshots keyed by step, in increasing order of ``t``."""

    states: dict[int, WalkState] = field(default_factory=dict)

    @property
    def times(self) -> list[int]:
        return list(self.states)

    @property
    def final(self) -> WalkState:
        return self.states[max(self.states)]

    def __getitem__(self, t: int) -> WalkState:
        return self.states[t]

    def __len__(self) -> int:
        return len(self.states)


def new_state(init: InitialState) -> WalkState:
    plus, minus = initial_spinor(init)
    return WalkState(0, np.array([plus]), np.array([minus]))


def step(state: WalkState, params: CoinParams) -> WalkState:
    """Return the state one step after ``state`` (the input is left untouched)."""
    walker = Walker(state, capacity=state.t + 1)
    walker.step(params)
    return walker.snapshot()


def _checkpoints(steps: int, checkpoints: Iterable[int]) -> list[int]:
    times = sorted(set(int(c) for c in checkpoints) | {steps})
    bad = [c for c in times if c < 0 or c > steps]
    if bad:
        raise UsageError(f"checkpoints {bad} fall outside [0, {steps}]")
    return times


def evolve(
    init: InitialState,
    schedule: Schedule,
    steps: int,
    checkpoints: Iterable[int] = (),
    *,
    check_every: int = CHECK_EVERY,
    kernel: types.ModuleType | None = None,
) -> Trajectory:
    """Apply ``steps`` coin-and-shift steps, recording the requested snapshots.

    The final step is always recorded and the norm is verified there.
    """
    if steps < 0:
        raise UsageError(f"steps must be >= 0, got {steps}")
    times = _checkpoints(steps, checkpoints)
    walker = Walker(init, capacity=steps, check_every=check_every, kernel=kernel)
    traj = Trajectory()
    for t in times:
        walker.run(schedule, t)
        traj.states[t] = walker.snapshot()
    walker.check_norm()
    return traj


def run_walk(init: InitialState, schedule: Schedule, steps: int, **kwargs) -> WalkState:
    """Final state after ``steps`` steps."""
    return evolve(init, schedule, steps, **kwargs).final

