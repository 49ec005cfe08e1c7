"""Coin-space algebra for the time-dependent walk.

Matrices use the basis ordering ``(+, -)``: row index is the outgoing coin
state, column index the incoming one, so ``U[0, 1]`` is the ``|+><-|``
amplitude.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameterError

TWO_PI = 2.0 * math.pi

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)


def _check_finite(**values: float) -> None:
    for name, value in values.items():
        if not math.isfinite(value):
            raise InvalidParameterError(f"{name} must be finite, got {value!r}")


@dataclass(frozen=True)
class CoinParams:
    """Phases ``alpha``, ``beta`` and mixing angle ``theta`` of one step (radians)."""

    alpha: float
    beta: float
    theta: float

    def __post_init__(self) -> None:
        _check_finite(alpha=self.alpha, beta=self.beta, theta=self.theta)

    def canonical(self) -> CoinParams:
        """Return the same coin with every angle reduced to ``[0, 2*pi)``."""
        return CoinParams(
            _wrap(self.alpha), _wrap(self.beta), _wrap(self.theta)
        )


@dataclass(frozen=True)
class InitialState:
    """Coin superposition ``cos(eta)|+> + exp(i*gamma) sin(eta)|->`` at the origin."""

    eta: float
    gamma: float = 0.0

    def __post_init__(self) -> None:
        _check_finite(eta=self.eta, gamma=self.gamma)


@dataclass(frozen=True)
class BlochVector:
    x: float
    y: float
    z: float

    def dot_sigma(self) -> np.ndarray:
        """Pauli projection ``u . sigma`` as a 2x2 matrix."""
        return self.x * SIGMA_X + self.y * SIGMA_Y + self.z * SIGMA_Z


def _wrap(angle: float) -> float:
    r = math.fmod(angle, TWO_PI)
    if r < 0.0:
        r += TWO_PI
    # fmod of a tiny negative number can round back up to exactly 2*pi
    return 0.0 if r >= TWO_PI else r


def coin_entries(params: CoinParams) -> tuple[complex, complex, complex, complex]:
    """``(u_pp, u_pm, u_mp, u_mm)`` of the coin operator."""
    c = math.cos(params.theta)
    s = math.sin(params.theta)
    ea = cmath.exp(1j * params.alpha)
    eb = cmath.exp(1j * params.beta)
    return ea * c, eb.conjugate() * s, eb * s, -ea.conjugate() * c


def coin_matrix(params: CoinParams) -> np.ndarray:
    """Unitary 2x2 coin for one step.

    >>> coin_matrix(CoinParams(0.0, 0.0, 0.0)).real
    array([[ 1.,  0.],
           [ 0., -1.]])
    """
    u_pp, u_pm, u_mp, u_mm = coin_entries(params)
    return np.array([[u_pp, u_pm], [u_mp, u_mm]], dtype=np.complex128)


def initial_spinor(init: InitialState) -> tuple[complex, complex]:
    return (
        complex(math.cos(init.eta)),
        cmath.exp(1j * init.gamma) * math.sin(init.eta),
    )


def relative_phase(init: InitialState, first: CoinParams) -> float:
    """``alpha_1 + beta_1 - gamma``, the only way ``gamma`` enters early probabilities."""
    return first.alpha + first.beta - init.gamma


def ab_amplitudes(init: InitialState, first: CoinParams) -> tuple[complex, complex]:
    """Phase-stripped amplitudes ``(a, b)`` of the walker after the first step.

    The state at ``t = 1`` is ``exp(i*alpha_1) a |+,1> + exp(i*beta_1) b |-,-1>``.
    """
    ce, se = math.cos(init.eta), math.sin(init.eta)
    c1, s1 = math.cos(first.theta), math.sin(first.theta)
    w = cmath.exp(-1j * relative_phase(init, first))
    a = ce * c1 + w * se * s1
    b = ce * s1 - w * se * c1
    return a, b


def interference_c(
    alpha1: float,
    alpha3: float,
    beta1: float,
    beta2: float,
    beta3: float,
    a: complex,
    b: complex,
) -> float:
    """Cross term controlling the left/right asymmetry of the ``t = 3`` PMF."""
    phase = (alpha1 - alpha3) - (beta1 - 2.0 * beta2 + beta3)
    return (cmath.exp(1j * phase) * b.conjugate() * a).real


def bloch_vector(theta: float, beta: float) -> BlochVector:
    """Unit vector with polar angle ``theta`` and azimuth ``beta``.

    Its Pauli projection reproduces ``coin_matrix(CoinParams(0, beta, theta))``.
    """
    _check_finite(theta=theta, beta=beta)
    st = math.sin(theta)
    return BlochVector(st * math.cos(beta), st * math.sin(beta), math.cos(theta))
