"""Projective and weak two-outcome measurements on qubit B."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import qlinalg
from .errors import NegativeStrength, ZeroProbability

#: Measurement strength sentinel for the projective limit.
PROJECTIVE = math.inf

ZERO_PROBABILITY = 1e-14

_TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class BlochDirection:
    """Measurement axis on the Bloch sphere, ``theta`` in [0, pi], ``phi`` in [0, 2pi)."""

    theta: float = 0.0
    phi: float = 0.0

    def __post_init__(self):
        if not (0.0 <= self.theta <= math.pi):
            raise ValueError(f"theta={self.theta} outside [0, pi]")
        if not (0.0 <= self.phi < _TWO_PI):
            raise ValueError(f"phi={self.phi} outside [0, 2pi)")

    @classmethod
    def from_angles(cls, theta, phi):
        """Build a direction from unrestricted angles by folding them back
        into the canonical ranges."""
        n = _unit_vector(theta, phi)
        th = math.acos(min(1.0, max(-1.0, n[2])))
        ph = math.atan2(n[1], n[0]) % _TWO_PI
        if ph >= _TWO_PI:
            ph = 0.0
        return cls(th, ph)

    @property
    def vector(self):
        return _unit_vector(self.theta, self.phi)


def _unit_vector(theta, phi):
    st = math.sin(theta)
    return np.array([st * math.cos(phi), st * math.sin(phi), math.cos(theta)])


@dataclass(frozen=True)
class WeakMeasurementPair:
    p_plus: np.ndarray   # P(x)
    p_minus: np.ndarray  # P(-x)


@dataclass(frozen=True)
class ConditionalOutcome:
    state: np.ndarray
    probability: float


def check_strength(x):
    """Validate a measurement strength; returns it as a float."""
    x = float(x)
    if math.isnan(x) or x < 0.0:
        raise NegativeStrength(f"measurement strength must be >= 0, got {x}")
    return x


def strength_tanh(x):
    """tanh of the strength with the projective sentinel mapped to exactly 1."""
    x = check_strength(x)
    return 1.0 if math.isinf(x) else math.tanh(x)


def projectors_from_direction(direction):
    """Orthogonal rank-1 projectors ``(Pi_plus, Pi_minus) = (1 +- n.sigma)/2``."""
    n = direction.vector
    n_sigma = n[0] * qlinalg.SIGMA_X + n[1] * qlinalg.SIGMA_Y + n[2] * qlinalg.SIGMA_Z
    return 0.5 * (qlinalg.IDENTITY2 + n_sigma), 0.5 * (qlinalg.IDENTITY2 - n_sigma)


def weak_pair(direction, x):
    """Weak measurement operators ``P(x)`` and ``P(-x)`` along ``direction``.

    At the projective sentinel the pair is exactly ``(Pi_minus, Pi_plus)``.
    """
    x = check_strength(x)
    pi_plus, pi_minus = projectors_from_direction(direction)
    if math.isinf(x):
        return WeakMeasurementPair(p_plus=pi_minus, p_minus=pi_plus)
    t = math.tanh(x)
    small = math.sqrt((1.0 - t) / 2.0)
    large = math.sqrt((1.0 + t) / 2.0)
    return WeakMeasurementPair(
        p_plus=small * pi_plus + large * pi_minus,
        p_minus=large * pi_plus + small * pi_minus,
    )


def apply_on_b(rho, op):
    """Unnormalized post-measurement state of A: ``Tr_B[(I x P) rho (I x P)^H]``."""
    big = qlinalg.kron(qlinalg.IDENTITY2, op)
    sandwiched = big @ np.asarray(rho, dtype=np.complex128) @ big.conj().T
    return np.einsum("ijkj->ik", sandwiched.reshape(2, 2, 2, 2))


def conditional_state_weak(rho, direction, x, outcome):
    """State of A conditioned on weak-measurement outcome ``outcome`` on B.

    ``outcome`` is ``+1`` for ``P(x)`` and ``-1`` for ``P(-x)`` (the strings
    ``'+'``/``'-'`` are accepted too).
    """
    rho = qlinalg.validate_state(rho)
    sign = _outcome_sign(outcome)
    pair = weak_pair(direction, x)
    op = pair.p_plus if sign > 0 else pair.p_minus
    unnorm = apply_on_b(rho, op)
    p = float(np.trace(unnorm).real)
    if p < ZERO_PROBABILITY:
        raise ZeroProbability(f"outcome {'+' if sign > 0 else '-'} has probability {p:.3e}")
    state = qlinalg.validate_qubit(unnorm / p)
    return ConditionalOutcome(state=state, probability=min(max(p, 0.0), 1.0))


def conditional_state_projective(rho, direction, outcome):
    """Conditional state of A after projecting B onto ``Pi_plus`` or ``Pi_minus``."""
    rho = qlinalg.validate_state(rho)
    pi_plus, pi_minus = projectors_from_direction(direction)
    op = pi_plus if _outcome_sign(outcome) > 0 else pi_minus
    unnorm = apply_on_b(rho, op)
    p = float(np.trace(unnorm).real)
    if p < ZERO_PROBABILITY:
        raise ZeroProbability(f"projector outcome has probability {p:.3e}")
    return ConditionalOutcome(state=qlinalg.validate_qubit(unnorm / p), probability=p)


def _outcome_sign(outcome):
    if outcome in (1, "+", "plus"):
        return 1
    if outcome in (-1, "-", "minus"):
        return -1
    raise ValueError(f"outcome must be + or -, got {outcome!r}")
