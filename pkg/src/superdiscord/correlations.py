"""Mutual information, classical correlation, discord and super-discord.

Two independent routes are provided:

* closed forms for the isotropic dimer state ``(1 + G sigma_1.sigma_2)/4``
  (:func:`discord_closed_form`, :func:`super_discord_closed_form`);
* a numeric optimizer over measurement axes on qubit B that works for any
  two-qubit state (:func:`quantum_discord_numeric`,
  :func:`super_discord_numeric`).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize
from scipy.special import xlogy

from . import _kernels, qlinalg
from .errors import (
    InternalConsistencyError,
    OptimizerDidNotConverge,
    OutOfRange,
)
from .measurements import PROJECTIVE, BlochDirection, check_strength, strength_tanh

G_MIN = -1.0
G_MAX = 1.0 / 3.0
G_TOL = 1e-12
#: Smallest G accepted when building a state (PSD headroom near the singlet).
G_STATE_MIN = -1.0 + 1e-12
CLAMP_TOL = 1e-10

_LN2 = math.log(2.0)


@dataclass(frozen=True)
class OptimizerConfig:
    """Grid seed plus Nelder-Mead refinement over the Bloch sphere."""

    n_theta: int = 64
    n_phi: int = 64
    fatol: float = 1e-12
    xatol: float = 1e-7
    max_iter: int = 500
    refine: bool = True


@dataclass(frozen=True)
class CorrelationReport:
    mutual_information: float
    classical_correlation: float
    discord: float
    optimal_direction: BlochDirection
    strength: float = PROJECTIVE


# ---------------------------------------------------------------------------
# states and information quantities


def check_g(g, lower=G_MIN):
    """Validate a spin correlation value (scalar or array)."""
    arr = np.asarray(g, dtype=float)
    lower_tol = G_TOL if lower == G_MIN else 0.0
    if np.any(np.isnan(arr)) or np.any(arr < lower - lower_tol) or np.any(arr > G_MAX + G_TOL):
        raise OutOfRange(f"spin correlation G={g} outside [{lower}, 1/3]")
    return np.clip(arr, lower, G_MAX) if arr.ndim else float(np.clip(arr, lower, G_MAX))


def werner_state(g):
    """Dimer state ``(1 + G sigma_1.sigma_2)/4``."""
    g = check_g(g, lower=G_STATE_MIN)
    return qlinalg.validate_state((np.eye(4) + g * qlinalg.SPIN_DOT) / 4.0)


def _clamp_nonnegative(value, what):
    if value < -CLAMP_TOL:
        raise InternalConsistencyError(f"{what} = {value:.3e} is negative beyond tolerance")
    return max(value, 0.0)


def mutual_information(rho):
    """``S(A) + S(B) - S(AB)`` in bits."""
    rho = qlinalg.validate_state(rho)
    s_a = qlinalg.von_neumann_entropy(qlinalg.partial_trace(rho, "A"))
    s_b = qlinalg.von_neumann_entropy(qlinalg.partial_trace(rho, "B"))
    s_ab = qlinalg.von_neumann_entropy(rho)
    return _clamp_nonnegative(s_a + s_b - s_ab, "mutual information")


# ---------------------------------------------------------------------------
# numeric optimizer


def direction_grid(config=OptimizerConfig()):
    """Seed grid, theta-major: ``theta`` inclusive of both poles, ``phi`` in [0, 2pi)."""
    thetas = np.linspace(0.0, math.pi, config.n_theta)
    phis = np.linspace(0.0, 2.0 * math.pi, config.n_phi, endpoint=False)
    tt, pp = np.meshgrid(thetas, phis, indexing="ij")
    return tt.ravel(), pp.ravel()


def _maximize_information_gain(rho, t, config):
    """Return ``(max_n [S(A) - <S(A|n)>], argmax)`` for tanh-strength ``t``."""
    rho = qlinalg.validate_state(rho)
    s_a = qlinalg.von_neumann_entropy(qlinalg.partial_trace(rho, "A"))
    thetas, phis = direction_grid(config)
    cond = _kernels.conditional_entropy(rho, thetas, phis, t)
    # argmin returns the first minimum: smallest theta, then smallest phi
    best = int(np.argmin(cond))
    best_x = np.array([thetas[best], phis[best]])
    best_f = float(cond[best])

    if config.refine:
        def objective(v):
            return float(_kernels.conditional_entropy(rho, v[:1], v[1:], t)[0])

        step_th = math.pi / max(config.n_theta - 1, 1)
        step_ph = 2.0 * math.pi / config.n_phi
        simplex = np.array([best_x, best_x + [step_th, 0.0], best_x + [0.0, step_ph]])
        res = minimize(
            objective, best_x, method="Nelder-Mead",
            options={"initial_simplex": simplex, "fatol": config.fatol,
                     "xatol": config.xatol, "maxiter": config.max_iter},
        )
        if not res.success:
            raise OptimizerDidNotConverge(
                f"Nelder-Mead stopped after {res.nit} iterations: {res.message}")
        if res.fun < best_f:
            best_f = float(res.fun)
            best_x = res.x

    gain = s_a - best_f
    if gain < 0.0:
        gain = _clamp_nonnegative(gain, "classical correlation")
    return gain, BlochDirection.from_angles(best_x[0], best_x[1])


def classical_correlation_projective(rho, optimizer=OptimizerConfig()):
    """Maximal information about A gained by a projective measurement on B.

    Returns ``(bits, BlochDirection)``.
    """
    return _maximize_information_gain(rho, 1.0, optimizer)


def classical_correlation_weak(rho, x, optimizer=OptimizerConfig()):
    """Weak-measurement analogue of :func:`classical_correlation_projective`."""
    return _maximize_information_gain(rho, strength_tanh(x), optimizer)


def _report(rho, x, optimizer):
    mi = mutual_information(rho)
    cc, direction = _maximize_information_gain(rho, strength_tanh(x), optimizer)
    discord = _clamp_nonnegative(mi - cc, "discord")
    return CorrelationReport(
        mutual_information=mi,
        classical_correlation=mi - discord,
        discord=discord,
        optimal_direction=direction,
        strength=float(x),
    )


def quantum_discord_numeric(rho, optimizer=OptimizerConfig()):
    return _report(rho, PROJECTIVE, optimizer)


def super_discord_numeric(rho, x, optimizer=OptimizerConfig()):
    """Super-quantum discord of ``rho`` for weak measurements of strength ``x`` on B."""
    check_strength(x)
    return _report(rho, x, optimizer)


# ---------------------------------------------------------------------------
# closed forms for the dimer state


def _xlog2(a, b):
    return xlogy(a, b) / _LN2


def discord_closed_form(g):
    """Quantum discord (bits) of ``(1 + G sigma_1.sigma_2)/4``. Vectorized over ``g``."""
    g = check_g(g)
    out = (_xlog2((1 + g) / 4, 1 + g)
           - _xlog2((1 - g) / 2, 1 - g)
           + _xlog2((1 - 3 * g) / 4, 1 - 3 * g))
    return np.maximum(out, 0.0) if np.ndim(out) else max(float(out), 0.0)


def super_discord_closed_form(g, x):
    """Super-quantum discord (bits) of the dimer state at strength ``x``.

    ``x`` may be ``inf`` for the projective limit; vectorized over ``g``.
    """
    g = check_g(g)
    t = strength_tanh(x)
    a = (1 - 3 * g) / 4
    b = (1 + g) / 4
    lo = (1 - g * t) / 2
    hi = (1 + g * t) / 2
    out = 1 + _xlog2(a, a) + 3 * _xlog2(b, b) - _xlog2(lo, lo) - _xlog2(hi, hi)
    return np.maximum(out, 0.0) if np.ndim(out) else max(float(out), 0.0)


def mutual_information_closed_form(g):
    """Mutual information of the dimer state; from its spectrum ``{3x(1+G)/4, (1-3G)/4}``."""
    g = check_g(g)
    a = (1 - 3 * g) / 4
    b = (1 + g) / 4
    out = 2 + _xlog2(a, a) + 3 * _xlog2(b, b)
    return np.maximum(out, 0.0) if np.ndim(out) else max(float(out), 0.0)
