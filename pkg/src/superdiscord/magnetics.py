"""Thermodynamics of the isotropic spin-1/2 Heisenberg dimer.

Conventions: ``H = -(J/2) sigma_1.sigma_2`` with ``J`` given as ``J/k_B`` in
kelvin (``J < 0`` antiferromagnetic). Susceptibilities are molar, CGS-emu
(emu/mol).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np

from . import qlinalg
from .errors import (
    InvalidModel,
    InvalidTemperature,
    NonPositiveComponent,
    OutOfPhysicalRange,
)


@dataclass(frozen=True)
class PhysicalConstants:
    """CODATA 2018, CGS units."""

    avogadro: float = 6.02214076e23        # 1/mol
    boltzmann: float = 1.380649e-16        # erg/K
    bohr_magneton: float = 9.2740100783e-21  # erg/G
    hc_over_kb: float = 1.438776877        # K cm

    @property
    def curie_prefactor(self):
        """``N_A mu_B^2 / k_B`` in emu K / mol."""
        return self.avogadro * self.bohr_magneton ** 2 / self.boltzmann


CONSTANTS = PhysicalConstants()

J_LIMIT = 1e5
#: Guard band on G inverted from measured susceptibility.
PHYSICAL_RANGE_MARGIN = 0.02

GFactor = Union[float, Tuple[float, float, float]]


def effective_g(components):
    """Powder-averaged g-factor: root mean square of the three components."""
    comps = tuple(float(c) for c in components)
    if len(comps) != 3:
        raise ValueError(f"expected 3 g components, got {len(comps)}")
    if any(not c > 0.0 for c in comps):
        raise NonPositiveComponent(f"g components must be > 0, got {comps}")
    return math.sqrt(sum(c * c for c in comps) / 3.0)


def _g_scalar(g):
    if np.ndim(g) == 0:
        g = float(g)
        if not g > 0.0:
            raise NonPositiveComponent(f"g must be > 0, got {g}")
        return g
    return effective_g(g)


@dataclass(frozen=True)
class DimerModel:
    j_over_kb: float
    g_factor: GFactor = 2.0
    impurity_fraction: float = 0.0
    temperature_independent_chi: float = 0.0  # emu/mol

    def __post_init__(self):
        if not math.isfinite(self.j_over_kb) or abs(self.j_over_kb) >= J_LIMIT:
            raise InvalidModel(f"|J/k_B| must be < {J_LIMIT:g} K, got {self.j_over_kb}")
        _g_scalar(self.g_factor)
        if not 0.0 <= self.impurity_fraction < 1.0:
            raise InvalidModel(f"impurity_fraction must be in [0, 1), got {self.impurity_fraction}")
        if not math.isfinite(self.temperature_independent_chi):
            raise InvalidModel("temperature_independent_chi must be finite")

    @property
    def g(self):
        """Isotropic (or powder-averaged) g-factor."""
        return _g_scalar(self.g_factor)


def check_temperature(t):
    arr = np.asarray(t, dtype=float)
    if np.any(~np.isfinite(arr)) or np.any(arr <= 0.0):
        raise InvalidTemperature(f"temperature must be finite and > 0 K, got {t}")
    return arr if arr.ndim else float(arr)


def wavenumber_to_kelvin(v):
    """Convert an energy in cm^-1 to kelvin."""
    return v * CONSTANTS.hc_over_kb


def hamiltonian(model):
    """``H / k_B`` in kelvin as a 4x4 matrix."""
    return -0.5 * model.j_over_kb * np.asarray(qlinalg.SPIN_DOT)


def partition_function(model, t):
    """``Z = 3 e^L + e^{-3L}`` with ``L = J / (2 k_B T)``."""
    t = check_temperature(t)
    half = model.j_over_kb / (2.0 * t)
    return 3.0 * np.exp(half) + np.exp(-3.0 * half)


def thermal_state(model, t):
    """Gibbs state of the dimer, built from the triplet/singlet Boltzmann weights."""
    t = check_temperature(t)
    half = model.j_over_kb / (2.0 * t)
    # shift exponents to avoid overflow; the common factor cancels in 1/Z
    shift = max(half, -3.0 * half)
    trip = math.exp(half - shift)
    sing = math.exp(-3.0 * half - shift)
    z = 3.0 * trip + sing
    diag = 0.5 * (trip + sing)   # e^{-L} cosh 2L
    off = 0.5 * (trip - sing)    # e^{-L} sinh 2L
    rho = np.array([
        [trip, 0.0, 0.0, 0.0],
        [0.0, diag, off, 0.0],
        [0.0, off, diag, 0.0],
        [0.0, 0.0, 0.0, trip],
    ], dtype=np.complex128) / z
    return qlinalg.validate_state(rho)


def spin_correlation(model, t):
    """``G(T) = 4 / (3 + exp(-2J/k_B T)) - 1``; vectorized over ``t``."""
    t = check_temperature(t)
    with np.errstate(over="ignore"):
        boltz = np.exp(-2.0 * model.j_over_kb / np.asarray(t))
    g = 4.0 / (3.0 + boltz) - 1.0
    return g if np.ndim(g) else float(g)


def curie_susceptibility(g, t):
    """Curie-law susceptibility of two free spins 1/2, ``N_A g^2 mu_B^2 / (2 k_B T)``."""
    t = check_temperature(t)
    chi = CONSTANTS.curie_prefactor * _g_scalar(g) ** 2 / (2.0 * np.asarray(t))
    return chi if np.ndim(chi) else float(chi)


def bleaney_bowers(model, t):
    """Bare Bleaney-Bowers susceptibility ``2 N_A g^2 mu_B^2 / (k_B T (3 + e^{-2J/k_B T}))``."""
    t = check_temperature(t)
    t_arr = np.asarray(t)
    with np.errstate(over="ignore"):
        boltz = np.exp(-2.0 * model.j_over_kb / t_arr)
    chi = 2.0 * CONSTANTS.curie_prefactor * model.g ** 2 / (t_arr * (3.0 + boltz))
    return chi if np.ndim(chi) else float(chi)


def susceptibility(model, t):
    """Molar susceptibility of the dimer including the optional corrections.

    The impurity term is a Curie tail of free spin-1/2 pairs weighted by
    ``impurity_fraction``; ``temperature_independent_chi`` is added as is.
    """
    chi = bleaney_bowers(model, t)
    if model.impurity_fraction:
        chi = chi + model.impurity_fraction * curie_susceptibility(model.g, t)
    if model.temperature_independent_chi:
        chi = chi + model.temperature_independent_chi
    return chi


def correlation_from_susceptibility(chi, t, g):
    """Invert the Bleaney-Bowers relation: ``G = chi / chi_curie - 1``.

    Values within ``PHYSICAL_RANGE_MARGIN`` outside ``[-1, 1/3]`` are clamped,
    anything further out raises :class:`OutOfPhysicalRange`.
    """
    chi = float(chi)
    if not chi >= 0.0:
        raise ValueError(f"susceptibility must be >= 0, got {chi}")
    g_raw = chi / curie_susceptibility(g, t) - 1.0
    lo, hi = -1.0, 1.0 / 3.0
    if g_raw < lo - PHYSICAL_RANGE_MARGIN or g_raw > hi + PHYSICAL_RANGE_MARGIN:
        raise OutOfPhysicalRange(
            f"inverted G={g_raw:.6g} at T={t} K is outside [-1, 1/3] "
            f"(check g, impurity contamination or non-dimer behaviour)")
    return min(max(g_raw, lo), hi)
