"""Quantum discord and super-quantum discord of thermal Heisenberg spin dimers,
from model parameters or measured magnetic susceptibility."""
from ._accel import USE_NUMBA, backend_name
from .correlations import (
    CorrelationReport,
    OptimizerConfig,
    classical_correlation_projective,
    classical_correlation_weak,
    discord_closed_form,
    mutual_information,
    mutual_information_closed_form,
    quantum_discord_numeric,
    super_discord_closed_form,
    super_discord_numeric,
    werner_state,
)
from .fitting import FitConfig, FitResult, SusceptibilityDataset, fit_bleaney_bowers, predict
from .magnetics import (
    CONSTANTS,
    DimerModel,
    correlation_from_susceptibility,
    effective_g,
    spin_correlation,
    susceptibility,
    thermal_state,
    wavenumber_to_kelvin,
)
from .measurements import PROJECTIVE, BlochDirection, conditional_state_weak, weak_pair
from .qlinalg import partial_trace, validate_state, von_neumann_entropy

__version__ = "0.1.0"
