"""Entanglement dynamics of two Gaussian particles coupled to independent Ohmic heat baths."""

from .analysis import (
    Regime,
    Trajectory,
    asymptote,
    classify_regime,
    entanglement_trajectory,
    esd_time,
    revivals,
)
from .forms import QuadraticForm
from .params import PhysicalConstants, SystemParams
from .states import InitialState, initial_covariance
from .symplectic import (
    is_physical,
    log_negativity,
    partial_transpose,
    symplectic_eigenvalues,
    symplectic_form,
)

__version__ = "0.1.0"
