r"""
Characteristics solver for quadratic two-particle Hamiltonians.

The Fourier-transformed master equation is first order in the variables
``v = (z1, z2, q1, q2)``. Its characteristics obey ``dv/dt = M v / (2m)`` and
along them the thermal terms multiply the characteristic function by
``exp(-(4 gamma1 k T1 z1^2 + 4 gamma2 k T2 z2^2) dt)``. For a Gaussian
initial state the solution stays Gaussian with quadratic form

.. math::

    K(t) = \Phi^T K_0 \Phi + \int_0^t e^{F^T u} N e^{F u}\,du,
    \qquad \Phi = e^{F t},\quad F = -M / 2m,

where ``Phi`` carries ``v`` at time ``t`` back to its starting point and
``N = diag(4 gamma1 k T1, 4 gamma2 k T2, 0, 0)``.

The integral is computed with the block-exponential construction of Van Loan
on a short step followed by repeated doubling, so over-, under- and critically
damped systems share one code path.
"""

import math

import numpy as np
from scipy.linalg import expm

from .errors import InvalidArgument, NumericalFailure, UnsupportedConfiguration
from .forms import QuadraticForm
from .params import SystemParams
from .states import InitialState, initial_form
from .symplectic import validate_covariance

__all__ = [
    "build_drift",
    "drift_eigenvalues",
    "diffusion_weight",
    "flow_and_diffusion",
    "propagate_form",
    "propagate",
    "covariance_at",
]

# norm of F * h below which a single Van Loan step is taken
STEP_NORM = 0.5


def build_drift(p: SystemParams) -> np.ndarray:
    """Drift matrix ``M`` acting on ``(z1, z2, q1, q2)``."""
    w = 4 * p.m**2 * p.omega0**2
    return np.array(
        [
            [2 * p.gamma1, 0.0, 1.0, 0.0],
            [0.0, 2 * p.gamma2, 0.0, 1.0],
            [-w, w, 0.0, 0.0],
            [w, -w, 0.0, 0.0],
        ]
    )


def drift_eigenvalues(p: SystemParams) -> np.ndarray:
    """Eigenvalues of ``M`` for equal friction, ``(0, 2g, g + r, g - r)``.

    ``r = sqrt(g**2 - 8 m**2 omega0**2)`` is imaginary when under-damped.
    """
    if p.gamma1 != p.gamma2:
        raise UnsupportedConfiguration("closed-form drift eigenvalues need gamma1 == gamma2")
    g = p.gamma1
    root = np.sqrt(complex(g**2 - 8 * p.m**2 * p.omega0**2))
    return np.array([0.0, 2 * g, g + root, g - root])


def diffusion_weight(p: SystemParams) -> np.ndarray:
    return np.diag([4 * p.gamma1 * p.k * p.T1, 4 * p.gamma2 * p.k * p.T2, 0.0, 0.0])


def _check_supported(p, allow_unequal_baths):
    if p.omega0 > 0 and not p.equal_baths and not allow_unequal_baths:
        raise UnsupportedConfiguration(
            "omega0 > 0 with unequal baths requires allow_unequal_baths=True"
        )


def flow_and_diffusion(p: SystemParams, t: float) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(Phi, W)``: the backward characteristic flow and the diffusion integral."""
    if not t >= 0:
        raise InvalidArgument(f"t must be non-negative, got {t!r}")
    f = -build_drift(p) / (2 * p.m)
    n = diffusion_weight(p)
    if t == 0:
        return np.eye(4), np.zeros((4, 4))
    scale = np.linalg.norm(f, 1) * t
    doublings = max(0, math.ceil(math.log2(scale / STEP_NORM))) if scale > STEP_NORM else 0
    h = t / 2**doublings

    block = np.zeros((8, 8))
    block[:4, :4] = -f.T
    block[:4, 4:] = n
    block[4:, 4:] = f
    e = expm(block * h)
    phi = e[4:, 4:]
    w = phi.T @ e[:4, 4:]
    for _ in range(doublings):
        w = w + phi.T @ w @ phi
        phi = phi @ phi
    w = 0.5 * (w + w.T)
    if not (np.all(np.isfinite(phi)) and np.all(np.isfinite(w))):
        raise NumericalFailure(f"matrix exponential did not produce finite values at t={t!r}")
    return phi, w


def propagate_form(form: QuadraticForm, p: SystemParams, t: float, *, allow_unequal_baths=False) -> QuadraticForm:
    """Evolve an arbitrary Gaussian characteristic function by a time ``t``."""
    _check_supported(p, allow_unequal_baths)
    phi, w = flow_and_diffusion(p, t)
    k = phi.T @ form.matrix() @ phi + w
    return QuadraticForm.from_matrix(k)


def propagate(st: InitialState, p: SystemParams, t: float, *, allow_unequal_baths=False) -> QuadraticForm:
    """Coefficients of the characteristic function at ``t`` for the initial state ``st``.

    Raises
    ------
    UnsupportedConfiguration
        If ``omega0 > 0`` and the baths differ, unless ``allow_unequal_baths``.
    """
    return propagate_form(initial_form(st, p.hbar), p, t, allow_unequal_baths=allow_unequal_baths)


def covariance_at(st: InitialState, p: SystemParams, t: float, *, allow_unequal_baths=False) -> np.ndarray:
    qf = propagate(st, p, t, allow_unequal_baths=allow_unequal_baths)
    return validate_covariance(qf.covariance())
