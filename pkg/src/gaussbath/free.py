r"""
Closed-form evolution of the initial state for two free particles.

Along the characteristics of the Fourier-transformed master equation
``z`` relaxes at rate ``gamma_i / m`` towards ``-q_i / (2 gamma_i)`` while the
thermal term ``4 gamma_i k T_i z_i(t)^2`` accumulates. The kernels below are
the resulting time-dependent weights.
"""

from dataclasses import dataclass
import math

import numpy as np

from .errors import InvalidArgument, NumericalFailure, UnsupportedConfiguration
from .forms import QuadraticForm
from .params import SystemParams
from .states import InitialState
from .symplectic import log_negativity_from_spectrum, validate_covariance

__all__ = [
    "FreeKernels",
    "evolve_kernels",
    "coefficients_at",
    "covariance_at",
    "pt_symplectic_eigs_closed_form",
    "pt_squared_spectrum",
    "log_negativity_closed_form",
]

DISCRIMINANT_TOL = 1e-12


@dataclass(frozen=True)
class FreeKernels:
    """Kernel values for one particle at a fixed time."""

    t: float
    gamma: float
    m: float
    lam: float
    alpha: float
    tau: float

    @property
    def decay(self):
        return math.exp(-self.gamma * self.t / self.m)

    def z0(self, q, z):
        """Starting point at time 0 of the characteristic through ``(q, z)`` at ``t``."""
        return z * self.decay + q / (2 * self.gamma) * math.expm1(-self.gamma * self.t / self.m)


def _kernels(gamma, T, m, k, t):
    return FreeKernels(
        t=t,
        gamma=gamma,
        m=m,
        lam=-2 * m * k * T * math.expm1(-2 * gamma * t / m),
        alpha=-4 * m * k * T / gamma * math.expm1(-gamma * t / m),
        tau=k * T / gamma,
    )


def evolve_kernels(p: SystemParams, t: float) -> tuple[FreeKernels, FreeKernels]:
    """Kernels ``(lambda_i, alpha_i, tau_i, z0_i)`` of both particles at time ``t``."""
    if not t >= 0:
        raise InvalidArgument(f"t must be non-negative, got {t!r}")
    t = float(t)
    return (
        _kernels(p.gamma1, p.T1, p.m, p.k, t),
        _kernels(p.gamma2, p.T2, p.m, p.k, t),
    )


def coefficients_at(st: InitialState, p: SystemParams, t: float) -> QuadraticForm:
    """Characteristic-function coefficients at time ``t`` for free particles.

    ``C_jk`` multiplies ``z_j q_k``; ``D`` and ``E`` are at covariance scale
    (see :mod:`gaussbath.forms`).
    """
    if p.omega0 != 0:
        raise UnsupportedConfiguration("closed form requires omega0 == 0; use gaussbath.quadratic")
    k1, k2 = evolve_kernels(p, t)
    hb2 = p.hbar**2
    ep, em = st.eps_plus, st.eps_minus
    base_a = st.d**2 / 2 + st.s**2 / 8

    def a(kn):
        grow = -math.expm1(-kn.gamma * t / p.m)
        return (
            base_a
            + kn.tau * t
            - kn.alpha / (2 * kn.gamma)
            + kn.lam / (4 * kn.gamma**2)
            + hb2 * ep / (2 * kn.gamma**2) * grow**2
        )

    def b(kn):
        return 2 * hb2 * ep * kn.decay**2 + kn.lam

    def c_same(kn):
        grow = -math.expm1(-kn.gamma * t / p.m)
        return -2 * hb2 * ep / kn.gamma * kn.decay * grow - kn.alpha + kn.lam / kn.gamma

    def c_cross(kj, kk):
        grow_k = -math.expm1(-kk.gamma * t / p.m)
        return 2 * hb2 * em / kk.gamma * kj.decay * grow_k

    grow1 = -math.expm1(-p.gamma1 * t / p.m)
    grow2 = -math.expm1(-p.gamma2 * t / p.m)
    return QuadraticForm(
        A1=a(k1),
        A2=a(k2),
        B1=b(k1),
        B2=b(k2),
        C11=c_same(k1),
        C22=c_same(k2),
        C12=c_cross(k1, k2),
        C21=c_cross(k2, k1),
        D=-2 * hb2 * em * k1.decay * k2.decay,
        E=2 * st.d**2 - st.s**2 / 2 - 2 * hb2 * em / (p.gamma1 * p.gamma2) * grow1 * grow2,
    )


def covariance_at(st: InitialState, p: SystemParams, t: float) -> np.ndarray:
    return validate_covariance(coefficients_at(st, p, t).covariance())


def pt_squared_spectrum(qf: QuadraticForm) -> tuple[float, float]:
    """Eigenvalues of ``-sigma g sigma g`` for the partial transpose of ``qf``.

    ``eps`` below are the entries of that matrix; its two 2x2 diagonal blocks
    are multiples of the identity and its off-diagonal blocks are adjugates of
    each other, which reduces the quartic to a quadratic.
    """
    A1, A2, B1, B2 = qf.A1, qf.A2, qf.B1, qf.B2
    C11, C22, C12, C21, D, E = qf.C11, qf.C22, qf.C12, qf.C21, qf.D, qf.E
    e11 = 4 * A1 * B1 - D * E + C12 * C21 - C11**2
    e33 = 4 * A2 * B2 - C22**2 - D * E + C12 * C21
    e13 = E * B1 - 4 * A2 * D - C11 * C12 + C12 * C22
    e14 = -C12 * B2 - C21 * B1 + C11 * D + C22 * D
    e23 = -E * C11 + 4 * A1 * C12 + 4 * A2 * C21 - E * C22
    e24 = E * B2 - C22 * C21 + C11 * C21 - 4 * A1 * D
    disc = (e11 - e33) ** 2 + 4 * e13 * e24 - 4 * e14 * e23
    if disc < -DISCRIMINANT_TOL * max(1.0, (e11 + e33) ** 2):
        raise NumericalFailure(f"negative discriminant {disc!r} in partial-transpose spectrum")
    upper = 0.5 * (e11 + e33) + 0.5 * math.sqrt(max(disc, 0.0))
    # product of the roots, avoids cancellation in the smaller one
    lower = (e11 * e33 - (e13 * e24 - e14 * e23)) / upper
    return upper, lower


def pt_symplectic_eigs_closed_form(qf: QuadraticForm) -> tuple[float, float]:
    """Symplectic eigenvalues ``(lambda_plus, lambda_minus)`` of the partial transpose.

    The quadratic solved in :func:`pt_squared_spectrum` yields squared
    symplectic eigenvalues; this is the one place the square root is taken.
    """
    upper, lower = pt_squared_spectrum(qf)
    if lower <= 0:
        raise NumericalFailure(f"non-positive squared symplectic eigenvalue {lower!r}")
    return math.sqrt(upper), math.sqrt(lower)


def log_negativity_closed_form(qf: QuadraticForm, hbar: float = 1.0) -> float:
    return log_negativity_from_spectrum(pt_symplectic_eigs_closed_form(qf), hbar)
