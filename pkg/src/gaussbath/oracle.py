r"""
Independent checks: second-moment equations and brute-force initial moments.

The moment equations come from :math:`\frac{d}{dt}\langle O\rangle =
\mathrm{Tr}(O\dot\rho)` with :math:`O` a symmetrised product of two canonical
operators. Moving the superoperators onto :math:`O`:

* Hamiltonian part: ``i/hbar [H, O]``, the Heisenberg flow
  ``x_i' = p_i / m``, ``p_1' = -m w0^2 (x1 - x2)``, ``p_2' = +m w0^2 (x1 - x2)``.
* friction part: ``(i gamma / 2 hbar m) {[x, O], p}``, which acts on every
  factor ``p`` of ``O`` as ``p -> -(gamma / m) p`` and leaves ``x`` alone.
* thermal part: ``-(gamma k T / hbar^2) [x, [x, O]]``, which adds
  ``2 gamma k T`` to ``d<p^2>/dt`` and nothing to any other moment.

With ``g = <{R, R^T}>`` this is ``dg/dt = A g + g A^T + Q`` where ``A`` is the
Heisenberg drift above and ``Q = diag(0, 4 gamma1 k T1, 0, 4 gamma2 k T2)``.
"""

from dataclasses import dataclass
import math

import numpy as np

from .errors import IntegrationDiverged, InvalidArgument, NumericalFailure
from .params import SystemParams
from .states import InitialState, wavefunction

__all__ = [
    "MomentState",
    "heisenberg_drift",
    "thermal_diffusion",
    "moment_derivative",
    "integrate_moments",
    "quadrature_moments",
]

_IU = np.triu_indices(4)


@dataclass(frozen=True)
class MomentState:
    """The ten independent entries of a 4x4 covariance matrix (upper triangle, row-major)."""

    values: np.ndarray
    time: float = 0.0

    @classmethod
    def from_covariance(cls, g, time=0.0):
        g = np.asarray(g, dtype=float)
        return cls(g[_IU].copy(), float(time))

    def covariance(self):
        g = np.zeros((4, 4))
        g[_IU] = self.values
        return g + np.triu(g, 1).T


def heisenberg_drift(p: SystemParams) -> np.ndarray:
    """Linear drift of ``(x1, p1, x2, p2)`` including friction."""
    k = p.m * p.omega0**2
    return np.array(
        [
            [0.0, 1 / p.m, 0.0, 0.0],
            [-k, -p.gamma1 / p.m, k, 0.0],
            [0.0, 0.0, 0.0, 1 / p.m],
            [k, 0.0, -k, -p.gamma2 / p.m],
        ]
    )


def thermal_diffusion(p: SystemParams) -> np.ndarray:
    return np.diag([0.0, 4 * p.gamma1 * p.k * p.T1, 0.0, 4 * p.gamma2 * p.k * p.T2])


def moment_derivative(mu: MomentState, p: SystemParams) -> np.ndarray:
    """Time derivative of the ten moments, as a flat array."""
    a = heisenberg_drift(p)
    g = mu.covariance()
    rate = a @ g + g @ a.T + thermal_diffusion(p)
    return rate[_IU]


def integrate_moments(g0, p: SystemParams, t_end: float, dt: float = 1e-3, *, record_every: int = 1):
    """Classical fourth-order Runge-Kutta with a fixed step.

    The last step is shortened to land exactly on ``t_end``. The linear system
    has rates up to ``max(2 gamma / m, 2 omega0)``; RK4 is stable while ``dt``
    times that stays below about 2.7.

    Returns
    -------
    times : ndarray
    covariances : ndarray, shape (n, 4, 4)
        States at ``times``; every ``record_every``-th step plus the final one.
    """
    if not dt > 0:
        raise InvalidArgument(f"dt must be positive, got {dt!r}")
    if not t_end >= 0:
        raise InvalidArgument(f"t_end must be non-negative, got {t_end!r}")
    a = heisenberg_drift(p)
    q = thermal_diffusion(p)

    def f(y):
        g = np.zeros((4, 4))
        g[_IU] = y
        g = g + np.triu(g, 1).T
        return (a @ g + g @ a.T + q)[_IU]

    y = MomentState.from_covariance(g0).values
    n_full = int(math.floor(t_end / dt + 1e-9))
    remainder = t_end - n_full * dt
    steps = [dt] * n_full
    if remainder > 1e-12 * max(1.0, t_end):
        steps.append(remainder)

    t = 0.0
    times = [0.0]
    states = [y.copy()]
    for i, h in enumerate(steps, start=1):
        with np.errstate(over="ignore", invalid="ignore"):
            k1 = f(y)
            k2 = f(y + 0.5 * h * k1)
            k3 = f(y + 0.5 * h * k2)
            k4 = f(y + h * k3)
            y = y + (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4)
        t = i * dt if h == dt else t_end
        if not np.all(np.isfinite(y)):
            raise IntegrationDiverged(t)
        if i % record_every == 0 or i == len(steps):
            times.append(t)
            states.append(y.copy())
    covs = np.array([MomentState(v, 0.0).covariance() for v in states])
    return np.array(times), covs


def quadrature_moments(st: InitialState, hbar: float = 1.0, *, tol: float = 1e-8) -> np.ndarray:
    """Initial covariance by brute-force quadrature of the wavefunction.

    Position moments come from ``|Psi|^2`` on a uniform grid (trapezoid rule,
    spectrally accurate for Gaussians); momentum moments from the
    momentum-space density obtained by a 2-D FFT of ``Psi`` on the same grid.
    The grid is refined until successive results agree to ``tol``.
    """
    # widths of |Psi|^2 along the relative and centre-of-mass diagonals
    narrow = min(st.s, 2 * st.d) / math.sqrt(2)
    wide = max(st.s, 2 * st.d) / math.sqrt(2)
    previous = None
    for points_per_width in (3, 4, 6):
        h = narrow / points_per_width
        half = 10 * wide
        n = int(2 * math.ceil(half / h))
        if n > 8192:
            raise NumericalFailure(f"quadrature grid too large ({n}^2) for s={st.s}, d={st.d}")
        x = (np.arange(n) - n // 2) * h
        x1, x2 = np.meshgrid(x, x, indexing="ij")
        psi = wavefunction(st, x1, x2)

        dens = psi**2
        total = dens.sum()
        pos = np.array(
            [
                [(x1 * x1 * dens).sum(), (x1 * x2 * dens).sum()],
                [(x2 * x1 * dens).sum(), (x2 * x2 * dens).sum()],
            ]
        ) / total

        k = 2 * np.pi * np.fft.fftfreq(n, d=h)
        k1, k2 = np.meshgrid(k, k, indexing="ij")
        pdens = np.abs(np.fft.fft2(psi)) ** 2
        ptotal = pdens.sum()
        mom = hbar**2 * np.array(
            [
                [(k1 * k1 * pdens).sum(), (k1 * k2 * pdens).sum()],
                [(k2 * k1 * pdens).sum(), (k2 * k2 * pdens).sum()],
            ]
        ) / ptotal

        # <{x_i, p_j}> = 2 Re <Psi| x_i p_j |Psi>, derivative taken spectrally
        spectrum = np.fft.fft2(psi)
        grads = [np.fft.ifft2(1j * kk * spectrum) for kk in (k1, k2)]
        mixed = np.array(
            [[2 * np.real(np.sum(psi * xx * (-1j * hbar) * dpsi)) / total for dpsi in grads] for xx in (x1, x2)]
        )

        g = np.zeros((4, 4))
        xi, pi = [0, 2], [1, 3]
        g[np.ix_(xi, xi)] = 2 * pos
        g[np.ix_(pi, pi)] = 2 * mom
        g[np.ix_(xi, pi)] = mixed
        g[np.ix_(pi, xi)] = mixed.T
        if previous is not None and np.max(np.abs(g - previous)) < tol:
            return g
        previous = g
    raise NumericalFailure("quadrature did not converge")
