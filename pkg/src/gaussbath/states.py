r"""
The entangled two-particle initial state.

The wavefunction is

.. math::

    \Psi(x_1, x_2) = \Omega^{1/2}
        \exp\!\Bigl[-\frac{(x_1 - x_2)^2}{4 s^2}\Bigr]
        \exp\!\Bigl[-\frac{(x_1 + x_2)^2}{16 d^2}\Bigr],
    \qquad \Omega = \frac{1}{2\pi s d},

i.e. a relative coordinate of width ``s`` and a centre of mass of width ``d``.
The state is a product state exactly when ``s == 2 d``.
"""

from dataclasses import dataclass
import math

import numpy as np

from .errors import DegenerateState, InvalidArgument
from .forms import QuadraticForm

__all__ = [
    "InitialState",
    "initial_characteristic_function",
    "initial_form",
    "initial_covariance",
    "wavefunction",
]


@dataclass(frozen=True)
class InitialState:
    s: float = 1.0
    d: float = 1.0

    def __post_init__(self):
        for name in ("s", "d"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise InvalidArgument(f"{name} must be positive, got {value!r}")

    @property
    def eps_plus(self):
        return 1 / (4 * self.s**2) + 1 / (16 * self.d**2)

    @property
    def eps_minus(self):
        return 1 / (4 * self.s**2) - 1 / (16 * self.d**2)

    @property
    def norm(self):
        """Normalisation ``Omega`` of the density matrix (not used numerically)."""
        return 1 / (2 * math.pi * self.s * self.d)

    @property
    def is_product(self):
        return self.s == 2 * self.d


def _gap(st):
    gap = st.eps_plus**2 - st.eps_minus**2
    if not gap > 0:
        raise DegenerateState(f"eps_plus**2 - eps_minus**2 = {gap!r} for {st!r}")
    return gap


def initial_form(st: InitialState, hbar: float = 1.0) -> QuadraticForm:
    """Characteristic-function coefficients of the initial density matrix."""
    ep, em = st.eps_plus, st.eps_minus
    gap = _gap(st)
    return QuadraticForm(
        A1=ep / (8 * gap),
        A2=ep / (8 * gap),
        B1=2 * ep * hbar**2,
        B2=2 * ep * hbar**2,
        C11=0.0,
        C22=0.0,
        C12=0.0,
        C21=0.0,
        # z1 z2 and q1 q2 enter log P as +4 eps_- hbar^2 and -eps_- / (4 gap)
        D=-2 * em * hbar**2,
        E=em / (2 * gap),
    )


def initial_characteristic_function(st: InitialState, q, z, hbar: float = 1.0) -> float:
    """Fourier transform of the initial density matrix, normalised to 1 at the origin."""
    ep, em = st.eps_plus, st.eps_minus
    gap = _gap(st)
    q1, q2 = q
    z1, z2 = z
    exponent = (
        -2 * ep * hbar**2 * (z1**2 + z2**2)
        + 4 * em * hbar**2 * z1 * z2
        - ep * (q1**2 + q2**2) / (8 * gap)
        - em * q1 * q2 / (4 * gap)
    )
    return math.exp(exponent)


def initial_covariance(st: InitialState, hbar: float = 1.0) -> np.ndarray:
    """Covariance matrix of the initial pure state, ordering (x1, p1, x2, p2).

    Position moments follow from the relative coordinate (variance ``s**2``)
    and the centre of mass ``x1 + x2`` (variance ``4 d**2``). For the real
    wavefunction ``exp(-x^T K x / 2)`` the momentum second moments are
    ``hbar**2 K / 2``; the momenta are anti-correlated when ``s < 2 d``.
    """
    s, d = st.s, st.d
    xx = 2 * d**2 + s**2 / 2
    x1x2 = 2 * d**2 - s**2 / 2
    pp = 2 * hbar**2 * st.eps_plus
    p1p2 = -2 * hbar**2 * st.eps_minus
    return np.array(
        [
            [xx, 0.0, x1x2, 0.0],
            [0.0, pp, 0.0, p1p2],
            [x1x2, 0.0, xx, 0.0],
            [0.0, p1p2, 0.0, pp],
        ]
    )


def wavefunction(st: InitialState, x1, x2):
    """Normalised position-space wavefunction."""
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    return np.sqrt(st.norm) * np.exp(-((x1 - x2) ** 2) / (4 * st.s**2) - (x1 + x2) ** 2 / (16 * st.d**2))
