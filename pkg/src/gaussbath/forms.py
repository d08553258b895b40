r"""
Gaussian characteristic functions in the centre/difference representation.

With :math:`x = u + \hbar z`, :math:`x' = u - \hbar z` and a Fourier transform
over :math:`u`, the characteristic function of a zero-mean Gaussian state is

.. math::

    \tilde P(q, z) = \exp\bigl[-A_1 q_1^2 - A_2 q_2^2 - B_1 z_1^2 - B_2 z_2^2
        - 2D z_1 z_2 - \tfrac{E}{2} q_1 q_2
        - C_{11} z_1 q_1 - C_{22} z_2 q_2 - C_{12} z_1 q_2 - C_{21} z_2 q_1\bigr]

``D`` and ``E`` are stored at covariance scale: they are exactly the
momentum-momentum and position-position cross entries of the covariance
matrix, which keeps the assembly in :meth:`QuadraticForm.covariance` free of
stray factors.
"""

from dataclasses import astuple, dataclass, fields

import numpy as np

__all__ = ["QuadraticForm", "FORM_FIELDS"]

# index of each variable in v = (z1, z2, q1, q2)
Z1, Z2, Q1, Q2 = range(4)


@dataclass(frozen=True)
class QuadraticForm:
    A1: float
    A2: float
    B1: float
    B2: float
    C11: float
    C22: float
    C12: float
    C21: float
    D: float
    E: float

    def as_tuple(self):
        return astuple(self)

    def exponent(self, q, z):
        """Value of ``log P(q, z)``."""
        q1, q2 = q
        z1, z2 = z
        return -(
            self.A1 * q1**2
            + self.A2 * q2**2
            + self.B1 * z1**2
            + self.B2 * z2**2
            + 2.0 * self.D * z1 * z2
            + 0.5 * self.E * q1 * q2
            + self.C11 * z1 * q1
            + self.C22 * z2 * q2
            + self.C12 * z1 * q2
            + self.C21 * z2 * q1
        )

    def __call__(self, q, z):
        return float(np.exp(self.exponent(q, z)))

    def covariance(self) -> np.ndarray:
        """Covariance matrix in the ordering (x1, p1, x2, p2)."""
        return np.array(
            [
                [4 * self.A1, -self.C11, self.E, -self.C21],
                [-self.C11, self.B1, -self.C12, self.D],
                [self.E, -self.C12, 4 * self.A2, -self.C22],
                [-self.C21, self.D, -self.C22, self.B2],
            ]
        )

    @classmethod
    def from_covariance(cls, g) -> "QuadraticForm":
        g = np.asarray(g, dtype=float)
        return cls(
            A1=g[0, 0] / 4,
            A2=g[2, 2] / 4,
            B1=g[1, 1],
            B2=g[3, 3],
            C11=-g[0, 1],
            C22=-g[2, 3],
            C12=-g[1, 2],
            C21=-g[0, 3],
            D=g[1, 3],
            E=g[0, 2],
        )

    def matrix(self) -> np.ndarray:
        """Symmetric ``K`` with ``log P = -v^T K v`` for ``v = (z1, z2, q1, q2)``."""
        k = np.zeros((4, 4))
        k[Z1, Z1], k[Z2, Z2] = self.B1, self.B2
        k[Q1, Q1], k[Q2, Q2] = self.A1, self.A2
        k[Z1, Z2] = k[Z2, Z1] = self.D
        k[Q1, Q2] = k[Q2, Q1] = self.E / 4
        k[Z1, Q1] = k[Q1, Z1] = self.C11 / 2
        k[Z2, Q2] = k[Q2, Z2] = self.C22 / 2
        k[Z1, Q2] = k[Q2, Z1] = self.C12 / 2
        k[Z2, Q1] = k[Q1, Z2] = self.C21 / 2
        return k

    @classmethod
    def from_matrix(cls, k) -> "QuadraticForm":
        k = np.asarray(k, dtype=float)
        k = 0.5 * (k + k.T)
        return cls(
            A1=k[Q1, Q1],
            A2=k[Q2, Q2],
            B1=k[Z1, Z1],
            B2=k[Z2, Z2],
            C11=2 * k[Z1, Q1],
            C22=2 * k[Z2, Q2],
            C12=2 * k[Z1, Q2],
            C21=2 * k[Z2, Q1],
            D=k[Z1, Z2],
            E=4 * k[Q1, Q2],
        )


FORM_FIELDS = tuple(f.name for f in fields(QuadraticForm))
