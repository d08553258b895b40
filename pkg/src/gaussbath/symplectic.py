r"""
Linear algebra of Gaussian covariance matrices.

Covariance matrices use the canonical ordering :math:`(x_1, p_1, x_2, p_2)` and
the convention :math:`\gamma_{jk} = 2\,\mathrm{Re}\,\mathrm{Tr}[\rho R_j R_k]`,
so that the vacuum (and every pure state) has all symplectic eigenvalues equal
to :math:`\hbar`.
"""

from typing import NamedTuple

import numpy as np

from .errors import InvalidArgument, InvalidCovariance, NumericalFailure

__all__ = [
    "symplectic_form",
    "validate_covariance",
    "symplectic_eigenvalues",
    "partial_transpose",
    "log_negativity",
    "log_negativity_from_spectrum",
    "is_physical",
    "Physicality",
]

SYMMETRY_RTOL = 1e-12
IMAG_RTOL = 1e-9
PHYSICALITY_TOL = 1e-9


def symplectic_form(n_modes: int) -> np.ndarray:
    """Block-diagonal symplectic form with ``n_modes`` copies of [[0, 1], [-1, 0]]."""
    if isinstance(n_modes, bool) or int(n_modes) != n_modes or n_modes < 1:
        raise InvalidArgument(f"n_modes must be a positive integer, got {n_modes!r}")
    block = np.array([[0.0, 1.0], [-1.0, 0.0]])
    return np.kron(np.eye(int(n_modes)), block)


def validate_covariance(g, *, require_positive_definite: bool = False) -> np.ndarray:
    """Return ``g`` as a float array after checking the covariance invariants.

    Checks: square with even dimension, finite entries, symmetric to a relative
    tolerance of 1e-12, strictly positive diagonal and, optionally,
    positive-definiteness.
    """
    g = np.asarray(g, dtype=float)
    if g.ndim != 2 or g.shape[0] != g.shape[1] or g.shape[0] % 2:
        raise InvalidCovariance(f"expected a square matrix of even size, got shape {g.shape}")
    if not np.all(np.isfinite(g)):
        raise InvalidCovariance("covariance matrix has non-finite entries")
    scale = np.max(np.abs(g))
    if np.max(np.abs(g - g.T)) > SYMMETRY_RTOL * scale:
        raise InvalidCovariance("covariance matrix is not symmetric")
    if np.any(np.diag(g) <= 0):
        raise InvalidCovariance("covariance matrix has non-positive diagonal entries")
    if require_positive_definite:
        try:
            np.linalg.cholesky(0.5 * (g + g.T))
        except np.linalg.LinAlgError:
            raise InvalidCovariance("covariance matrix is not positive-definite") from None
    return g


def symplectic_eigenvalues(g) -> np.ndarray:
    r"""Symplectic spectrum of a positive-definite covariance matrix.

    The eigenvalues of :math:`-\sigma g \sigma g` are real, positive and come in
    coincident pairs; their square roots are sorted, paired with the adjacent
    value and each pair averaged.

    Returns
    -------
    ndarray
        The ``n`` symplectic eigenvalues in descending order.
    """
    g = validate_covariance(g, require_positive_definite=True)
    n = g.shape[0] // 2
    sigma = symplectic_form(n)
    product = -sigma @ g @ sigma @ g
    eig = np.linalg.eigvals(product)
    if np.max(np.abs(eig.imag)) > IMAG_RTOL * np.linalg.norm(g):
        raise NumericalFailure("eigenvalues of -sigma g sigma g have large imaginary parts")
    if np.any(eig.real <= 0):
        raise NumericalFailure("non-positive eigenvalue of -sigma g sigma g for a positive-definite input")
    roots = np.sort(np.sqrt(eig.real))
    return roots.reshape(n, 2).mean(axis=1)[::-1]


def partial_transpose(g, particle: int = 1) -> np.ndarray:
    """Time-reverse one particle: flip the sign of its momentum row and column."""
    g = validate_covariance(g)
    n = g.shape[0] // 2
    if particle not in range(1, n + 1):
        raise InvalidArgument(f"particle must be in 1..{n}, got {particle!r}")
    flip = np.ones(2 * n)
    flip[2 * particle - 1] = -1.0
    return g * np.outer(flip, flip)


def log_negativity_from_spectrum(spectrum, hbar: float = 1.0) -> float:
    """Logarithmic negativity from the symplectic spectrum of a partial transpose.

    Each symplectic eigenvalue counts twice, hence the factor 2.
    """
    nu = np.abs(np.asarray(spectrum, dtype=float)) / hbar
    value = -2.0 * float(np.sum(np.log2(np.minimum(1.0, nu))))
    return max(0.0, value)


def log_negativity(g, hbar: float = 1.0) -> float:
    """Logarithmic negativity of a two-mode covariance matrix.

    The separability threshold for the partially transposed spectrum is ``hbar``.
    """
    return log_negativity_from_spectrum(symplectic_eigenvalues(partial_transpose(g, 1)), hbar)


class Physicality(NamedTuple):
    physical: bool
    margin: float
    marginal: bool = False


def is_physical(g, hbar: float = 1.0) -> Physicality:
    r"""Check the uncertainty relation :math:`g + i\hbar\sigma \geq 0`.

    ``margin`` is the smallest symplectic eigenvalue minus ``hbar``. Margins in
    (-1e-9, 0) still count as physical but set ``marginal``: pure states sit
    exactly on the boundary. If ``g`` is not positive-definite the state is
    unphysical and ``margin`` is the lowest eigenvalue of
    :math:`g + i\hbar\sigma` instead.
    """
    g = np.asarray(g, dtype=float)
    try:
        nu_min = float(np.min(symplectic_eigenvalues(g)))
    except (InvalidCovariance, NumericalFailure):
        sigma = symplectic_form(g.shape[0] // 2)
        lowest = float(np.min(np.linalg.eigvalsh(0.5 * (g + g.T) + 1j * hbar * sigma)))
        return Physicality(False, lowest, False)
    margin = nu_min - hbar
    if margin >= 0:
        return Physicality(True, margin, False)
    if margin > -PHYSICALITY_TOL:
        return Physicality(True, margin, True)
    return Physicality(False, margin, False)
