"""
Entanglement trajectories and the features extracted from them.

Crossings of the death threshold are located on the time grid first and then
refined by bisection on the trajectory's evaluator when one is attached, so
the reported times do not depend on the grid density.
"""

from dataclasses import dataclass, field
import enum
import math
from typing import Callable, NamedTuple, Optional
import warnings

import numpy as np

from . import free, quadratic
from .errors import InvalidArgument, PhysicalityWarning, UnsupportedConfiguration
from .params import SystemParams
from .states import InitialState
from .symplectic import is_physical, log_negativity

__all__ = [
    "Trajectory",
    "Regime",
    "Asymptote",
    "DEFAULT_EPS",
    "covariance_at",
    "entanglement_trajectory",
    "esd_time",
    "revivals",
    "asymptote",
    "tail_amplitudes",
    "classify_regime",
]

DEFAULT_EPS = 1e-12
TIME_TOL = 1e-8
CRITICAL_RTOL = 1e-12


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray
    values: np.ndarray
    flags: np.ndarray
    margins: Optional[np.ndarray] = None
    evaluator: Optional[Callable[[float], float]] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        values = np.asarray(self.values, dtype=float)
        flags = np.asarray(self.flags, dtype=bool)
        if not (times.shape == values.shape == flags.shape) or times.ndim != 1:
            raise InvalidArgument("times, values and flags must be 1-D arrays of equal length")
        if np.any(np.diff(times) <= 0):
            raise InvalidArgument("times must be strictly increasing")
        if np.any(values < 0):
            raise InvalidArgument("log-negativity values must be non-negative")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "flags", flags)
        if self.margins is not None:
            object.__setattr__(self, "margins", np.asarray(self.margins, dtype=float))

    def __len__(self):
        return len(self.times)


class Regime(str, enum.Enum):
    OVER_DAMPED = "over-damped"
    UNDER_DAMPED = "under-damped"
    CRITICAL = "critical"


class Asymptote(NamedTuple):
    mean: float
    amplitude: float


def covariance_at(st: InitialState, p: SystemParams, t: float, *, allow_unequal_baths=False):
    """Covariance at ``t``: closed form for free particles, characteristics solver otherwise."""
    if p.omega0 == 0:
        return free.covariance_at(st, p, t)
    return quadratic.covariance_at(st, p, t, allow_unequal_baths=allow_unequal_baths)


def entanglement_trajectory(
    st: InitialState, p: SystemParams, times, *, allow_unequal_baths=False, warn=True
) -> Trajectory:
    """Log-negativity and physicality of the evolving state on a time grid.

    Emits a :class:`PhysicalityWarning` when any covariance on the grid
    violates the uncertainty relation; the states are flagged, never altered.
    """
    times = np.asarray(times, dtype=float)
    hbar = p.hbar

    def evaluate(t):
        return log_negativity(covariance_at(st, p, t, allow_unequal_baths=allow_unequal_baths), hbar)

    values = np.empty_like(times)
    flags = np.empty(times.shape, dtype=bool)
    margins = np.empty_like(times)
    for i, t in enumerate(times):
        g = covariance_at(st, p, t, allow_unequal_baths=allow_unequal_baths)
        values[i] = log_negativity(g, hbar)
        phys = is_physical(g, hbar)
        flags[i] = phys.physical
        margins[i] = phys.margin
    if warn and not flags.all():
        first = times[np.argmin(flags)]
        warnings.warn(
            f"{np.count_nonzero(~flags)} unphysical states on the grid (first at t={first:.6g})",
            PhysicalityWarning,
            stacklevel=2,
        )
    return Trajectory(times, values, flags, margins, evaluate)


def _refine(tr, t_alive, t_dead, eps, xtol):
    """Bisect for the threshold crossing between an alive and a dead time."""
    if tr.evaluator is None:
        return t_dead
    while abs(t_dead - t_alive) > xtol:
        mid = 0.5 * (t_alive + t_dead)
        if tr.evaluator(mid) < eps:
            t_dead = mid
        else:
            t_alive = mid
    return 0.5 * (t_alive + t_dead)


def _check(tr, eps):
    if len(tr) == 0:
        raise InvalidArgument("empty trajectory")
    if not eps > 0:
        raise InvalidArgument(f"eps must be positive, got {eps!r}")


def esd_time(tr: Trajectory, eps: float = DEFAULT_EPS, *, xtol: float = TIME_TOL) -> Optional[float]:
    """First time the log-negativity drops below ``eps``; ``None`` if it never does."""
    _check(tr, eps)
    dead = np.flatnonzero(tr.values < eps)
    if dead.size == 0:
        return None
    i = dead[0]
    if i == 0:
        return float(tr.times[0])
    return float(_refine(tr, tr.times[i - 1], tr.times[i], eps, xtol))


def revivals(tr: Trajectory, eps: float = DEFAULT_EPS, *, xtol: float = TIME_TOL) -> list[tuple[float, float]]:
    """``(death, rebirth)`` for every interval below ``eps`` that is followed by a revival."""
    _check(tr, eps)
    dead = tr.values < eps
    out = []
    i, n = 0, len(tr)
    while i < n:
        if not dead[i]:
            i += 1
            continue
        j = i
        while j + 1 < n and dead[j + 1]:
            j += 1
        if j + 1 < n:
            death = tr.times[0] if i == 0 else _refine(tr, tr.times[i - 1], tr.times[i], eps, xtol)
            if tr.evaluator is None:
                rebirth = tr.times[j + 1]
            else:
                rebirth = _refine(tr, tr.times[j + 1], tr.times[j], eps, xtol)
            out.append((float(death), float(rebirth)))
        i = j + 1
    return out


def _window(tr, tail_fraction):
    if not 0 < tail_fraction <= 0.5:
        raise InvalidArgument(f"tail_fraction must lie in (0, 0.5], got {tail_fraction!r}")
    size = int(math.ceil(tail_fraction * len(tr)))
    if size < 10:
        raise InvalidArgument(f"tail window has {size} samples, need at least 10")
    return size


def asymptote(tr: Trajectory, tail_fraction: float = 0.2) -> Asymptote:
    """Mean and peak-to-peak amplitude over the trailing ``tail_fraction`` of samples."""
    size = _window(tr, tail_fraction)
    tail = tr.values[-size:]
    return Asymptote(float(tail.mean()), float(np.ptp(tail)))


def tail_amplitudes(tr: Trajectory, tail_fraction: float = 0.2, n_windows: int = 2) -> list[float]:
    """Peak-to-peak amplitudes of consecutive trailing windows, earliest first."""
    size = _window(tr, tail_fraction)
    if size * n_windows > len(tr):
        raise InvalidArgument(f"{n_windows} windows of {size} samples exceed the trajectory")
    n = len(tr)
    return [float(np.ptp(tr.values[n - (w + 1) * size : n - w * size])) for w in reversed(range(n_windows))]


def classify_regime(p: SystemParams) -> Regime:
    """Damping regime from the sign of ``gamma**2 - 8 m**2 omega0**2``."""
    if p.gamma1 != p.gamma2:
        if p.omega0 == 0:
            return Regime.OVER_DAMPED
        raise UnsupportedConfiguration("regime is defined for gamma1 == gamma2")
    g = p.gamma1
    disc = g**2 - 8 * p.m**2 * p.omega0**2
    if abs(disc) <= CRITICAL_RTOL * g**2:
        return Regime.CRITICAL
    return Regime.OVER_DAMPED if disc > 0 else Regime.UNDER_DAMPED
