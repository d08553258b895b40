"""Physical constants and system parameters."""

from dataclasses import dataclass, field, replace
import math

from .errors import InvalidArgument

__all__ = ["PhysicalConstants", "SystemParams"]


def _require(condition, message):
    if not condition:
        raise InvalidArgument(message)


@dataclass(frozen=True)
class PhysicalConstants:
    hbar: float = 1.0
    k_boltzmann: float = 1.0

    def __post_init__(self):
        _require(math.isfinite(self.hbar) and self.hbar > 0, f"hbar must be positive, got {self.hbar!r}")
        _require(
            math.isfinite(self.k_boltzmann) and self.k_boltzmann > 0,
            f"k_boltzmann must be positive, got {self.k_boltzmann!r}",
        )


@dataclass(frozen=True)
class SystemParams:
    """Two particles of equal mass ``m``, each coupled to its own Ohmic bath.

    ``gamma1``/``gamma2`` are friction coefficients (force per velocity), so the
    momentum of particle i relaxes at rate ``gamma_i / m``. ``omega0`` is the
    frequency of the harmonic interaction ``m omega0**2 (x1 - x2)**2 / 2``.
    """

    m: float = 1.0
    gamma1: float = 1.0
    gamma2: float = 1.0
    T1: float = 1.0
    T2: float = 1.0
    omega0: float = 0.0
    constants: PhysicalConstants = field(default_factory=PhysicalConstants)

    def __post_init__(self):
        for name in ("m", "gamma1", "gamma2"):
            value = getattr(self, name)
            _require(math.isfinite(value) and value > 0, f"{name} must be positive, got {value!r}")
        for name in ("T1", "T2", "omega0"):
            value = getattr(self, name)
            _require(math.isfinite(value) and value >= 0, f"{name} must be non-negative, got {value!r}")

    @property
    def hbar(self):
        return self.constants.hbar

    @property
    def k(self):
        return self.constants.k_boltzmann

    @property
    def equal_baths(self):
        return self.gamma1 == self.gamma2 and self.T1 == self.T2

    def swapped(self):
        """Same system with the particle labels exchanged."""
        return replace(self, gamma1=self.gamma2, gamma2=self.gamma1, T1=self.T2, T2=self.T1)
