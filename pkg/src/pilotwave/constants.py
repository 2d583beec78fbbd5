"""Physical constants used by all three experiments (SI units throughout)."""
from __future__ import annotations

import math
from dataclasses import dataclass, field


@dataclass(frozen=True)
class PhysicalConstants:
    """CODATA values, except the silver-atom mass which is the conventional
    1.8e-25 kg used in textbook Stern-Gerlach estimates.

    ``h`` is derived, never set: h = 2*pi*hbar exactly as stored.
    """

    hbar: float = 1.054571817e-34        # J s
    electron_mass: float = 9.1093837015e-31   # kg
    silver_mass: float = 1.8e-25              # kg
    bohr_magneton: float = 9.2740100783e-24   # J/T
    h: float = field(init=False)

    def __post_init__(self):
        for name in ("hbar", "electron_mass", "silver_mass", "bohr_magneton"):
            if not getattr(self, name) > 0.0:
                raise ValueError(f"{name} must be strictly positive")
        object.__setattr__(self, "h", 2.0 * math.pi * self.hbar)

    def with_hbar_divisor(self, divisor: float) -> "PhysicalConstants":
        """Constants with hbar (and hence h) divided by ``divisor``.

        Used by the classical-limit study; equivalent to scaling the mass up.
        """
        if divisor <= 0:
            raise ValueError("divisor must be positive")
        return PhysicalConstants(
            hbar=self.hbar / divisor,
            electron_mass=self.electron_mass,
            silver_mass=self.silver_mass,
            bohr_magneton=self.bohr_magneton,
        )


DEFAULT_CONSTANTS = PhysicalConstants()
