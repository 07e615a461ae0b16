from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import ValidationError


@dataclass(frozen=True)
class Grid2D:
    """Node grid on the meridional half-plane ``0 <= r <= r_max``, periodic in z.

    Row ``i = 0`` is the symmetry axis and row ``i = nr`` the outer wall.
    Arrays on the grid have shape ``(nr + 1, nz)``.
    """

    nr: int
    nz: int
    r_max: float = 5.0
    z_period: float = 2.0 * math.pi
    r: np.ndarray = field(init=False, repr=False, compare=False)
    z: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.nr < 16:
            raise ValidationError("nr", "need at least 16 radial intervals")
        if self.nz < 16:
            raise ValidationError("nz", "need at least 16 axial nodes")
        if not (self.r_max > 0 and self.z_period > 0):
            raise ValidationError("grid", "r_max and z_period must be positive")
        r = np.arange(self.nr + 1) * self.dr
        z = np.arange(self.nz) * self.dz
        r.flags.writeable = False
        z.flags.writeable = False
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "z", z)

    @property
    def dr(self) -> float:
        return self.r_max / self.nr

    @property
    def dz(self) -> float:
        return self.z_period / self.nz

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nr + 1, self.nz)

    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        return np.meshgrid(self.r, self.z, indexing="ij")

    def refined(self, factor: int = 2) -> Grid2D:
        return Grid2D(self.nr * factor, self.nz * factor, self.r_max, self.z_period)

    def kz2(self) -> np.ndarray:
        """Eigenvalues of minus the centred second difference in z, per rfft mode."""
        m = np.arange(self.nz // 2 + 1)
        return (2.0 - 2.0 * np.cos(2.0 * math.pi * m / self.nz)) / self.dz**2

    def radial_weights(self) -> np.ndarray:
        """Control-volume weights ``int r dr`` of each radial node (axis and wall are half cells)."""
        dr, r = self.dr, self.r
        w = r * dr
        w[0] = dr * dr / 8.0
        w[-1] = 0.5 * dr * (r[-1] - 0.25 * dr)
        return w

    def trapz_weights(self) -> np.ndarray:
        """Trapezoid weights for ``int f r dr``."""
        w = self.r * self.dr
        w[-1] *= 0.5
        return w
