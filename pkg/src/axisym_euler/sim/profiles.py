"""Named analytic initial data for scenario configs. All profiles take ``(r, z)`` arrays."""

from __future__ import annotations

from typing import Any, Callable

import numpy as np

from ..errors import ValidationError

Profile = Callable[[np.ndarray, np.ndarray], np.ndarray]


def gaussian_stream(amplitude: float = 0.5, width: float = 1.0, wavenumber: int = 1) -> Profile:
    """``amplitude r^2 exp(-r^2/width^2) sin(k z)``."""
    return lambda r, z: amplitude * r**2 * np.exp(-(r / width) ** 2) * np.sin(wavenumber * z)


def gaussian_swirl(amplitude: float = 1.0, width: float = 1.0, modulation: float = 0.5,
                   wavenumber: int = 1) -> Profile:
    """``amplitude r exp(-r^2/width^2) (1 + modulation cos(k z))``."""
    return lambda r, z: amplitude * r * np.exp(-(r / width) ** 2) * (1.0 + modulation * np.cos(wavenumber * z))


def tapered_rigid_swirl(omega: float = 1.0, width: float = 2.0) -> Profile:
    """Solid-body rotation ``omega r`` near the axis, cut off smoothly by ``exp(-(r/width)^4)``."""
    return lambda r, z: omega * r * np.exp(-(r / width) ** 4) + 0.0 * z


STREAM_PROFILES: dict[str, Callable[..., Profile]] = {"gaussian": gaussian_stream}
SWIRL_PROFILES: dict[str, Callable[..., Profile]] = {"gaussian": gaussian_swirl, "rigid": tapered_rigid_swirl}


def build(kind: str, entry: dict[str, Any] | None, table: dict[str, Callable[..., Profile]]) -> Profile | None:
    if not entry:
        return None
    entry = dict(entry)
    name = entry.pop("type", None)
    if name in (None, "none"):
        return None
    if name not in table:
        raise ValidationError(f"initial.{kind}.type", f"unknown profile {name!r}; choose from {sorted(table)}")
    try:
        return table[name](**entry)
    except TypeError as exc:
        raise ValidationError(f"initial.{kind}", str(exc)) from exc
