"""Diffraction-limited Gaussian beam propagation and aperture collection.

Paraxial TEM00 beam, perfectly pointed at the center of a circular receiver.
The collected fraction is the encircled energy of the Gaussian spot over the
aperture disc; pointing jitter and beam wander are out of scope.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class BeamParams:
    """Transmit beam and receiver aperture. ``waist_m`` is the 1/e^2 radius."""

    wavelength_m: float = 1550e-9
    waist_m: float = 0.01
    receiver_radius_m: float = 0.5

    def __post_init__(self) -> None:
        for name in ("wavelength_m", "waist_m", "receiver_radius_m"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be > 0")

    @property
    def rayleigh_range_m(self) -> float:
        return math.pi * self.waist_m**2 / self.wavelength_m


def spot_size(params: BeamParams, z_m: float) -> float:
    """1/e^2 beam radius after propagating ``z_m`` from the waist."""
    if z_m < 0:
        raise ValueError("z_m must be >= 0")
    return params.waist_m * math.sqrt(1.0 + (z_m / params.rayleigh_range_m) ** 2)


def diffraction_transmittance(params: BeamParams, z_m: float) -> float:
    """Fraction of beam power collected by the receiver at range ``z_m``.

    Encircled energy of a centered Gaussian over a disc of radius a_R:
    1 - exp(-2 a_R^2 / w^2(z)).
    """
    w = spot_size(params, z_m)
    return 1.0 - math.exp(-2.0 * params.receiver_radius_m**2 / w**2)
