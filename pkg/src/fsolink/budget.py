"""Channel composition and the loss-sweep experiments.

Total transmittance is the product of four independent factors: internal
detection efficiency, atmospheric extinction, diffraction collection loss,
and the turbulence-induced intensity factor. Sweeps scan zenith angle and
telescope diameter for LEO/MEO passes and report loss statistics in dB.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .beam import BeamParams, diffraction_transmittance
from .extinction import ExtinctionParams, slant_transmittance
from .fading import FadingModel, sample
from .geometry import EARTH_RADIUS_M, LinkGeometry, slant_range
from .turbulence import (
    ApertureModel,
    ScintillationVariant,
    TurbulenceProfile,
    aperture_averaging,
    psi,
    rytov_downlink,
    scintillation_index,
)

LEO_ALTITUDE_M = 420e3
MEO_ALTITUDE_M = 20_200e3


class FluctuationMode(enum.Enum):
    """How the intensity factor I is modeled in sweeps.

    DETERMINISTIC pins I = 1; ISI draws log-normal fades at the point-receiver
    scintillation index; PSI first reduces the index by aperture averaging.
    """

    DETERMINISTIC = "deterministic"
    ISI = "isi"
    PSI = "psi"


@dataclass(frozen=True)
class ChannelParams:
    beam: BeamParams = field(default_factory=BeamParams)
    extinction: ExtinctionParams = field(default_factory=ExtinctionParams)
    turbulence: TurbulenceProfile = field(default_factory=TurbulenceProfile)
    eta_int: float = 0.4
    aperture_model: ApertureModel = field(default_factory=ApertureModel)
    fluctuation_mode: FluctuationMode = FluctuationMode.DETERMINISTIC
    scintillation_variant: ScintillationVariant = ScintillationVariant.SEVEN_SIXTHS

    def __post_init__(self) -> None:
        if not 0.0 < self.eta_int <= 1.0:
            raise ValueError("eta_int must lie in (0, 1]")


@dataclass(frozen=True)
class TransmittanceBreakdown:
    """Per-factor transmittances together with their product and dB loss."""

    eta_int: float
    eta_atm: float
    eta_d: float
    intensity_factor: float
    eta_total: float
    loss_db: float


@dataclass(frozen=True)
class SweepResult:
    """Loss statistics per (diameter, zenith) cell; arrays are (nD, nZ)."""

    zenith_deg: np.ndarray
    diameters_m: np.ndarray
    mean_loss_db: np.ndarray
    sd_loss_db: np.ndarray
    p05_db: np.ndarray
    p50_db: np.ndarray
    p95_db: np.ndarray


@dataclass(frozen=True)
class AvTable:
    """Aperture-averaging factors per (diameter, zenith) cell."""

    zenith_deg: np.ndarray
    diameters_m: np.ndarray
    av: np.ndarray


def compose(params: ChannelParams, geom: LinkGeometry, intensity: float = 1.0) -> TransmittanceBreakdown:
    """Evaluate the four-factor transmittance for one geometry and one fade.

    ``intensity`` is the relative intensity factor for this instant (1 for a
    deterministic channel).
    """
    if intensity <= 0:
        raise ValueError("intensity must be > 0")
    eta_atm = slant_transmittance(params.extinction, geom.satellite_altitude_m, geom.zenith_angle_rad)
    eta_d = diffraction_transmittance(params.beam, slant_range(geom))
    eta_total = params.eta_int * eta_atm * eta_d * intensity
    return TransmittanceBreakdown(
        eta_int=params.eta_int,
        eta_atm=eta_atm,
        eta_d=eta_d,
        intensity_factor=intensity,
        eta_total=eta_total,
        loss_db=-10.0 * math.log10(eta_total),
    )


def fading_variance(
    params: ChannelParams,
    altitude_m: float,
    zenith_rad: float,
    diameter_m: float,
    *,
    ogs_altitude_m: float | None = None,
    earth_radius_m: float = EARTH_RADIUS_M,
) -> float:
    """Log-variance sigma_j^2 driving the intensity factor at one grid cell.

    Rytov index -> scintillation index, then scaled by the configured
    aperture-averaging factor when the channel runs in PSI mode. Returns 0 in
    deterministic mode.
    """
    if params.fluctuation_mode is FluctuationMode.DETERMINISTIC:
        return 0.0
    sigma_r2 = rytov_downlink(params.turbulence, params.beam.wavelength_m, altitude_m, zenith_rad)
    sigma_i2 = scintillation_index(sigma_r2, params.scintillation_variant).sigma_I2
    if params.fluctuation_mode is FluctuationMode.ISI:
        return sigma_i2
    h_ogs = params.turbulence.h_ogs_m if ogs_altitude_m is None else ogs_altitude_m
    geom = LinkGeometry(
        satellite_altitude_m=altitude_m,
        zenith_angle_rad=zenith_rad,
        ogs_altitude_m=h_ogs,
        earth_radius_m=earth_radius_m,
    )
    av = aperture_averaging(
        params.aperture_model,
        diameter_m,
        params.beam.wavelength_m,
        path_m=slant_range(geom),
        elevation_deg=90.0 - abs(math.degrees(zenith_rad)),
        profile=params.turbulence,
        altitude_m=altitude_m,
        zenith_rad=zenith_rad,
    )
    return psi(sigma_i2, av)


def _cell_rng(seed: int, d_index: int, z_index: int) -> np.random.Generator:
    # Sub-seed per (diameter, zenith) cell: results are identical no matter
    # how the grid is scheduled.
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(d_index, z_index)))


def sweep_pass(
    params: ChannelParams,
    altitude_m: float,
    diameters_m,
    zenith_grid_rad,
    draws_per_point: int = 10_000,
    seed: int = 0,
    *,
    earth_radius_m: float = EARTH_RADIUS_M,
) -> SweepResult:
    """Photon-loss statistics over a (diameter, zenith) grid for one pass.

    Each cell composes the deterministic factors once, draws
    ``draws_per_point`` intensity fades, and records mean/SD and the
    5/50/95 percentiles of the dB loss.
    """
    if draws_per_point < 1:
        raise ValueError("draws_per_point must be >= 1")
    diameters = np.asarray(list(diameters_m), dtype=float)
    zeniths = np.asarray(list(zenith_grid_rad), dtype=float)
    if np.any(np.abs(zeniths) > math.radians(80.0) + 1e-12):
        raise ValueError("zenith grid must lie within +/-80 degrees")

    shape = (len(diameters), len(zeniths))
    mean = np.empty(shape)
    sd = np.empty(shape)
    p05 = np.empty(shape)
    p50 = np.empty(shape)
    p95 = np.empty(shape)

    h_ogs = params.turbulence.h_ogs_m
    for zi, zen in enumerate(zeniths):
        geom = LinkGeometry(
            satellite_altitude_m=altitude_m,
            zenith_angle_rad=float(zen),
            ogs_altitude_m=h_ogs,
            earth_radius_m=earth_radius_m,
        )
        for di, diam in enumerate(diameters):
            beam = replace(params.beam, receiver_radius_m=float(diam) / 2.0)
            det = compose(replace(params, beam=beam), geom, 1.0)
            sigma_j2 = fading_variance(
                params, altitude_m, float(zen), float(diam), earth_radius_m=earth_radius_m
            )
            if sigma_j2 > 0:
                fades = sample(FadingModel(sigma_j2), _cell_rng(seed, di, zi), draws_per_point)
            else:
                fades = np.ones(draws_per_point)
            loss = -10.0 * np.log10(det.eta_total * fades)
            mean[di, zi] = loss.mean()
            sd[di, zi] = loss.std(ddof=1) if draws_per_point > 1 else 0.0
            p05[di, zi], p50[di, zi], p95[di, zi] = np.percentile(loss, [5.0, 50.0, 95.0])

    return SweepResult(
        zenith_deg=np.degrees(zeniths),
        diameters_m=diameters,
        mean_loss_db=mean,
        sd_loss_db=sd,
        p05_db=p05,
        p50_db=p50,
        p95_db=p95,
    )


def av_vs_zenith(
    model: ApertureModel,
    altitude_m: float,
    diameters_m,
    zenith_grid_rad,
    wavelength_m: float,
    *,
    profile: TurbulenceProfile | None = None,
    ogs_altitude_m: float = 0.0,
    earth_radius_m: float = EARTH_RADIUS_M,
) -> AvTable:
    """Aperture-averaging factor over a (diameter, zenith) grid.

    Path context per model: Andrews uses the full slant range at each zenith
    angle, Giggenbach the elevation angle, Yura the turbulence profile (which
    must then be supplied).
    """
    diameters = np.asarray(list(diameters_m), dtype=float)
    zeniths = np.asarray(list(zenith_grid_rad), dtype=float)
    av = np.empty((len(diameters), len(zeniths)))
    for zi, zen in enumerate(zeniths):
        geom = LinkGeometry(
            satellite_altitude_m=altitude_m,
            zenith_angle_rad=float(zen),
            ogs_altitude_m=ogs_altitude_m,
            earth_radius_m=earth_radius_m,
        )
        path = slant_range(geom)
        for di, diam in enumerate(diameters):
            av[di, zi] = aperture_averaging(
                model,
                float(diam),
                wavelength_m,
                path_m=path,
                elevation_deg=90.0 - abs(math.degrees(zen)),
                profile=profile,
                altitude_m=altitude_m,
                zenith_rad=float(zen),
            )
    return AvTable(zenith_deg=np.degrees(zeniths), diameters_m=diameters, av=av)
