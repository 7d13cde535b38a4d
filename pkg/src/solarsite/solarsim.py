"""Hourly PV performance model.

A transparent PVWatts-like chain: solar geometry from declination and hour
angle, single-axis-tracking rotation for utility PV, isotropic-sky
transposition, NOCT cell temperature, and a linear temperature derate.
All functions accept scalars or numpy arrays and are pure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .domain import HOURS_PER_YEAR, MeteoSeries
from .errors import DomainError, ValidationError

DEG = math.pi / 180.0


@dataclass(frozen=True)
class SimConfig:
    """Tunable constants of the performance chain."""

    noct_c: float = 45.0
    temp_coeff_per_c: float = -0.0037
    system_loss: float = 0.14
    albedo: float = 0.2
    rotation_limit_deg: float | None = 60.0

    def __post_init__(self):
        if not 0.0 <= self.system_loss < 1.0:
            raise ValidationError("system_loss must be in [0, 1)")
        if not 0.0 <= self.albedo <= 1.0:
            raise ValidationError("albedo must be in [0, 1]")
        if self.rotation_limit_deg is not None and not 0 < self.rotation_limit_deg <= 90:
            raise ValidationError("rotation_limit_deg must be in (0, 90] or None")


@dataclass(frozen=True)
class SolarPosition:
    """Sun position; zenith in [0, 180], azimuth in [0, 360) clockwise from north.

    Fields are floats or aligned numpy arrays.
    """

    zenith_deg: np.ndarray | float
    azimuth_deg: np.ndarray | float


@dataclass(frozen=True)
class Orientation:
    """Fixed panel orientation."""

    tilt_deg: float
    azimuth_deg: float

    def __post_init__(self):
        if not 0.0 <= self.tilt_deg <= 90.0:
            raise ValidationError(f"tilt must be in [0, 90], got {self.tilt_deg}")
        if not 0.0 <= self.azimuth_deg < 360.0:
            raise ValidationError(f"azimuth must be in [0, 360), got {self.azimuth_deg}")


@dataclass(frozen=True)
class OrientationWeight:
    orientation: Orientation
    weight: float
    # Flat-roof members are simulated at tilt = site latitude.
    flat: bool = False


@dataclass(frozen=True)
class OrientationDistribution:
    """Weighted mix of roof orientations for one roof size class."""

    entries: tuple[OrientationWeight, ...]

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.entries))
        if any(e.weight < 0 for e in self.entries):
            raise ValidationError("orientation weights must be >= 0")
        if self.entries:
            total = math.fsum(e.weight for e in self.entries)
            if abs(total - 1.0) > 1e-9:
                raise ValidationError(
                    f"orientation weights must sum to 1, got {total}")


@dataclass(frozen=True)
class CFSeries:
    """8760 hourly capacity factors plus their arithmetic mean."""

    hourly: np.ndarray
    annual_mean: float

    @classmethod
    def from_hourly(cls, hourly: np.ndarray) -> "CFSeries":
        hourly = np.asarray(hourly, dtype=float)
        if hourly.shape != (HOURS_PER_YEAR,):
            raise ValidationError(f"cf series must have {HOURS_PER_YEAR} hours")
        if np.any(hourly < 0) or np.any(hourly > 1):
            raise ValidationError("hourly capacity factors must lie in [0, 1]")
        return cls(hourly=hourly, annual_mean=math.fsum(hourly) / HOURS_PER_YEAR)


def declination(day_of_year):
    """Solar declination in degrees (Cooper): 23.45 sin(360 (284+n)/365)."""
    n = np.asarray(day_of_year, dtype=float)
    return 23.45 * np.sin(DEG * 360.0 * (284.0 + n) / 365.0)


def solar_position(latitude_deg: float, hour) -> SolarPosition:
    """Sun position for an hour index within the year (local solar time).

    `hour` may be fractional and is split as day n = floor(hour/24) + 1,
    solar hour = hour mod 24. Zenith from
    cos(zen) = sin(lat) sin(decl) + cos(lat) cos(decl) cos(omega) with hour
    angle omega = 15 (solar_hour - 12); azimuth from the east/north sun
    vector components, clockwise from north.
    """
    if not -90.0 <= latitude_deg <= 90.0:
        raise DomainError(f"latitude must be in [-90, 90], got {latitude_deg}")
    hour = np.asarray(hour, dtype=float)
    if np.any(hour < 0) or np.any(hour >= HOURS_PER_YEAR):
        raise DomainError("hour index must lie in [0, 8760)")

    day = np.floor(hour / 24.0) + 1.0
    solar_hour = hour - (day - 1.0) * 24.0
    decl = declination(day) * DEG
    omega = 15.0 * (solar_hour - 12.0) * DEG
    lat = latitude_deg * DEG

    cos_zen = np.sin(lat) * np.sin(decl) + np.cos(lat) * np.cos(decl) * np.cos(omega)
    cos_zen = np.clip(cos_zen, -1.0, 1.0)
    zenith = np.arccos(cos_zen) / DEG

    east = -np.cos(decl) * np.sin(omega)
    north = np.sin(decl) * np.cos(lat) - np.cos(decl) * np.cos(omega) * np.sin(lat)
    azimuth = np.arctan2(east, north) / DEG % 360.0
    return SolarPosition(zenith_deg=zenith, azimuth_deg=azimuth)


def tracker_rotation(sp: SolarPosition, rotation_limit_deg: float | None = 60.0):
    """Rotation and cosine of the angle of incidence for an ideal
    horizontal north-south single-axis tracker.

    The unconstrained optimum satisfies tan(rot) = sin(zen) sin(az) / cos(zen),
    which maximizes cos_aoi = sin(zen) sin(az) sin(rot) + cos(zen) cos(rot).
    Rotation is clipped to +/- rotation_limit_deg when a limit is given.
    Hours with the sun at or below the horizon return (0, 0).
    """
    zen = np.asarray(sp.zenith_deg, dtype=float) * DEG
    az = np.asarray(sp.azimuth_deg, dtype=float) * DEG
    sin_zen_east = np.sin(zen) * np.sin(az)
    cos_zen = np.cos(zen)
    daylight = zen < math.pi / 2.0

    rot = np.arctan2(sin_zen_east, cos_zen)
    if rotation_limit_deg is not None:
        limit = rotation_limit_deg * DEG
        rot = np.clip(rot, -limit, limit)
    cos_aoi = sin_zen_east * np.sin(rot) + cos_zen * np.cos(rot)
    # The tracker can always park flat, so it never does worse than a
    # horizontal plane; enforce that bound against rounding.
    cos_aoi = np.maximum(cos_aoi, cos_zen)
    cos_aoi = np.where(daylight, np.clip(cos_aoi, 0.0, 1.0), 0.0)
    rot = np.where(daylight, rot / DEG, 0.0)
    return rot, cos_aoi


def orientation_cos_aoi(sp: SolarPosition, tilt_deg, azimuth_deg):
    """cos(angle of incidence) on a fixed surface; 0 when the sun is below
    the horizon or behind the panel."""
    zen = np.asarray(sp.zenith_deg, dtype=float) * DEG
    sun_az = np.asarray(sp.azimuth_deg, dtype=float) * DEG
    tilt = np.asarray(tilt_deg, dtype=float) * DEG
    panel_az = np.asarray(azimuth_deg, dtype=float) * DEG
    cos_aoi = (np.sin(zen) * np.sin(tilt) * np.cos(sun_az - panel_az)
               + np.cos(zen) * np.cos(tilt))
    daylight = zen < math.pi / 2.0
    return np.where(daylight, np.clip(cos_aoi, 0.0, 1.0), 0.0)


def poa_irradiance(ghi, dni, dhi, cos_aoi, tilt_deg, albedo: float = 0.2):
    """Isotropic-sky plane-of-array irradiance, W/m2.

    POA = dni max(cos_aoi, 0) + dhi (1 + cos tilt)/2 + ghi albedo (1 - cos tilt)/2
    """
    cos_tilt = np.cos(np.asarray(tilt_deg, dtype=float) * DEG)
    sky_view = (1.0 + cos_tilt) / 2.0
    ground_view = (1.0 - cos_tilt) / 2.0
    beam = np.asarray(dni, dtype=float) * np.maximum(np.asarray(cos_aoi, dtype=float), 0.0)
    return beam + np.asarray(dhi, dtype=float) * sky_view \
        + np.asarray(ghi, dtype=float) * albedo * ground_view


def cell_temperature(poa, t_amb, noct_c: float = 45.0):
    """NOCT cell temperature: t_amb + poa (NOCT - 20) / 800."""
    return np.asarray(t_amb, dtype=float) + np.asarray(poa, dtype=float) * (noct_c - 20.0) / 800.0


def hourly_cf(poa, t_cell, temp_coeff_per_c: float = -0.0037, system_loss: float = 0.14):
    """Hourly capacity factor with a linear temperature derate and a flat
    system loss, clamped to [0, 1]."""
    cf = (np.asarray(poa, dtype=float) / 1000.0) \
        * (1.0 + temp_coeff_per_c * (np.asarray(t_cell, dtype=float) - 25.0)) \
        * (1.0 - system_loss)
    return np.clip(cf, 0.0, 1.0)


def _hour_centers() -> np.ndarray:
    # Mid-hour sample points: hour h represents [h, h+1).
    return np.arange(HOURS_PER_YEAR, dtype=float) + 0.5


def simulate_utility_cf(series: MeteoSeries, latitude_deg: float,
                        config: SimConfig = SimConfig()) -> CFSeries:
    """Hourly capacity factors for a single-axis-tracking utility system."""
    sp = solar_position(latitude_deg, _hour_centers())
    rot, cos_aoi = tracker_rotation(sp, config.rotation_limit_deg)
    poa = poa_irradiance(series.ghi, series.dni, series.dhi,
                         cos_aoi, np.abs(rot), config.albedo)
    t_cell = cell_temperature(poa, series.t_amb, config.noct_c)
    cf = hourly_cf(poa, t_cell, config.temp_coeff_per_c, config.system_loss)
    cf = np.where(np.asarray(sp.zenith_deg) < 90.0, cf, 0.0)
    return CFSeries.from_hourly(cf)


def simulate_fixed_cf(series: MeteoSeries, latitude_deg: float,
                      tilt_deg: float, azimuth_deg: float,
                      config: SimConfig = SimConfig()) -> CFSeries:
    """Hourly capacity factors for a fixed-orientation system."""
    sp = solar_position(latitude_deg, _hour_centers())
    cos_aoi = orientation_cos_aoi(sp, tilt_deg, azimuth_deg)
    poa = poa_irradiance(series.ghi, series.dni, series.dhi,
                         cos_aoi, tilt_deg, config.albedo)
    t_cell = cell_temperature(poa, series.t_amb, config.noct_c)
    cf = hourly_cf(poa, t_cell, config.temp_coeff_per_c, config.system_loss)
    cf = np.where(np.asarray(sp.zenith_deg) < 90.0, cf, 0.0)
    return CFSeries.from_hourly(cf)


def simulate_roof_cf(series: MeteoSeries, latitude_deg: float,
                     dist: OrientationDistribution,
                     config: SimConfig = SimConfig()) -> float:
    """Weight-averaged annual capacity factor over a roof orientation mix.

    Flat-roof entries are simulated at tilt equal to the site latitude.
    """
    if not dist.entries:
        raise DomainError("orientation distribution is empty")
    terms = []
    for entry in dist.entries:
        tilt = abs(latitude_deg) if entry.flat else entry.orientation.tilt_deg
        cf = simulate_fixed_cf(series, latitude_deg, tilt,
                               entry.orientation.azimuth_deg, config)
        terms.append(entry.weight * cf.annual_mean)
    return math.fsum(terms)


def county_mean_cf(cell_cfs) -> float:
    """Arithmetic mean of per-cell annual capacity factors."""
    values = list(cell_cfs)
    if not values:
        raise DomainError("county_mean_cf needs at least one cell value")
    return math.fsum(values) / len(values)
