"""Convert screened land area and rooftop area into nameplate capacity:
areal power densities, rooftop suitability and packing, project splitting,
and capacity-scale bins.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .domain import GROUND_CATEGORIES, LandCategory, RoofSizeClass
from .errors import ConfigError, DomainError, ValidationError

MAX_PROJECT_MW = 700.0
DEFAULT_DENSITY_MW_PER_KM2 = 45.0
DEFAULT_MODULE_EFFICIENCY = 0.15

# Share of each roof class assumed flat (the rest is pitched).
DEFAULT_FLAT_FRACTION = {
    RoofSizeClass.SMALL: 0.1,
    RoofSizeClass.MEDIUM: 0.5,
    RoofSizeClass.LARGE: 0.8,
}


@dataclass(frozen=True)
class DensityTable:
    """Areal power density per ground category plus rooftop conversion
    parameters."""

    mw_per_km2: dict[LandCategory, float] = field(default_factory=dict)
    module_efficiency: float = DEFAULT_MODULE_EFFICIENCY
    flat_fraction: dict[RoofSizeClass, float] = field(
        default_factory=lambda: dict(DEFAULT_FLAT_FRACTION))

    def __post_init__(self):
        for category, density in self.mw_per_km2.items():
            if not density > 0:
                raise ValidationError(f"density for {category.value} must be > 0")
        if not 0.0 < self.module_efficiency < 1.0:
            raise ValidationError("module_efficiency must be in (0, 1)")
        for cls, frac in self.flat_fraction.items():
            if not 0.0 <= frac <= 1.0:
                raise ValidationError(f"flat_fraction for {cls.value} must be in [0, 1]")

    def density_for(self, category: LandCategory) -> float:
        return self.mw_per_km2.get(category, DEFAULT_DENSITY_MW_PER_KM2)


@dataclass(frozen=True)
class SuitabilityTable:
    """Suitable-roof fraction keyed by (locale, census division, size class)."""

    entries: dict[tuple[str, str, RoofSizeClass], float] = field(default_factory=dict)

    def __post_init__(self):
        for key, frac in self.entries.items():
            if not 0.0 <= frac <= 1.0:
                raise ValidationError(f"suitability for {key} must be in [0, 1]")

    def lookup(self, locale: str, census_division: str,
               size_class: RoofSizeClass) -> float:
        key = (locale, census_division, size_class)
        if key not in self.entries:
            raise ConfigError(
                f"no suitability entry for locale={locale!r}, "
                f"census_division={census_division!r}, size_class={size_class.value}")
        return self.entries[key]


@dataclass(frozen=True)
class CapacityBin:
    label: str
    lower_mw: float
    upper_mw: float


CAPACITY_BINS: tuple[CapacityBin, ...] = (
    CapacityBin("5-20 MW", 5.0, 20.0),
    CapacityBin("20-50 MW", 20.0, 50.0),
    CapacityBin("50-100 MW", 50.0, 100.0),
    CapacityBin("100-700 MW", 100.0, 700.0),
)


def capacity_bin(mw: float, min_capacity_mw: float = 1.0) -> CapacityBin | None:
    """Bin a project by nameplate MW. Bins are half-open [lower, upper);
    projects in [min_capacity_mw, 5) take the first bin's multiplier.
    Returns None below the minimum project scale (excluded, not fatal).
    """
    if mw < min_capacity_mw:
        return None
    if mw < 20.0:
        return CAPACITY_BINS[0]
    if mw < 50.0:
        return CAPACITY_BINS[1]
    if mw < 100.0:
        return CAPACITY_BINS[2]
    if mw <= MAX_PROJECT_MW:
        return CAPACITY_BINS[3]
    raise DomainError(f"project of {mw} MW exceeds {MAX_PROJECT_MW:.0f} MW; split it first")


def land_capacity(usable_area_m2: float, category: LandCategory,
                  density: DensityTable) -> float:
    """Nameplate MW from ground area: area [km2] x density [MW/km2]."""
    if category not in GROUND_CATEGORIES:
        raise DomainError(
            f"{category.value} is not a ground category; use the rooftop path")
    if usable_area_m2 < 0:
        raise DomainError("usable_area_m2 must be >= 0")
    return usable_area_m2 / 1e6 * density.density_for(category)


def split_capacity(mw: float, max_chunk_mw: float = MAX_PROJECT_MW) -> tuple[float, ...]:
    """Split a capacity into chunks of at most max_chunk_mw, preserving the
    total exactly. Zero capacity yields no chunks."""
    if mw < 0:
        raise DomainError("capacity must be >= 0")
    chunks = []
    remaining = mw
    while remaining > max_chunk_mw:
        chunks.append(max_chunk_mw)
        remaining -= max_chunk_mw
    if remaining > 0:
        chunks.append(remaining)
    return tuple(chunks)


def land_capacity_chunks(usable_area_m2: float, category: LandCategory,
                         density: DensityTable) -> tuple[float, ...]:
    """Ground capacity split into project-scale chunks of at most 700 MW."""
    return split_capacity(land_capacity(usable_area_m2, category, density))


def shading_elevation_deg(latitude_deg: float) -> float:
    """Solar elevation at 10:00 solar time on the winter solstice,
    the design condition for flat-roof inter-row spacing."""
    decl = math.radians(-23.45)
    lat = math.radians(latitude_deg)
    hour_angle = math.radians(-30.0)  # 10:00 = 2 h before solar noon
    sin_alpha = (math.sin(lat) * math.sin(decl)
                 + math.cos(lat) * math.cos(decl) * math.cos(hour_angle))
    return math.degrees(math.asin(sin_alpha))


def packing_fraction(tilt_deg: float, sun_elevation_deg: float) -> float:
    """Row packing fraction cos(tilt) / (cos(tilt) + sin(tilt)/tan(alpha))
    for rows spaced to clear their own shadows at elevation alpha."""
    if not 0.0 <= tilt_deg < 90.0:
        raise DomainError(f"tilt must be in [0, 90), got {tilt_deg}")
    if sun_elevation_deg <= 0.0:
        raise DomainError("no direct sun at the design hour (elevation <= 0)")
    tilt = math.radians(tilt_deg)
    if tilt == 0.0:
        return 1.0
    shadow = math.sin(tilt) / math.tan(math.radians(sun_elevation_deg))
    return math.cos(tilt) / (math.cos(tilt) + shadow)


def flat_roof_packing(latitude_deg: float, panel_tilt_deg: float) -> float:
    """Packing fraction for flat roofs with rows spaced to avoid
    self-shading at 10:00 solar time year-round (worst case: winter
    solstice)."""
    if not 24.0 <= latitude_deg <= 50.0:
        raise DomainError(
            f"latitude {latitude_deg} outside the supported range [24, 50] N")
    alpha = shading_elevation_deg(latitude_deg)
    return packing_fraction(panel_tilt_deg, alpha)


def roof_panel_area(roof_area_m2: float, size_class: RoofSizeClass, kind: str,
                    suitability: SuitabilityTable, locale: str,
                    census_division: str, latitude_deg: float) -> float:
    """Panel-placeable area from raw roof area.

    Suitable area is roof_area times the suitability fraction; pitched
    roofs host panels on the more south-facing half, flat roofs lose area
    to inter-row spacing at tilt = latitude.
    """
    if roof_area_m2 < 0:
        raise DomainError("roof_area_m2 must be >= 0")
    if kind not in ("flat", "pitched"):
        raise DomainError(f"kind must be 'flat' or 'pitched', got {kind!r}")
    suitable = roof_area_m2 * suitability.lookup(locale, census_division, size_class)
    if kind == "pitched":
        return suitable * 0.5
    return suitable * flat_roof_packing(latitude_deg, abs(latitude_deg))


def roof_capacity(panel_area_m2: float, efficiency: float) -> float:
    """Nameplate MW from panel area at 1000 W/m2 STC irradiance."""
    if panel_area_m2 < 0 or efficiency < 0:
        raise DomainError("panel area and efficiency must be >= 0")
    return panel_area_m2 * 1000.0 * efficiency / 1e6
