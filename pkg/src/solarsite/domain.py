"""Core domain types: regions, land categories, parcels, meteorology,
deployment targets, and the tabular screening rules applied to parcels.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import DomainError, ValidationError

HOURS_PER_YEAR = 8760
GHI_CEILING_WM2 = 1500.0


class Region(str, Enum):
    """RTO footprints of the Eastern Interconnection."""

    ISO_NE = "ISO-NE"
    MISO = "MISO"
    NYISO = "NYISO"
    PJM = "PJM"
    SPP = "SPP"
    SOUTHEAST = "Southeast"


REGION_ORDER: tuple[Region, ...] = tuple(Region)


class LandCategory(str, Enum):
    """Land categories a parcel can belong to (exactly one each)."""

    PRIME_AGRICULTURE = "prime_agriculture"
    FOREST = "forest"
    SHRUBLAND = "shrubland"
    RANGE_GRASSLAND = "range_grassland"
    BARREN_MARGINAL = "barren_marginal"
    BROWNFIELD = "brownfield"
    SUPERFUND = "superfund"
    LANDFILL = "landfill"
    ABANDONED_MINE = "abandoned_mine"
    RCRA = "rcra"
    ROOF_SMALL = "roof_small"
    ROOF_MEDIUM = "roof_medium"
    ROOF_LARGE = "roof_large"


CATEGORY_ORDER: tuple[LandCategory, ...] = tuple(LandCategory)

GREENFIELD_CATEGORIES = frozenset({
    LandCategory.PRIME_AGRICULTURE,
    LandCategory.FOREST,
    LandCategory.SHRUBLAND,
    LandCategory.RANGE_GRASSLAND,
    LandCategory.BARREN_MARGINAL,
})

CONTAMINATED_CATEGORIES = frozenset({
    LandCategory.BROWNFIELD,
    LandCategory.SUPERFUND,
    LandCategory.LANDFILL,
    LandCategory.ABANDONED_MINE,
    LandCategory.RCRA,
})

ROOFTOP_CATEGORIES = frozenset({
    LandCategory.ROOF_SMALL,
    LandCategory.ROOF_MEDIUM,
    LandCategory.ROOF_LARGE,
})

GROUND_CATEGORIES = GREENFIELD_CATEGORIES | CONTAMINATED_CATEGORIES


class RoofSizeClass(str, Enum):
    SMALL = "small"
    MEDIUM = "medium"
    LARGE = "large"

    @property
    def category(self) -> LandCategory:
        return _ROOF_CLASS_TO_CATEGORY[self]


_ROOF_CLASS_TO_CATEGORY = {
    RoofSizeClass.SMALL: LandCategory.ROOF_SMALL,
    RoofSizeClass.MEDIUM: LandCategory.ROOF_MEDIUM,
    RoofSizeClass.LARGE: LandCategory.ROOF_LARGE,
}

ROOF_CATEGORY_TO_CLASS = {v: k for k, v in _ROOF_CLASS_TO_CATEGORY.items()}

# Building footprint thresholds, ft^2. Medium is inclusive on both ends.
SMALL_ROOF_MAX_FT2 = 5_000.0
MEDIUM_ROOF_MAX_FT2 = 25_000.0


@dataclass(frozen=True)
class Parcel:
    """One developable land unit with pre-extracted screening attributes."""

    id: str
    county_fips: str
    region: Region
    category: LandCategory
    usable_area_m2: float
    mean_slope_deg: float
    protected: bool
    buffer_conflict: bool
    tx_multiplier: float
    latitude: float
    longitude: float
    meteo_cell: str

    def __post_init__(self):
        if not self.id:
            raise ValidationError("parcel id must be non-empty")
        if len(self.county_fips) != 5 or not self.county_fips.isdigit():
            raise ValidationError(
                f"parcel {self.id}: county_fips must be a 5-digit code, "
                f"got {self.county_fips!r}")
        if self.usable_area_m2 < 0:
            raise ValidationError(f"parcel {self.id}: usable_area_m2 must be >= 0")
        if self.mean_slope_deg < 0:
            raise ValidationError(f"parcel {self.id}: mean_slope_deg must be >= 0")
        if not self.tx_multiplier > 0:
            raise ValidationError(f"parcel {self.id}: tx_multiplier must be > 0")
        if not -90.0 <= self.latitude <= 90.0:
            raise ValidationError(f"parcel {self.id}: latitude out of range")
        if not -180.0 <= self.longitude <= 180.0:
            raise ValidationError(f"parcel {self.id}: longitude out of range")
        if not self.meteo_cell:
            raise ValidationError(f"parcel {self.id}: meteo_cell must be non-empty")

    @property
    def is_rooftop(self) -> bool:
        return self.category in ROOFTOP_CATEGORIES


class ParcelSet:
    """Immutable collection of parcels with unique ids."""

    def __init__(self, parcels):
        parcels = tuple(parcels)
        by_id: dict[str, Parcel] = {}
        for p in parcels:
            if p.id in by_id:
                raise ValidationError(f"duplicate parcel id {p.id!r}")
            by_id[p.id] = p
        self._parcels = parcels
        self._by_id = by_id

    def __len__(self) -> int:
        return len(self._parcels)

    def __iter__(self):
        return iter(self._parcels)

    def __getitem__(self, parcel_id: str) -> Parcel:
        return self._by_id[parcel_id]

    def __contains__(self, parcel_id: str) -> bool:
        return parcel_id in self._by_id


@dataclass(frozen=True)
class MeteoSeries:
    """One weather year (8760 hourly records) for a meteorology grid cell."""

    cell: str
    ghi: np.ndarray
    dni: np.ndarray
    dhi: np.ndarray
    t_amb: np.ndarray
    latitude: float | None = None
    longitude: float | None = None
    year: int | None = None

    def __post_init__(self):
        for name in ("ghi", "dni", "dhi", "t_amb"):
            arr = np.asarray(getattr(self, name), dtype=float)
            object.__setattr__(self, name, arr)
            if arr.shape != (HOURS_PER_YEAR,):
                raise ValidationError(
                    f"meteo cell {self.cell}: {name} must have {HOURS_PER_YEAR} "
                    f"records, got {arr.shape}")
            if not np.all(np.isfinite(arr)):
                raise ValidationError(f"meteo cell {self.cell}: {name} has non-finite values")
        for name in ("ghi", "dni", "dhi"):
            if np.any(getattr(self, name) < 0):
                raise ValidationError(f"meteo cell {self.cell}: negative {name}")
        if np.any(self.ghi > GHI_CEILING_WM2):
            raise ValidationError(
                f"meteo cell {self.cell}: ghi exceeds {GHI_CEILING_WM2:.0f} W/m2")


@dataclass(frozen=True)
class ScreenCriteria:
    """Tabular screening thresholds applied to every parcel."""

    max_slope_deg: float = 10.0
    exclude_protected: bool = True
    exclude_buffer_conflicts: bool = True
    min_project_capacity_mw: float = 1.0

    def __post_init__(self):
        if not self.max_slope_deg > 0:
            raise ValidationError("max_slope_deg must be > 0")
        if self.min_project_capacity_mw < 0:
            raise ValidationError("min_project_capacity_mw must be >= 0")


# Reason codes in fixed evaluation order.
REASON_SLOPE = "slope"
REASON_PROTECTED = "protected"
REASON_BUFFER = "buffer"
REASON_BELOW_MIN_SCALE = "below_min_scale"


@dataclass(frozen=True)
class ScreenDecision:
    eligible: bool
    reason: str | None = None

    def __bool__(self) -> bool:
        return self.eligible


def screen_parcel(parcel: Parcel, criteria: ScreenCriteria) -> ScreenDecision:
    """Apply exclusion criteria in fixed order: slope, protected, buffer.

    The reason code names the first failing criterion. Rooftop categories
    are never slope-screened.
    """
    if not parcel.is_rooftop and parcel.mean_slope_deg > criteria.max_slope_deg:
        return ScreenDecision(False, REASON_SLOPE)
    if criteria.exclude_protected and parcel.protected:
        return ScreenDecision(False, REASON_PROTECTED)
    if criteria.exclude_buffer_conflicts and parcel.buffer_conflict:
        return ScreenDecision(False, REASON_BUFFER)
    return ScreenDecision(True)


def classify_building(footprint_area_ft2: float) -> RoofSizeClass:
    """Classify a building footprint: small < 5,000 ft2, medium 5,000-25,000
    ft2 (inclusive on both ends), large > 25,000 ft2.
    """
    if footprint_area_ft2 < 0:
        raise DomainError(f"footprint area must be >= 0, got {footprint_area_ft2}")
    if footprint_area_ft2 < SMALL_ROOF_MAX_FT2:
        return RoofSizeClass.SMALL
    if footprint_area_ft2 <= MEDIUM_ROOF_MAX_FT2:
        return RoofSizeClass.MEDIUM
    return RoofSizeClass.LARGE


@dataclass(frozen=True, eq=True)
class TargetSet:
    """Deployment target in integer MW, total and per region."""

    total_target_mw: int
    region_targets_mw: dict[Region, int] = field(default_factory=dict)

    def target_for(self, region: Region) -> int:
        return self.region_targets_mw.get(region, 0)


def validate_targets(targets: TargetSet) -> TargetSet:
    """Check that regional targets are nonnegative integers summing exactly
    to the total. Returns the TargetSet unchanged on success.
    """
    if not isinstance(targets.total_target_mw, int):
        raise ValidationError("total_target_mw must be an integer MW value")
    if targets.total_target_mw < 0:
        raise ValidationError("total_target_mw must be >= 0")
    for region, value in targets.region_targets_mw.items():
        if not isinstance(value, int):
            raise ValidationError(f"target for {region.value} must be an integer MW value")
        if value < 0:
            raise ValidationError(f"target for {region.value} must be >= 0")
    regional_sum = sum(targets.region_targets_mw.values())
    residual = targets.total_target_mw - regional_sum
    if residual != 0:
        raise ValidationError(
            f"regional targets sum to {regional_sum} MW but total is "
            f"{targets.total_target_mw} MW (residual {residual} MW)")
    return targets
