"""Loaders for every on-disk input format: parcel and meteorology CSVs,
density/suitability/orientation tables, and the cost, target, and scenario
config files. All loaders validate eagerly and report offending rows.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .capacity import DensityTable, SuitabilityTable
from .costs import CostParams, FinanceParams
from .domain import (HOURS_PER_YEAR, LandCategory, MeteoSeries, Parcel,
                     ParcelSet, Region, RoofSizeClass, TargetSet)
from .errors import ConfigError, ParseError, ValidationError
from .scenario import Mode, ScenarioSpec, Scheme
from .solarsim import Orientation, OrientationDistribution, OrientationWeight

PARCEL_COLUMNS = ("id", "county_fips", "region", "category", "usable_area_m2",
                  "mean_slope_deg", "protected", "buffer_conflict",
                  "tx_multiplier", "latitude", "longitude", "meteo_cell")
METEO_COLUMNS = ("meteo_cell", "hour_index", "ghi_wm2", "dni_wm2", "dhi_wm2", "tamb_c")

LEAP_HOURS = 8784


def _read_rows(path, expected_header):
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"input file not found: {path}")
    with open(path, encoding="utf-8", newline="") as handle:
        lines = handle.read().splitlines()
    if not lines:
        raise ParseError(f"{path.name}: empty file (header row required)")
    header = tuple(lines[0].split(","))
    if header != tuple(expected_header):
        raise ParseError(
            f"{path.name} row 1: header must be "
            f"{','.join(expected_header)!r}, got {lines[0]!r}")
    rows = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line:
            continue
        fields = line.split(",")
        if len(fields) != len(expected_header):
            raise ParseError(
                f"{path.name} row {lineno}: expected {len(expected_header)} "
                f"columns, got {len(fields)}")
        rows.append((lineno, fields))
    return path, rows


def _float(path, lineno, name, raw) -> float:
    try:
        value = float(raw)
    except ValueError:
        raise ParseError(f"{path.name} row {lineno}: {name} is not a number: {raw!r}")
    if not math.isfinite(value):
        raise ParseError(f"{path.name} row {lineno}: {name} is not finite")
    return value


def _int(path, lineno, name, raw) -> int:
    try:
        return int(raw)
    except ValueError:
        raise ParseError(f"{path.name} row {lineno}: {name} is not an integer: {raw!r}")


def _bool01(path, lineno, name, raw) -> bool:
    if raw == "0":
        return False
    if raw == "1":
        return True
    raise ParseError(f"{path.name} row {lineno}: {name} must be 0 or 1, got {raw!r}")


def _region(path, lineno, raw) -> Region:
    try:
        return Region(raw)
    except ValueError:
        raise ValidationError(
            f"{path.name} row {lineno}: unknown region {raw!r} "
            f"(expected one of {', '.join(r.value for r in Region)})")


def _category(path, lineno, raw) -> LandCategory:
    try:
        return LandCategory(raw)
    except ValueError:
        raise ValidationError(f"{path.name} row {lineno}: unknown land category {raw!r}")


def _size_class(path, lineno, raw) -> RoofSizeClass:
    try:
        return RoofSizeClass(raw)
    except ValueError:
        raise ValidationError(f"{path.name} row {lineno}: unknown roof size class {raw!r}")


def load_parcels(path) -> ParcelSet:
    """Load and validate parcels.csv; ids must be unique."""
    path, rows = _read_rows(path, PARCEL_COLUMNS)
    parcels = []
    seen: dict[str, int] = {}
    for lineno, f in rows:
        parcel_id = f[0]
        if parcel_id in seen:
            raise ValidationError(
                f"{path.name} row {lineno}: duplicate parcel id {parcel_id!r} "
                f"(first seen at row {seen[parcel_id]})")
        seen[parcel_id] = lineno
        try:
            parcel = Parcel(
                id=parcel_id,
                county_fips=f[1],
                region=_region(path, lineno, f[2]),
                category=_category(path, lineno, f[3]),
                usable_area_m2=_float(path, lineno, "usable_area_m2", f[4]),
                mean_slope_deg=_float(path, lineno, "mean_slope_deg", f[5]),
                protected=_bool01(path, lineno, "protected", f[6]),
                buffer_conflict=_bool01(path, lineno, "buffer_conflict", f[7]),
                tx_multiplier=_float(path, lineno, "tx_multiplier", f[8]),
                latitude=_float(path, lineno, "latitude", f[9]),
                longitude=_float(path, lineno, "longitude", f[10]),
                meteo_cell=f[11],
            )
        except ValidationError as err:
            if str(err).startswith(path.name):
                raise
            raise ValidationError(f"{path.name} row {lineno}: {err}") from err
        parcels.append(parcel)
    return ParcelSet(parcels)


def load_meteo(path) -> dict[str, MeteoSeries]:
    """Load meteo.csv into one MeteoSeries per cell.

    Each cell must provide exactly 8760 hourly records (hour_index
    0..8759). A leap-year file with 8784 records is accepted and the final
    day is dropped.
    """
    path, rows = _read_rows(path, METEO_COLUMNS)
    per_cell: dict[str, list] = {}
    for lineno, f in rows:
        cell = f[0]
        hour = _int(path, lineno, "hour_index", f[1])
        if not 0 <= hour < LEAP_HOURS:
            raise ValidationError(f"{path.name} row {lineno}: hour_index out of range")
        per_cell.setdefault(cell, []).append((
            hour,
            _float(path, lineno, "ghi_wm2", f[2]),
            _float(path, lineno, "dni_wm2", f[3]),
            _float(path, lineno, "dhi_wm2", f[4]),
            _float(path, lineno, "tamb_c", f[5]),
        ))
    series: dict[str, MeteoSeries] = {}
    for cell in sorted(per_cell):
        records = per_cell[cell]
        if len(records) == LEAP_HOURS:
            records = [r for r in records if r[0] < HOURS_PER_YEAR]
        if len(records) != HOURS_PER_YEAR:
            raise ValidationError(
                f"{path.name}: cell {cell!r} has {len(records)} records, "
                f"expected {HOURS_PER_YEAR}")
        ghi = np.empty(HOURS_PER_YEAR)
        dni = np.empty(HOURS_PER_YEAR)
        dhi = np.empty(HOURS_PER_YEAR)
        t_amb = np.empty(HOURS_PER_YEAR)
        seen = np.zeros(HOURS_PER_YEAR, dtype=bool)
        for hour, g, d, dh, t in records:
            if hour >= HOURS_PER_YEAR or seen[hour]:
                raise ValidationError(
                    f"{path.name}: cell {cell!r} has duplicate or out-of-range "
                    f"hour_index {hour}")
            seen[hour] = True
            ghi[hour], dni[hour], dhi[hour], t_amb[hour] = g, d, dh, t
        try:
            series[cell] = MeteoSeries(cell=cell, ghi=ghi, dni=dni, dhi=dhi, t_amb=t_amb)
        except ValidationError as err:
            raise ValidationError(f"{path.name}: {err}") from err
    return series


def _load_json(path) -> dict:
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"input file not found: {path}")
    try:
        with open(path, encoding="utf-8") as handle:
            data = json.load(handle)
    except json.JSONDecodeError as err:
        raise ParseError(f"{path.name}: invalid JSON ({err})") from err
    if not isinstance(data, dict):
        raise ParseError(f"{path.name}: top-level JSON value must be an object")
    return data


def _require(data: dict, key: str, filename: str):
    if key not in data:
        raise ConfigError(f"{filename}: missing required key {key!r}")
    return data[key]


def _int_mw(value, context: str) -> int:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValidationError(f"{context} must be an integer MW value")
    if isinstance(value, float):
        if not value.is_integer():
            raise ValidationError(f"{context} must be an integer MW value, got {value}")
        value = int(value)
    return value


def load_targets(path) -> TargetSet:
    """Load the deployment-target config (total plus per-region MW)."""
    path = Path(path)
    data = _load_json(path)
    total = _int_mw(_require(data, "total_target_mw", path.name),
                    f"{path.name}: total_target_mw")
    raw_regional = _require(data, "region_targets_mw", path.name)
    regional: dict[Region, int] = {}
    for token, value in raw_regional.items():
        try:
            region = Region(token)
        except ValueError:
            raise ValidationError(f"{path.name}: unknown region {token!r}")
        regional[region] = _int_mw(value, f"{path.name}: target for {token}")
    return TargetSet(total_target_mw=total, region_targets_mw=regional)


def load_density(path, module_efficiency: float | None = None,
                 flat_fraction: dict[RoofSizeClass, float] | None = None) -> DensityTable:
    """Load density.csv (category, MW/km2); rooftop conversion parameters
    come from the run config, not the CSV."""
    path, rows = _read_rows(path, ("category", "mw_per_km2"))
    densities: dict[LandCategory, float] = {}
    for lineno, f in rows:
        category = _category(path, lineno, f[0])
        if category in densities:
            raise ValidationError(f"{path.name} row {lineno}: duplicate category")
        densities[category] = _float(path, lineno, "mw_per_km2", f[1])
    kwargs = {"mw_per_km2": densities}
    if module_efficiency is not None:
        kwargs["module_efficiency"] = module_efficiency
    if flat_fraction is not None:
        kwargs["flat_fraction"] = flat_fraction
    return DensityTable(**kwargs)


def load_suitability(path) -> SuitabilityTable:
    path, rows = _read_rows(path, ("locale", "census_division", "size_class", "fraction"))
    entries: dict[tuple[str, str, RoofSizeClass], float] = {}
    for lineno, f in rows:
        key = (f[0], f[1], _size_class(path, lineno, f[2]))
        if key in entries:
            raise ValidationError(f"{path.name} row {lineno}: duplicate suitability key")
        entries[key] = _float(path, lineno, "fraction", f[3])
    return SuitabilityTable(entries=entries)


def load_orientations(path) -> dict[RoofSizeClass, OrientationDistribution]:
    """Load orientations.csv: the weighted tilt/azimuth mix per roof size
    class. Rows with flat=1 are simulated at tilt = site latitude."""
    path, rows = _read_rows(
        path, ("size_class", "tilt_deg", "azimuth_deg", "weight", "flat"))
    per_class: dict[RoofSizeClass, list[OrientationWeight]] = {}
    for lineno, f in rows:
        cls = _size_class(path, lineno, f[0])
        try:
            orientation = Orientation(
                tilt_deg=_float(path, lineno, "tilt_deg", f[1]),
                azimuth_deg=_float(path, lineno, "azimuth_deg", f[2]))
        except ValidationError as err:
            raise ValidationError(f"{path.name} row {lineno}: {err}") from err
        per_class.setdefault(cls, []).append(OrientationWeight(
            orientation=orientation,
            weight=_float(path, lineno, "weight", f[3]),
            flat=_bool01(path, lineno, "flat", f[4])))
    out = {}
    for cls, entries in per_class.items():
        try:
            out[cls] = OrientationDistribution(entries=tuple(entries))
        except ValidationError as err:
            raise ValidationError(f"{path.name}: {cls.value}: {err}") from err
    return out


def load_costs(path) -> CostParams:
    """Load the cost config. FOM is $/kW-yr under fom_usd_per_kw_yr; a file
    may instead carry fom_usd_per_mw_yr, which is converted on load."""
    path = Path(path)
    data = _load_json(path)
    capex = _require(data, "capex_usd_per_kw", path.name)
    if "fom_usd_per_kw_yr" in data and "fom_usd_per_mw_yr" in data:
        raise ConfigError(f"{path.name}: give fom in exactly one unit")
    if "fom_usd_per_kw_yr" in data:
        fom = dict(data["fom_usd_per_kw_yr"])
    elif "fom_usd_per_mw_yr" in data:
        fom = {k: v / 1000.0 for k, v in data["fom_usd_per_mw_yr"].items()}
    else:
        raise ConfigError(f"{path.name}: missing fom_usd_per_kw_yr")
    finance = FinanceParams(
        discount_rate=_require(data, "discount_rate", path.name),
        lifetime_years=_require(data, "lifetime_years", path.name))
    return CostParams(
        capex_usd_per_kw=dict(capex),
        fom_usd_per_kw_yr=fom,
        brownfield_premium=_require(data, "brownfield_premium", path.name),
        bin_multipliers=dict(_require(data, "bin_multiplier", path.name)),
        national_avg_lcot_usd_per_mwh=_require(
            data, "national_avg_lcot_usd_per_mwh", path.name),
        finance=finance)


def load_scenario(path, default_targets: TargetSet | None = None) -> ScenarioSpec:
    """Load a scenario config; its targets reference (if any) is resolved
    relative to the scenario file, else default_targets is used."""
    path = Path(path)
    data = _load_json(path)
    try:
        scheme = Scheme(_require(data, "scheme", path.name))
    except ValueError:
        raise ValidationError(f"{path.name}: unknown scheme {data['scheme']!r}")
    try:
        mode = Mode(_require(data, "mode", path.name))
    except ValueError:
        raise ValidationError(f"{path.name}: unknown mode {data['mode']!r}")
    if "targets" in data and data["targets"]:
        targets = load_targets(path.parent / data["targets"])
    elif default_targets is not None:
        targets = default_targets
    else:
        raise ConfigError(f"{path.name}: no targets file referenced or supplied")
    sub_order = None
    if data.get("sub_order"):
        sub_order = []
        for token in data["sub_order"]:
            try:
                sub_order.append(LandCategory(token))
            except ValueError:
                raise ValidationError(f"{path.name}: unknown land category {token!r}")
        sub_order = tuple(sub_order)
    return ScenarioSpec(
        name=data.get("name", path.stem),
        scheme=scheme,
        mode=mode,
        targets=targets,
        strict=bool(data.get("strict", False)),
        fallback=data.get("fallback"),
        sub_order=sub_order)
