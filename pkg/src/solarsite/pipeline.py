"""End-to-end orchestration: run configuration, pipeline stages, export
writers, and the output manifest.

All outputs are plain CSV plus a JSON manifest of content digests. Two
runs on identical inputs produce byte-identical files.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import math
from contextlib import contextmanager
from dataclasses import dataclass
from pathlib import Path

from .capacity import (DensityTable, SuitabilityTable, land_capacity_chunks,
                       roof_capacity, roof_panel_area)
from .costs import CostParams, SupplyPoint, site_lcoe
from .curves import SupplyCurve, build_curve, cost_at_capacity, merge_curves
from .domain import (CATEGORY_ORDER, GROUND_CATEGORIES, LandCategory,
                     ParcelSet, REGION_ORDER, Region, ROOF_CATEGORY_TO_CLASS,
                     RoofSizeClass, REASON_BELOW_MIN_SCALE, ScreenCriteria,
                     TargetSet, screen_parcel, validate_targets)
from .errors import ConfigError, SolarSiteError, ValidationError
from .ingest import (load_costs, load_density, load_meteo, load_orientations,
                     load_parcels, load_scenario, load_suitability,
                     load_targets, _load_json, _read_rows)
from .scenario import AllocationResult, allocate
from .solarsim import (OrientationDistribution, SimConfig, county_mean_cf,
                       simulate_roof_cf, simulate_utility_cf)

CF_COLUMNS = ("meteo_cell", "annual_cf_utility", "annual_cf_roof_small",
              "annual_cf_roof_medium", "annual_cf_roof_large")
POINT_COLUMNS = ("parcel_id", "region", "category", "capacity_mw", "annual_cf",
                 "lcoe_usd_per_mwh", "adjusted_capex_usd_per_kw")
CURVE_COLUMNS = ("region", "category", "parcel_id", "capacity_mw",
                 "lcoe_usd_per_mwh", "cum_capacity_mw")

TECH_KEYS = ("utility", "roof_small", "roof_medium", "roof_large")

REASON_ZERO_GENERATION = "zero_generation"
REASON_ZERO_AREA = "zero_area"


@dataclass(frozen=True)
class RunConfig:
    """Resolved run configuration; all paths exist at construction time."""

    base_dir: Path
    parcels_path: Path
    meteo_path: Path
    density_path: Path
    suitability_path: Path
    orientations_path: Path
    costs_path: Path
    targets_path: Path
    scenario_paths: tuple[Path, ...]
    screen: ScreenCriteria
    sim: SimConfig
    roof_locale: str
    roof_census_division: str
    flat_fraction: dict[RoofSizeClass, float]
    module_efficiency: float
    random_free: bool = True


def load_run_config(path) -> RunConfig:
    path = Path(path)
    data = _load_json(path)
    base = path.parent
    paths = data.get("paths")
    if not isinstance(paths, dict):
        raise ConfigError(f"{path.name}: missing 'paths' section")

    def resolve(key: str) -> Path:
        if key not in paths:
            raise ConfigError(f"{path.name}: missing paths.{key}")
        p = base / paths[key]
        if not p.is_file():
            raise ConfigError(f"{path.name}: paths.{key} does not exist: {p}")
        return p

    scenario_paths = []
    for entry in paths.get("scenarios", []):
        p = base / entry
        if not p.is_file():
            raise ConfigError(f"{path.name}: scenario file does not exist: {p}")
        scenario_paths.append(p)

    try:
        screen = ScreenCriteria(**data.get("screen", {}))
        sim = SimConfig(**data.get("sim", {}))
    except TypeError as err:
        raise ConfigError(f"{path.name}: {err}") from err

    roof = data.get("rooftop", {})
    flat_fraction = {}
    for token, value in roof.get("flat_fraction", {}).items():
        try:
            flat_fraction[RoofSizeClass(token)] = float(value)
        except ValueError:
            raise ConfigError(f"{path.name}: unknown roof size class {token!r}")

    return RunConfig(
        base_dir=base,
        parcels_path=resolve("parcels"),
        meteo_path=resolve("meteo"),
        density_path=resolve("density"),
        suitability_path=resolve("suitability"),
        orientations_path=resolve("orientations"),
        costs_path=resolve("costs"),
        targets_path=resolve("targets"),
        scenario_paths=tuple(scenario_paths),
        screen=screen,
        sim=sim,
        roof_locale=roof.get("locale", "default"),
        roof_census_division=roof.get("census_division", "default"),
        flat_fraction=flat_fraction,
        module_efficiency=float(roof.get("module_efficiency", 0.15)),
        random_free=bool(data.get("random_free", True)),
    )


@contextmanager
def _stage(name: str):
    try:
        yield
    except SolarSiteError as err:
        if err.stage is None:
            err.stage = name
        raise


def cell_latitudes(parcels: ParcelSet) -> dict[str, float]:
    """Latitude per meteo cell: the mean latitude of referencing parcels."""
    sums: dict[str, list[float]] = {}
    for parcel in parcels:
        sums.setdefault(parcel.meteo_cell, []).append(parcel.latitude)
    return {cell: math.fsum(vals) / len(vals) for cell, vals in sums.items()}


def simulate_cell_cfs(meteo, parcels: ParcelSet,
                      orientations: dict[RoofSizeClass, OrientationDistribution],
                      sim: SimConfig) -> dict[str, dict[str, float]]:
    """Annual capacity factors per meteo cell: single-axis-tracking utility
    plus one orientation-weighted value per roof size class."""
    for cls in RoofSizeClass:
        if cls not in orientations:
            raise ConfigError(f"no orientation distribution for roof class {cls.value!r}")
    latitudes = cell_latitudes(parcels)
    missing = sorted(cell for cell in latitudes if cell not in meteo)
    if missing:
        raise ValidationError(f"parcels reference unknown meteo cells: {missing}")
    out: dict[str, dict[str, float]] = {}
    for cell in sorted(latitudes):
        series = meteo[cell]
        lat = latitudes[cell]
        values = {"utility": simulate_utility_cf(series, lat, sim).annual_mean}
        for cls in RoofSizeClass:
            values[f"roof_{cls.value}"] = simulate_roof_cf(
                series, lat, orientations[cls], sim)
        out[cell] = values
    return out


def county_tech_cfs(parcels: ParcelSet, cell_cfs) -> dict[str, dict[str, float]]:
    """County-level capacity factors: the mean over the distinct cells
    referenced by each county's parcels."""
    county_cells: dict[str, set] = {}
    for parcel in parcels:
        county_cells.setdefault(parcel.county_fips, set()).add(parcel.meteo_cell)
    out = {}
    for county in sorted(county_cells):
        cells = sorted(county_cells[county])
        out[county] = {
            tech: county_mean_cf(cell_cfs[cell][tech] for cell in cells)
            for tech in TECH_KEYS
        }
    return out


def build_supply_points(parcels: ParcelSet, criteria: ScreenCriteria,
                        county_cfs, density: DensityTable,
                        suitability: SuitabilityTable, roof_locale: str,
                        roof_census_division: str, costs: CostParams):
    """Screen parcels, convert to capacity, and price every deployable
    project. Returns (points, exclusions); exclusions are (id, reason)
    pairs in input order."""
    points: list[SupplyPoint] = []
    exclusions: list[tuple[str, str]] = []
    for parcel in parcels:
        decision = screen_parcel(parcel, criteria)
        if not decision:
            exclusions.append((parcel.id, decision.reason))
            continue
        if parcel.category in GROUND_CATEGORIES:
            cf = county_cfs[parcel.county_fips]["utility"]
            if cf <= 0:
                exclusions.append((parcel.id, REASON_ZERO_GENERATION))
                continue
            chunks = land_capacity_chunks(parcel.usable_area_m2, parcel.category, density)
            if not chunks:
                exclusions.append((parcel.id, REASON_ZERO_AREA))
                continue
            for index, chunk_mw in enumerate(chunks):
                chunk_id = parcel.id if len(chunks) == 1 else f"{parcel.id}#{index + 1:03d}"
                if chunk_mw < criteria.min_project_capacity_mw:
                    exclusions.append((chunk_id, REASON_BELOW_MIN_SCALE))
                    continue
                point = site_lcoe(parcel, chunk_mw, cf, costs,
                                  criteria.min_project_capacity_mw)
                points.append(dataclasses.replace(point, parcel_id=chunk_id))
        else:
            cls = ROOF_CATEGORY_TO_CLASS[parcel.category]
            cf = county_cfs[parcel.county_fips][f"roof_{cls.value}"]
            if cf <= 0:
                exclusions.append((parcel.id, REASON_ZERO_GENERATION))
                continue
            flat_share = density.flat_fraction.get(cls, 0.0)
            panel_area = 0.0
            if flat_share > 0:
                panel_area += flat_share * roof_panel_area(
                    parcel.usable_area_m2, cls, "flat", suitability,
                    roof_locale, roof_census_division, parcel.latitude)
            if flat_share < 1:
                panel_area += (1.0 - flat_share) * roof_panel_area(
                    parcel.usable_area_m2, cls, "pitched", suitability,
                    roof_locale, roof_census_division, parcel.latitude)
            capacity = roof_capacity(panel_area, density.module_efficiency)
            if capacity <= 0:
                exclusions.append((parcel.id, REASON_ZERO_AREA))
                continue
            points.append(site_lcoe(parcel, capacity, cf, costs,
                                    criteria.min_project_capacity_mw))
    return points, exclusions


def curves_by_group(points) -> dict[tuple[Region, LandCategory], SupplyCurve]:
    """One supply curve per (region, category) pair that has points."""
    groups: dict[tuple[Region, LandCategory], list[SupplyPoint]] = {}
    for point in points:
        groups.setdefault((point.region, point.category), []).append(point)
    return {key: build_curve(pts) for key, pts in groups.items()}


def _group_order(curves):
    for region in REGION_ORDER:
        for category in CATEGORY_ORDER:
            if (region, category) in curves:
                yield (region, category), curves[(region, category)]


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _write_csv(path: Path, header, rows):
    lines = [",".join(header)]
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_cf_csv(path: Path, cell_cfs):
    rows = [(cell,) + tuple(cell_cfs[cell][tech] for tech in TECH_KEYS)
            for cell in sorted(cell_cfs)]
    _write_csv(path, CF_COLUMNS, rows)


def read_cf_csv(path) -> dict[str, dict[str, float]]:
    path, rows = _read_rows(path, CF_COLUMNS)
    out = {}
    for lineno, f in rows:
        if f[0] in out:
            raise ValidationError(f"{path.name} row {lineno}: duplicate cell {f[0]!r}")
        out[f[0]] = {tech: float(f[i + 1]) for i, tech in enumerate(TECH_KEYS)}
    return out


def write_supply_points_csv(path: Path, points):
    rows = [(p.parcel_id, p.region.value, p.category.value, p.capacity_mw,
             p.annual_cf, p.lcoe_usd_per_mwh, p.adjusted_capex_usd_per_kw)
            for p in points]
    _write_csv(path, POINT_COLUMNS, rows)


def read_supply_points_csv(path) -> list[SupplyPoint]:
    path, rows = _read_rows(path, POINT_COLUMNS)
    points = []
    for lineno, f in rows:
        try:
            points.append(SupplyPoint(
                parcel_id=f[0], region=Region(f[1]), category=LandCategory(f[2]),
                capacity_mw=float(f[3]), annual_cf=float(f[4]),
                lcoe_usd_per_mwh=float(f[5]), adjusted_capex_usd_per_kw=float(f[6])))
        except ValueError as err:
            raise ValidationError(f"{path.name} row {lineno}: {err}") from err
    return points


def write_curves_csv(path: Path, curves):
    rows = []
    for (region, category), curve in _group_order(curves):
        for point, cum in zip(curve.points, curve.cum_capacity_mw):
            rows.append((region.value, category.value, point.parcel_id,
                         point.capacity_mw, point.lcoe_usd_per_mwh, cum))
    _write_csv(path, CURVE_COLUMNS, rows)


def write_exclusions_csv(path: Path, exclusions):
    _write_csv(path, ("parcel_id", "reason"), exclusions)


def write_allocation_csv(path: Path, result: AllocationResult):
    rows = [(result.scenario, a.point.region.value, a.point.category.value,
             a.point.parcel_id, a.allocated_mw, a.point.lcoe_usd_per_mwh)
            for a in result.allocations]
    _write_csv(path, ("scenario", "region", "category", "parcel_id",
                      "allocated_mw", "lcoe_usd_per_mwh"), rows)


def result_summary(result: AllocationResult) -> dict:
    return {
        "scenario": result.scenario,
        "scheme": result.scheme.value,
        "mode": result.mode.value,
        "allocated_mw": result.total_allocated_mw,
        "shortfall_mw": result.shortfall_mw,
        "average_lcoe_usd_per_mwh": result.average_lcoe_usd_per_mwh,
        "total_investment_usd": result.total_investment_usd,
        "by_region": {
            region.value: {
                "allocated_mw": s.allocated_mw,
                "shortfall_mw": s.shortfall_mw,
                "average_lcoe_usd_per_mwh": s.average_lcoe_usd_per_mwh,
                "investment_usd": s.investment_usd,
            } for region, s in result.by_region.items()
        },
        "by_category_mw": {c.value: mw for c, mw in result.by_category_mw.items()},
    }


def write_metrics_json(path: Path, summaries):
    payload = {"scenarios": list(summaries)}
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n",
                    encoding="utf-8")


# ---------------------------------------------------------------------------
# Plot-ready series (figure analogues)

def emit_plot_data(curves, summaries, targets: TargetSet, out_dir: Path) -> list[Path]:
    """Write the four plot-ready CSVs: per-category curves, per-region
    curves, LCOE ranges up to each regional target, and scenario costs."""
    out_dir = Path(out_dir)
    paths = []

    # Per-category supply curves, merged EI-wide.
    rows = []
    for category in CATEGORY_ORDER:
        parts = [curves[(r, category)] for r in REGION_ORDER if (r, category) in curves]
        if not parts:
            continue
        merged = merge_curves(parts)
        for point, cum in zip(merged.points, merged.cum_capacity_mw):
            rows.append((category.value, point.parcel_id, point.capacity_mw,
                         point.lcoe_usd_per_mwh, cum))
    fig1 = out_dir / "fig1_category_curves.csv"
    _write_csv(fig1, ("category", "parcel_id", "capacity_mw",
                      "lcoe_usd_per_mwh", "cum_capacity_mw"), rows)
    paths.append(fig1)

    # Per-region, per-category curves.
    rows = []
    for (region, category), curve in _group_order(curves):
        for point, cum in zip(curve.points, curve.cum_capacity_mw):
            rows.append((region.value, category.value, point.parcel_id,
                         point.capacity_mw, point.lcoe_usd_per_mwh, cum))
    fig2 = out_dir / "fig2_region_curves.csv"
    _write_csv(fig2, CURVE_COLUMNS, rows)
    paths.append(fig2)

    # Min/max LCOE per (region, category) up to the regional target, and
    # each category's potential as a share of that target.
    rows = []
    for (region, category), curve in _group_order(curves):
        target = float(targets.target_for(region))
        q = min(curve.total_capacity_mw, target) if target > 0 else curve.total_capacity_mw
        min_lcoe = curve.points[0].lcoe_usd_per_mwh
        max_lcoe, _ = cost_at_capacity(curve, q)
        share = curve.total_capacity_mw / target if target > 0 else None
        rows.append((region.value, category.value, min_lcoe, max_lcoe,
                     curve.total_capacity_mw, target, share))
    fig3 = out_dir / "fig3_lcoe_ranges.csv"
    _write_csv(fig3, ("region", "category", "min_lcoe_usd_per_mwh",
                      "max_lcoe_usd_per_mwh", "potential_mw", "target_mw",
                      "potential_share_of_target"), rows)
    paths.append(fig3)

    # Scenario cost summary: one row per scenario per region plus an EI row.
    rows = []
    for summary in summaries:
        for region in REGION_ORDER:
            s = summary["by_region"][region.value]
            rows.append((summary["scenario"], region.value,
                         s["average_lcoe_usd_per_mwh"], s["investment_usd"],
                         s["allocated_mw"], s["shortfall_mw"]))
        rows.append((summary["scenario"], "EI",
                     summary["average_lcoe_usd_per_mwh"],
                     summary["total_investment_usd"],
                     summary["allocated_mw"], summary["shortfall_mw"]))
    fig4 = out_dir / "fig4_scenario_costs.csv"
    _write_csv(fig4, ("scenario", "scope", "average_lcoe_usd_per_mwh",
                      "total_investment_usd", "allocated_mw", "shortfall_mw"), rows)
    paths.append(fig4)
    return paths


# ---------------------------------------------------------------------------
# Full pipeline

def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def write_manifest(out_dir: Path, files) -> dict:
    manifest = {"files": {p.name: _sha256(p) for p in sorted(files)}}
    path = Path(out_dir) / "manifest.json"
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n",
                    encoding="utf-8")
    return manifest


def run_pipeline(cfg: RunConfig, out_dir, strict_override: bool | None = None) -> dict:
    """Run load -> screen -> simulate -> capacity -> cost -> curves ->
    allocate -> report, writing all exports plus a digest manifest.

    Any stage error removes partially written outputs and re-raises with a
    stage tag; no manifest is written on failure.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []

    def emit(path: Path):
        written.append(path)
        return path

    try:
        with _stage("load"):
            parcels = load_parcels(cfg.parcels_path)
            meteo = load_meteo(cfg.meteo_path)
            density = load_density(cfg.density_path,
                                   module_efficiency=cfg.module_efficiency,
                                   flat_fraction=cfg.flat_fraction or None)
            suitability = load_suitability(cfg.suitability_path)
            orientations = load_orientations(cfg.orientations_path)
            costs = load_costs(cfg.costs_path)
            targets = validate_targets(load_targets(cfg.targets_path))
            specs = []
            for spec_path in cfg.scenario_paths:
                spec = load_scenario(spec_path, default_targets=targets)
                if strict_override is not None:
                    spec = dataclasses.replace(spec, strict=strict_override)
                specs.append(spec)

        with _stage("simulate"):
            cell_cfs = simulate_cell_cfs(meteo, parcels, orientations, cfg.sim)
            write_cf_csv(emit(out_dir / "cf.csv"), cell_cfs)
            county_cfs = county_tech_cfs(parcels, cell_cfs)

        with _stage("capacity-cost"):
            points, exclusions = build_supply_points(
                parcels, cfg.screen, county_cfs, density, suitability,
                cfg.roof_locale, cfg.roof_census_division, costs)
            write_exclusions_csv(emit(out_dir / "excluded.csv"), exclusions)
            write_supply_points_csv(emit(out_dir / "supply_points.csv"), points)

        with _stage("curves"):
            curves = curves_by_group(points)
            write_curves_csv(emit(out_dir / "curves.csv"), curves)

        with _stage("allocate"):
            summaries = []
            for spec in specs:
                result = allocate(curves, spec)
                write_allocation_csv(
                    emit(out_dir / f"allocation_{spec.name}.csv"), result)
                summaries.append(result_summary(result))
            write_metrics_json(emit(out_dir / "metrics.json"), summaries)

        with _stage("report"):
            for name in ("fig1_category_curves.csv", "fig2_region_curves.csv",
                         "fig3_lcoe_ranges.csv", "fig4_scenario_costs.csv"):
                emit(out_dir / name)
            emit_plot_data(curves, summaries, targets, out_dir)

        outputs = list(written)
        emit(out_dir / "manifest.json")
        return write_manifest(out_dir, outputs)
    except BaseException:
        for path in written:
            path.unlink(missing_ok=True)
        raise
