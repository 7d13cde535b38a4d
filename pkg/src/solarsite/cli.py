"""Command-line interface.

Verbs: `run` (full pipeline), plus `simulate-cf`, `build-curves`,
`allocate`, and `report` for re-running individual stages on intermediate
files. Exit codes: 0 success, 2 config error, 3 validation error,
4 infeasibility.
"""

from __future__ import annotations

import dataclasses
import functools
import json
import sys
from pathlib import Path

import click

from . import pipeline
from .errors import ConfigError, SolarSiteError
from .ingest import (load_costs, load_density, load_meteo, load_orientations,
                     load_parcels, load_scenario, load_suitability,
                     load_targets)
from .domain import validate_targets
from .scenario import allocate as allocate_curves


def _handle_errors(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except SolarSiteError as err:
            stage = f" [stage: {err.stage}]" if err.stage else ""
            click.echo(f"error{stage}: {err}", err=True)
            sys.exit(err.exit_code)
    return wrapper


@click.group()
def main():
    """Solar PV supply curves and land-use prioritization scenarios."""


@main.command("run")
@click.option("--config", "config_path", required=True,
              type=click.Path(path_type=Path), help="Run configuration file.")
@click.option("--out", "out_dir", required=True, type=click.Path(path_type=Path),
              help="Output directory.")
@click.option("--strict", is_flag=True, default=False,
              help="Treat every scenario as strict (fail on tier exhaustion).")
@_handle_errors
def run_cmd(config_path: Path, out_dir: Path, strict: bool):
    """Run the full pipeline and write all exports plus a manifest."""
    cfg = pipeline.load_run_config(config_path)
    manifest = pipeline.run_pipeline(cfg, out_dir,
                                     strict_override=True if strict else None)
    click.echo(f"wrote {len(manifest['files'])} files to {out_dir}")


@main.command("simulate-cf")
@click.option("--config", "config_path", required=True, type=click.Path(path_type=Path))
@click.option("--out", "out_dir", required=True, type=click.Path(path_type=Path))
@_handle_errors
def simulate_cf_cmd(config_path: Path, out_dir: Path):
    """Simulate annual capacity factors per meteo cell (writes cf.csv)."""
    cfg = pipeline.load_run_config(config_path)
    parcels = load_parcels(cfg.parcels_path)
    meteo = load_meteo(cfg.meteo_path)
    orientations = load_orientations(cfg.orientations_path)
    cell_cfs = pipeline.simulate_cell_cfs(meteo, parcels, orientations, cfg.sim)
    out_dir.mkdir(parents=True, exist_ok=True)
    pipeline.write_cf_csv(out_dir / "cf.csv", cell_cfs)
    click.echo(f"wrote {out_dir / 'cf.csv'} ({len(cell_cfs)} cells)")


@main.command("build-curves")
@click.option("--config", "config_path", required=True, type=click.Path(path_type=Path))
@click.option("--cf", "cf_path", type=click.Path(path_type=Path), default=None,
              help="Existing cf.csv; simulated inline when omitted.")
@click.option("--out", "out_dir", required=True, type=click.Path(path_type=Path))
@_handle_errors
def build_curves_cmd(config_path: Path, cf_path: Path | None, out_dir: Path):
    """Screen, size, and price parcels; write supply points and curves."""
    cfg = pipeline.load_run_config(config_path)
    parcels = load_parcels(cfg.parcels_path)
    if cf_path is None:
        meteo = load_meteo(cfg.meteo_path)
        orientations = load_orientations(cfg.orientations_path)
        cell_cfs = pipeline.simulate_cell_cfs(meteo, parcels, orientations, cfg.sim)
    else:
        cell_cfs = pipeline.read_cf_csv(cf_path)
    county_cfs = pipeline.county_tech_cfs(parcels, cell_cfs)
    density = load_density(cfg.density_path,
                           module_efficiency=cfg.module_efficiency,
                           flat_fraction=cfg.flat_fraction or None)
    suitability = load_suitability(cfg.suitability_path)
    costs = load_costs(cfg.costs_path)
    points, exclusions = pipeline.build_supply_points(
        parcels, cfg.screen, county_cfs, density, suitability,
        cfg.roof_locale, cfg.roof_census_division, costs)
    curves = pipeline.curves_by_group(points)
    out_dir.mkdir(parents=True, exist_ok=True)
    pipeline.write_exclusions_csv(out_dir / "excluded.csv", exclusions)
    pipeline.write_supply_points_csv(out_dir / "supply_points.csv", points)
    pipeline.write_curves_csv(out_dir / "curves.csv", curves)
    click.echo(f"wrote {len(points)} supply points in {len(curves)} curves to {out_dir}")


def _load_curves_dir(curves_dir: Path):
    points_path = curves_dir / "supply_points.csv"
    if not points_path.is_file():
        raise ConfigError(f"no supply_points.csv in {curves_dir}")
    points = pipeline.read_supply_points_csv(points_path)
    return pipeline.curves_by_group(points)


@main.command("allocate")
@click.option("--curves", "curves_dir", required=True, type=click.Path(path_type=Path),
              help="Directory holding supply_points.csv from build-curves.")
@click.option("--scenario", "scenario_path", required=True, type=click.Path(path_type=Path))
@click.option("--targets", "targets_path", type=click.Path(path_type=Path), default=None,
              help="Targets file overriding the scenario's own reference.")
@click.option("--strict", is_flag=True, default=False)
@click.option("--out", "out_dir", required=True, type=click.Path(path_type=Path))
@_handle_errors
def allocate_cmd(curves_dir: Path, scenario_path: Path, targets_path: Path | None,
                 strict: bool, out_dir: Path):
    """Allocate capacity along existing curves for one scenario."""
    curves = _load_curves_dir(curves_dir)
    default_targets = None
    if targets_path is not None:
        default_targets = validate_targets(load_targets(targets_path))
    spec = load_scenario(scenario_path, default_targets=default_targets)
    if targets_path is not None:
        spec = dataclasses.replace(spec, targets=default_targets)
    if strict:
        spec = dataclasses.replace(spec, strict=True)
    result = allocate_curves(curves, spec)
    out_dir.mkdir(parents=True, exist_ok=True)
    pipeline.write_allocation_csv(out_dir / f"allocation_{spec.name}.csv", result)
    pipeline.write_metrics_json(out_dir / f"metrics_{spec.name}.json",
                                [pipeline.result_summary(result)])
    avg = result.average_lcoe_usd_per_mwh
    click.echo(f"{spec.name}: allocated {result.total_allocated_mw:.1f} MW, "
               f"average LCOE {'n/a' if avg is None else f'{avg:.2f} $/MWh'}, "
               f"shortfall {result.shortfall_mw:.1f} MW")


@main.command("report")
@click.option("--curves", "curves_dir", required=True, type=click.Path(path_type=Path))
@click.option("--targets", "targets_path", required=True, type=click.Path(path_type=Path))
@click.option("--allocations", "alloc_dir", type=click.Path(path_type=Path), default=None,
              help="Directory with metrics*.json files from allocate runs.")
@click.option("--out", "out_dir", required=True, type=click.Path(path_type=Path))
@_handle_errors
def report_cmd(curves_dir: Path, targets_path: Path, alloc_dir: Path | None,
               out_dir: Path):
    """Write the four plot-ready CSV series from existing intermediates."""
    curves = _load_curves_dir(curves_dir)
    targets = validate_targets(load_targets(targets_path))
    summaries = []
    if alloc_dir is not None:
        for path in sorted(Path(alloc_dir).glob("metrics*.json")):
            payload = json.loads(path.read_text(encoding="utf-8"))
            summaries.extend(payload.get("scenarios", []))
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = pipeline.emit_plot_data(curves, summaries, targets, out_dir)
    click.echo(f"wrote {len(paths)} plot files to {out_dir}")


if __name__ == "__main__":
    main()
