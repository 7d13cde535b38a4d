from pathlib import Path
from types import SimpleNamespace

import pytest

from solarsite import (ScreenCriteria, load_costs, load_density, load_meteo,
                       load_orientations, load_parcels, load_suitability,
                       load_targets, validate_targets)
from solarsite.pipeline import (build_supply_points, county_tech_cfs,
                                curves_by_group, load_run_config,
                                simulate_cell_cfs)

FIXTURE_DIR = Path(__file__).resolve().parents[1] / "data" / "ei100"


@pytest.fixture(scope="session")
def fixture_dir() -> Path:
    return FIXTURE_DIR


@pytest.fixture(scope="session")
def ei100(fixture_dir):
    """The shipped fixture, loaded and carried through screening,
    simulation, capacity conversion, and curve construction once."""
    cfg = load_run_config(fixture_dir / "config.json")
    parcels = load_parcels(cfg.parcels_path)
    meteo = load_meteo(cfg.meteo_path)
    orientations = load_orientations(cfg.orientations_path)
    density = load_density(cfg.density_path,
                           module_efficiency=cfg.module_efficiency,
                           flat_fraction=cfg.flat_fraction or None)
    suitability = load_suitability(cfg.suitability_path)
    costs = load_costs(cfg.costs_path)
    targets = validate_targets(load_targets(cfg.targets_path))
    cell_cfs = simulate_cell_cfs(meteo, parcels, orientations, cfg.sim)
    county_cfs = county_tech_cfs(parcels, cell_cfs)
    points, exclusions = build_supply_points(
        parcels, cfg.screen, county_cfs, density, suitability,
        cfg.roof_locale, cfg.roof_census_division, costs)
    return SimpleNamespace(
        cfg=cfg, parcels=parcels, meteo=meteo, orientations=orientations,
        density=density, suitability=suitability, costs=costs, targets=targets,
        cell_cfs=cell_cfs, county_cfs=county_cfs, points=points,
        exclusions=exclusions, curves=curves_by_group(points),
        screen=ScreenCriteria())
