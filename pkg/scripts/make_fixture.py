#!/usr/bin/env python3
"""Generate the ei100 fixture: a ~100-parcel Eastern-Interconnection-like
dataset with synthetic hourly weather, calibrated so that

  * contaminated potential totals about 70 GW and stays below every
    regional target,
  * greenfield and rooftop potential exceed every regional target,
  * the cheapest rooftop LCOE clears the dearest greenfield LCOE needed
    to hit the target, in every region.

Deterministic: re-running reproduces byte-identical files.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from solarsite import (Region, flat_roof_packing, load_costs, load_density,
                       load_meteo, load_orientations, load_parcels,
                       load_suitability, load_targets, validate_targets)
from solarsite.curves import cost_at_capacity, merge_curves
from solarsite.domain import (CONTAMINATED_CATEGORIES, GREENFIELD_CATEGORIES,
                              ROOFTOP_CATEGORIES, ScreenCriteria)
from solarsite.pipeline import (build_supply_points, county_tech_cfs,
                                curves_by_group, simulate_cell_cfs)
from solarsite.solarsim import solar_position

OUT = Path(__file__).resolve().parents[1] / "data" / "ei100"

# cell -> (region token, latitude, annual-mean temperature C, clearness mean)
CELLS = {
    "NE1": ("ISO-NE", 44.2, 8.0, 0.60),
    "NY1": ("NYISO", 42.8, 9.0, 0.61),
    "MISO_N": ("MISO", 44.6, 7.0, 0.63),
    "MISO_S": ("MISO", 40.6, 11.0, 0.66),
    "PJM1": ("PJM", 39.6, 12.0, 0.65),
    "SPP1": ("SPP", 35.4, 15.0, 0.74),
    "SE1": ("Southeast", 32.6, 18.0, 0.72),
}

# county fips -> default meteo cell
COUNTIES = {
    "ISO-NE": [("25003", "NE1"), ("33007", "NE1")],
    "NYISO": [("36001", "NY1"), ("36065", "NY1")],
    "MISO": [("27017", "MISO_N"), ("19153", "MISO_S"), ("17113", "MISO_N")],
    "PJM": [("42041", "PJM1"), ("51015", "PJM1")],
    "SPP": [("40027", "SPP1"), ("20173", "SPP1")],
    "Southeast": [("01073", "SE1"), ("13121", "SE1")],
}

TARGETS_MW = {"ISO-NE": 12_000, "MISO": 92_000, "NYISO": 21_000,
              "PJM": 42_000, "SPP": 97_000, "Southeast": 189_000}

GREENFIELD_MW = {"ISO-NE": 20_000, "MISO": 150_000, "NYISO": 34_000,
                 "PJM": 70_000, "SPP": 160_000, "Southeast": 300_000}
GREEN_SPLIT = {
    "ISO-NE": {"prime_agriculture": 0.15, "forest": 0.45, "shrubland": 0.10,
               "range_grassland": 0.15, "barren_marginal": 0.15},
    "NYISO": {"prime_agriculture": 0.20, "forest": 0.40, "shrubland": 0.10,
              "range_grassland": 0.15, "barren_marginal": 0.15},
    "MISO": {"prime_agriculture": 0.45, "forest": 0.20, "shrubland": 0.05,
             "range_grassland": 0.20, "barren_marginal": 0.10},
    "PJM": {"prime_agriculture": 0.40, "forest": 0.30, "shrubland": 0.05,
            "range_grassland": 0.15, "barren_marginal": 0.10},
    "SPP": {"prime_agriculture": 0.45, "forest": 0.10, "shrubland": 0.10,
            "range_grassland": 0.25, "barren_marginal": 0.10},
    "Southeast": {"prime_agriculture": 0.35, "forest": 0.35, "shrubland": 0.10,
                  "range_grassland": 0.10, "barren_marginal": 0.10},
}

CONTAMINATED_MW = {"ISO-NE": 1_600, "MISO": 22_000, "NYISO": 5_000,
                   "PJM": 16_000, "SPP": 10_000, "Southeast": 15_400}
CONTAMINATED_SPLIT = {"rcra": 0.36, "superfund": 0.31, "brownfield": 0.16,
                      "abandoned_mine": 0.13, "landfill": 0.04}

ROOFTOP_MW = {"ISO-NE": 16_000, "MISO": 115_000, "NYISO": 28_000,
              "PJM": 55_000, "SPP": 120_000, "Southeast": 230_000}
ROOF_SPLIT = {"roof_small": 0.80, "roof_medium": 0.08, "roof_large": 0.12}

DENSITY = {"prime_agriculture": 45.0, "forest": 40.0, "shrubland": 44.0,
           "range_grassland": 46.0, "barren_marginal": 42.0,
           "brownfield": 36.0, "superfund": 34.0, "landfill": 30.0,
           "abandoned_mine": 38.0, "rcra": 35.0}

SUITABILITY = {"small": 0.25, "medium": 0.45, "large": 0.60}
FLAT_FRACTION = {"small": 0.10, "medium": 0.50, "large": 0.80}
MODULE_EFFICIENCY = 0.15

COSTS = {
    "capex_usd_per_kw": {"utility": 1000.0, "commercial_roof": 1750.0,
                         "residential_roof": 2550.0},
    "fom_usd_per_kw_yr": {"utility": 15.0, "commercial_roof": 18.0,
                          "residential_roof": 26.0},
    "brownfield_premium": 1.30,
    "bin_multiplier": {"5-20 MW": 1.15, "20-50 MW": 1.08,
                       "50-100 MW": 1.03, "100-700 MW": 1.00},
    "national_avg_lcot_usd_per_mwh": 4.0,
    "discount_rate": 0.05,
    "lifetime_years": 30,
}

ORIENTATIONS = [
    # size_class, tilt, azimuth, weight, flat
    ("small", 25, 180, 0.35, 0), ("small", 25, 135, 0.20, 0),
    ("small", 25, 225, 0.20, 0), ("small", 25, 90, 0.10, 0),
    ("small", 25, 270, 0.10, 0), ("small", 0, 180, 0.05, 1),
    ("medium", 0, 180, 0.50, 1), ("medium", 20, 180, 0.25, 0),
    ("medium", 20, 135, 0.10, 0), ("medium", 20, 225, 0.10, 0),
    ("medium", 20, 90, 0.05, 0),
    ("large", 0, 180, 0.75, 1), ("large", 15, 180, 0.15, 0),
    ("large", 15, 135, 0.05, 0), ("large", 15, 225, 0.05, 0),
]

SCENARIOS = {
    "min_lcoe_ei": {"scheme": "min_lcoe", "mode": "ei_wide"},
    "min_lcoe_regional": {"scheme": "min_lcoe", "mode": "regional"},
    "cont_green_ei": {"scheme": "contaminated_first", "mode": "ei_wide",
                      "fallback": "greenfield"},
    "cont_green_regional": {"scheme": "contaminated_first", "mode": "regional",
                            "fallback": "greenfield"},
    "cont_roof_ei": {"scheme": "contaminated_first", "mode": "ei_wide",
                     "fallback": "rooftop"},
    "cont_roof_regional": {"scheme": "contaminated_first", "mode": "regional",
                           "fallback": "rooftop"},
    "greenfield_ei": {"scheme": "greenfield_first", "mode": "ei_wide"},
    "greenfield_regional": {"scheme": "greenfield_first", "mode": "regional"},
    "rooftop_ei": {"scheme": "rooftop_first", "mode": "ei_wide"},
    "rooftop_regional": {"scheme": "rooftop_first", "mode": "regional"},
    "rooftop_small_first_regional": {
        "scheme": "rooftop_first", "mode": "regional",
        "sub_order": ["roof_small", "roof_medium", "roof_large"]},
}
# Shipped for the infeasibility demo; not part of the default run list.
STRICT_SCENARIO = {"scheme": "contaminated_first", "mode": "ei_wide",
                   "fallback": "none", "strict": True}
RUN_SCENARIOS = [k for k in SCENARIOS if k != "rooftop_small_first_regional"]


def synth_weather(cell: str, seed: int) -> list[str]:
    """Synthesize one 8760-hour weather year as CSV rows."""
    _, lat, t_base, kt_mean = CELLS[cell]
    rng = np.random.default_rng(seed)
    kt_day = np.clip(kt_mean + 0.14 * rng.standard_normal(365), 0.30, 0.98)
    t_noise = 1.5 * rng.standard_normal(365)
    hours = np.arange(8760, dtype=float) + 0.5
    sp = solar_position(lat, hours)
    cos_zen = np.maximum(np.cos(np.radians(sp.zenith_deg)), 0.0)
    day = (np.arange(8760) // 24)
    kt = kt_day[day]
    dni = np.where(cos_zen > 0,
                   1000.0 * kt * np.exp(-0.09 / np.maximum(cos_zen, 0.06)),
                   0.0)
    dhi = (50.0 + 150.0 * (1.0 - kt)) * np.sqrt(cos_zen)
    ghi = dni * cos_zen + dhi
    hod = np.arange(8760) % 24
    t_amb = (t_base + 11.0 * np.sin(2 * math.pi * (day - 110) / 365)
             + 5.0 * np.sin(2 * math.pi * (hod - 9) / 24) + t_noise[day])
    rows = []
    for h in range(8760):
        rows.append(f"{cell},{h},{ghi[h]:.1f},{dni[h]:.1f},{dhi[h]:.1f},{t_amb[h]:.1f}")
    return rows


def roof_area_for(mw: float, size_class: str, latitude: float) -> float:
    """Invert the rooftop capacity chain to a raw roof area in m2."""
    suit = SUITABILITY[size_class]
    f = FLAT_FRACTION[size_class]
    mix = f * flat_roof_packing(latitude, latitude) + (1.0 - f) * 0.5
    return mw * 1000.0 / (MODULE_EFFICIENCY * suit * mix)


def build_parcels() -> list[dict]:
    parcels = []
    counter = {"n": 0}

    def add(region, county, cell, category, area_m2, *, slope=3.0, protected=0,
            buffer=0, tx=1.0, lat_off=0.0):
        counter["n"] += 1
        lat = CELLS[cell][1] + lat_off
        lon = -70.0 - 4.0 * list(Region).index(Region(region)) - 0.01 * counter["n"]
        parcels.append({
            "id": f"P{counter['n']:03d}", "county_fips": county, "region": region,
            "category": category, "usable_area_m2": round(area_m2, 1),
            "mean_slope_deg": slope, "protected": protected,
            "buffer_conflict": buffer, "tx_multiplier": tx,
            "latitude": round(lat, 4), "longitude": round(lon, 4),
            "meteo_cell": cell,
        })

    for region in TARGETS_MW:
        counties = COUNTIES[region]

        def county_for(i):
            return counties[i % len(counties)]

        # Greenfield: one parcel per category; prime agriculture gets two.
        for i, (category, share) in enumerate(GREEN_SPLIT[region].items()):
            mw = GREENFIELD_MW[region] * share
            density = DENSITY[category]
            tx = 1.0 + 0.1 * (i % 4)
            if category == "prime_agriculture":
                for j, part in enumerate((0.6, 0.4)):
                    county, cell = county_for(j)
                    add(region, county, cell, category,
                        mw * part / density * 1e6, slope=2.0 + j,
                        tx=1.0 + 0.15 * j, lat_off=0.05 * (j - 0.5))
            else:
                county, cell = county_for(i)
                add(region, county, cell, category, mw / density * 1e6,
                    slope=2.0 + 0.8 * i, tx=tx, lat_off=0.02 * (i - 2))

        # Contaminated: one parcel per category, costlier interconnection.
        for i, (category, share) in enumerate(CONTAMINATED_SPLIT.items()):
            mw = CONTAMINATED_MW[region] * share
            county, cell = county_for(i + 1)
            add(region, county, cell, category, mw / DENSITY[category] * 1e6,
                slope=1.0 + 0.5 * i, tx=1.2 + 0.2 * (i % 3),
                lat_off=0.01 * (i - 2))

        # Rooftops: one aggregate parcel per size class.
        for i, (category, share) in enumerate(ROOF_SPLIT.items()):
            mw = ROOFTOP_MW[region] * share
            county, cell = county_for(i)
            size_class = category.removeprefix("roof_")
            add(region, county, cell, category,
                roof_area_for(mw, size_class, CELLS[cell][1]),
                slope=0.0, tx=1.0, lat_off=0.0)

    # Texture: parcels the screening and scale rules exclude.
    add("PJM", "42041", "PJM1", "forest", 8.0e8, slope=12.0)
    add("NYISO", "36065", "NY1", "shrubland", 3.0e8, protected=1)
    add("SPP", "20173", "SPP1", "range_grassland", 5.0e8, buffer=1)
    add("MISO", "19153", "MISO_S", "landfill", 0.3 / DENSITY["landfill"] * 1e6,
        tx=1.4)
    # A county served by two meteo cells.
    add("MISO", "17113", "MISO_S", "range_grassland",
        1500.0 / DENSITY["range_grassland"] * 1e6, slope=2.5, tx=1.1,
        lat_off=0.0)
    return parcels


def write_fixture():
    OUT.mkdir(parents=True, exist_ok=True)
    (OUT / "scenarios").mkdir(exist_ok=True)

    parcels = build_parcels()
    header = ("id,county_fips,region,category,usable_area_m2,mean_slope_deg,"
              "protected,buffer_conflict,tx_multiplier,latitude,longitude,meteo_cell")
    lines = [header]
    for p in parcels:
        lines.append(",".join(str(p[k]) for k in header.split(",")))
    (OUT / "parcels.csv").write_text("\n".join(lines) + "\n", encoding="utf-8")

    rows = ["meteo_cell,hour_index,ghi_wm2,dni_wm2,dhi_wm2,tamb_c"]
    for seed, cell in enumerate(CELLS, start=11):
        rows.extend(synth_weather(cell, seed))
    (OUT / "meteo.csv").write_text("\n".join(rows) + "\n", encoding="utf-8")

    targets = {"total_target_mw": sum(TARGETS_MW.values()),
               "region_targets_mw": TARGETS_MW}
    (OUT / "targets.json").write_text(json.dumps(targets, indent=2) + "\n",
                                      encoding="utf-8")
    (OUT / "costs.json").write_text(json.dumps(COSTS, indent=2) + "\n",
                                    encoding="utf-8")

    lines = ["category,mw_per_km2"]
    lines += [f"{c},{d}" for c, d in DENSITY.items()]
    (OUT / "density.csv").write_text("\n".join(lines) + "\n", encoding="utf-8")

    lines = ["locale,census_division,size_class,fraction"]
    lines += [f"suburban,fixture_division,{c},{f}" for c, f in SUITABILITY.items()]
    (OUT / "suitability.csv").write_text("\n".join(lines) + "\n", encoding="utf-8")

    lines = ["size_class,tilt_deg,azimuth_deg,weight,flat"]
    lines += [f"{c},{t},{a},{w},{fl}" for c, t, a, w, fl in ORIENTATIONS]
    (OUT / "orientations.csv").write_text("\n".join(lines) + "\n", encoding="utf-8")

    for name, spec in SCENARIOS.items():
        payload = {"name": name, **spec}
        (OUT / "scenarios" / f"{name}.json").write_text(
            json.dumps(payload, indent=2) + "\n", encoding="utf-8")
    payload = {"name": "contaminated_only_strict", **STRICT_SCENARIO}
    (OUT / "scenarios" / "contaminated_only_strict.json").write_text(
        json.dumps(payload, indent=2) + "\n", encoding="utf-8")

    config = {
        "paths": {
            "parcels": "parcels.csv", "meteo": "meteo.csv",
            "density": "density.csv", "suitability": "suitability.csv",
            "orientations": "orientations.csv", "costs": "costs.json",
            "targets": "targets.json",
            "scenarios": [f"scenarios/{n}.json" for n in RUN_SCENARIOS],
        },
        "sim": {"noct_c": 45.0, "temp_coeff_per_c": -0.0037,
                "system_loss": 0.14, "albedo": 0.2, "rotation_limit_deg": 60.0},
        "screen": {"max_slope_deg": 10.0, "exclude_protected": True,
                   "exclude_buffer_conflicts": True, "min_project_capacity_mw": 1.0},
        "rooftop": {"locale": "suburban", "census_division": "fixture_division",
                    "flat_fraction": FLAT_FRACTION,
                    "module_efficiency": MODULE_EFFICIENCY},
        "random_free": True,
    }
    (OUT / "config.json").write_text(json.dumps(config, indent=2) + "\n",
                                     encoding="utf-8")
    print(f"wrote fixture with {len(parcels)} parcels to {OUT}")


def check_calibration():
    """Rebuild curves from the written fixture and verify its properties."""
    from solarsite.domain import RoofSizeClass
    from solarsite.solarsim import SimConfig

    parcels = load_parcels(OUT / "parcels.csv")
    meteo = load_meteo(OUT / "meteo.csv")
    orientations = load_orientations(OUT / "orientations.csv")
    density = load_density(OUT / "density.csv",
                           module_efficiency=MODULE_EFFICIENCY,
                           flat_fraction={RoofSizeClass(k): v
                                          for k, v in FLAT_FRACTION.items()})
    suitability = load_suitability(OUT / "suitability.csv")
    costs = load_costs(OUT / "costs.json")
    targets = validate_targets(load_targets(OUT / "targets.json"))

    cell_cfs = simulate_cell_cfs(meteo, parcels, orientations, SimConfig())
    for cell in sorted(cell_cfs):
        print(f"  {cell}: " + ", ".join(f"{k}={v:.3f}" for k, v in cell_cfs[cell].items()))
    county_cfs = county_tech_cfs(parcels, cell_cfs)
    points, exclusions = build_supply_points(
        parcels, ScreenCriteria(), county_cfs, density, suitability,
        "suburban", "fixture_division", costs)
    print(f"  {len(points)} supply points, {len(exclusions)} exclusions: {exclusions}")
    curves = curves_by_group(points)

    ok = True
    total_cont = 0.0
    for region in Region:
        target = targets.target_for(region)
        green = merge_curves([curves[(region, c)] for c in GREENFIELD_CATEGORIES
                              if (region, c) in curves])
        roof = merge_curves([curves[(region, c)] for c in ROOFTOP_CATEGORIES
                             if (region, c) in curves])
        cont = merge_curves([curves[(region, c)] for c in CONTAMINATED_CATEGORIES
                             if (region, c) in curves])
        total_cont += cont.total_capacity_mw
        green_max_at_target, _ = cost_at_capacity(green, min(target, green.total_capacity_mw))
        roof_min = roof.points[0].lcoe_usd_per_mwh
        cont_range = (cont.points[0].lcoe_usd_per_mwh,
                      cont.points[-1].lcoe_usd_per_mwh)
        print(f"  {region.value}: target {target / 1000:.0f} GW | "
              f"green {green.total_capacity_mw / 1000:.0f} GW "
              f"[{green.points[0].lcoe_usd_per_mwh:.1f}..{green_max_at_target:.1f} at target] | "
              f"cont {cont.total_capacity_mw / 1000:.1f} GW "
              f"[{cont_range[0]:.1f}..{cont_range[1]:.1f}] | "
              f"roof {roof.total_capacity_mw / 1000:.0f} GW min {roof_min:.1f}")
        if green.total_capacity_mw < target:
            print(f"    !! greenfield below target in {region.value}")
            ok = False
        if roof.total_capacity_mw < target:
            print(f"    !! rooftop below target in {region.value}")
            ok = False
        if cont.total_capacity_mw > target:
            print(f"    !! contaminated above target in {region.value}")
            ok = False
        if roof_min < green_max_at_target:
            print(f"    !! rooftop min LCOE {roof_min:.1f} below greenfield "
                  f"max-at-target {green_max_at_target:.1f} in {region.value}")
            ok = False
    print(f"  contaminated total: {total_cont / 1000:.1f} GW")
    if not 60_000 <= total_cont <= 80_000:
        print("    !! contaminated total not near 70 GW")
        ok = False
    print("calibration OK" if ok else "calibration FAILED")
    return ok


if __name__ == "__main__":
    write_fixture()
    raise SystemExit(0 if check_calibration() else 1)
