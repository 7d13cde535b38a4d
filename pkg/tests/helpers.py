"""Shared test utilities: quick object factories, synthetic weather, and
independent oracles the implementation is checked against."""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from solarsite import LandCategory, MeteoSeries, Parcel, Region, SupplyPoint


def mk_parcel(**overrides) -> Parcel:
    base = dict(
        id="T001", county_fips="19001", region=Region.MISO,
        category=LandCategory.PRIME_AGRICULTURE, usable_area_m2=1e6,
        mean_slope_deg=2.0, protected=False, buffer_conflict=False,
        tx_multiplier=1.0, latitude=41.0, longitude=-93.0, meteo_cell="C1")
    base.update(overrides)
    return Parcel(**base)


def mk_point(parcel_id="S1", lcoe=50.0, capacity=10.0, region=Region.MISO,
             category=LandCategory.PRIME_AGRICULTURE, cf=0.25,
             capex=1000.0) -> SupplyPoint:
    return SupplyPoint(parcel_id=parcel_id, region=region, category=category,
                       capacity_mw=capacity, annual_cf=cf,
                       lcoe_usd_per_mwh=lcoe, adjusted_capex_usd_per_kw=capex)


def clear_sky_meteo(latitude_deg: float, kt: float = 0.75,
                    t_base: float = 12.0, cell: str = "CLEAR") -> MeteoSeries:
    """Deterministic clear-sky weather year built from plain spherical
    trigonometry (independent of the package's geometry code)."""
    hours = np.arange(8760, dtype=float) + 0.5
    day = np.floor(hours / 24.0) + 1.0
    solar_hour = hours % 24.0
    decl = np.radians(23.45 * np.sin(np.radians(360.0 * (284.0 + day) / 365.0)))
    omega = np.radians(15.0 * (solar_hour - 12.0))
    lat = math.radians(latitude_deg)
    cos_zen = np.clip(np.sin(lat) * np.sin(decl)
                      + np.cos(lat) * np.cos(decl) * np.cos(omega), -1.0, 1.0)
    up = np.maximum(cos_zen, 0.0)
    dni = np.where(up > 0, 1000.0 * kt * np.exp(-0.09 / np.maximum(up, 0.06)), 0.0)
    dhi = (50.0 + 150.0 * (1.0 - kt)) * np.sqrt(up)
    ghi = dni * up + dhi
    t_amb = t_base + 11.0 * np.sin(2 * math.pi * (day - 110) / 365)
    return MeteoSeries(cell=cell, ghi=ghi, dni=dni, dhi=dhi, t_amb=t_amb)


def dark_meteo(cell: str = "DARK") -> MeteoSeries:
    zero = np.zeros(8760)
    return MeteoSeries(cell=cell, ghi=zero, dni=zero, dhi=zero,
                       t_amb=np.full(8760, 10.0))


def enumeration_min_cost(caps: list[int], lcoes: list[float], target: int) -> float:
    """Minimum total cost (MW x $/MWh) of filling `target` whole MW from
    divisible points with integer capacities, by exhaustive recursion over
    per-point allocations. Independent of the greedy implementation."""
    n = len(caps)

    @lru_cache(maxsize=None)
    def best(i: int, remaining: int) -> float:
        if remaining == 0:
            return 0.0
        if i == n:
            return math.inf
        out = math.inf
        for take in range(min(caps[i], remaining) + 1):
            rest = best(i + 1, remaining - take)
            cost = rest + take * lcoes[i]
            if cost < out:
                out = cost
        return out

    return best(0, target)


def amortization_crf(rate: float, years: int, tol: float = 1e-12) -> float:
    """Annual payment that exactly retires a unit loan over `years`, found
    by bisection on the simulated balance (an amortization schedule)."""

    def final_balance(payment: float) -> float:
        balance = 1.0
        for _ in range(years):
            balance = balance * (1.0 + rate) - payment
        return balance

    lo, hi = 0.0, 1.0 + rate
    while hi - lo > tol:
        mid = (lo + hi) / 2.0
        if final_balance(mid) > 0:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2.0
