"""Levelized cost engine: capital recovery, land-type and scale CAPEX
adjustments, transmission adders, and per-site LCOE supply points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .capacity import CapacityBin, capacity_bin
from .domain import (CONTAMINATED_CATEGORIES, GROUND_CATEGORIES, LandCategory,
                     Parcel, Region)
from .errors import ConfigError, DomainError, ValidationError

HOURS_PER_YEAR = 8760.0

TECH_UTILITY = "utility"
TECH_COMMERCIAL_ROOF = "commercial_roof"
TECH_RESIDENTIAL_ROOF = "residential_roof"
TECHNOLOGIES = (TECH_UTILITY, TECH_COMMERCIAL_ROOF, TECH_RESIDENTIAL_ROOF)


def technology_for(category: LandCategory) -> str:
    """Cost technology for a land category: ground categories price as
    utility PV, small roofs as residential, medium and large as commercial.
    """
    if category in GROUND_CATEGORIES:
        return TECH_UTILITY
    if category is LandCategory.ROOF_SMALL:
        return TECH_RESIDENTIAL_ROOF
    return TECH_COMMERCIAL_ROOF


@dataclass(frozen=True)
class FinanceParams:
    discount_rate: float = 0.05
    lifetime_years: float = 30.0

    def __post_init__(self):
        if self.discount_rate < 0:
            raise ValidationError("discount_rate must be >= 0")
        if self.lifetime_years < 1:
            raise ValidationError("lifetime_years must be >= 1")


@dataclass(frozen=True)
class CostParams:
    """All financial parameters of the cost engine."""

    capex_usd_per_kw: dict[str, float]
    fom_usd_per_kw_yr: dict[str, float]
    brownfield_premium: float = 1.30
    bin_multipliers: dict[str, float] = field(default_factory=dict)
    national_avg_lcot_usd_per_mwh: float = 0.0
    finance: FinanceParams = field(default_factory=FinanceParams)

    def __post_init__(self):
        for tech in TECHNOLOGIES:
            if tech not in self.capex_usd_per_kw:
                raise ConfigError(f"missing capex_usd_per_kw entry for {tech!r}")
            if tech not in self.fom_usd_per_kw_yr:
                raise ConfigError(f"missing fom_usd_per_kw_yr entry for {tech!r}")
        if any(v < 0 for v in self.capex_usd_per_kw.values()):
            raise ValidationError("capex values must be >= 0")
        if any(v < 0 for v in self.fom_usd_per_kw_yr.values()):
            raise ValidationError("fom values must be >= 0")
        if self.brownfield_premium < 1.0:
            raise ValidationError("brownfield_premium must be >= 1")
        if any(not v > 0 for v in self.bin_multipliers.values()):
            raise ValidationError("bin multipliers must be > 0")
        if self.national_avg_lcot_usd_per_mwh < 0:
            raise ValidationError("national_avg_lcot_usd_per_mwh must be >= 0")


def crf(rate: float, lifetime_years: float) -> float:
    """Capital recovery factor r (1+r)^n / ((1+r)^n - 1); 1/n at r = 0.

    Evaluated via expm1/log1p so that (1+r)^n - 1 stays accurate for
    rates near zero and crf converges to 1/n continuously.
    """
    if rate < 0:
        raise DomainError("rate must be >= 0")
    if lifetime_years < 1:
        raise DomainError("lifetime must be >= 1 year")
    exponent = lifetime_years * math.log1p(rate)
    denominator = math.expm1(exponent)
    if denominator == 0.0:
        return 1.0 / lifetime_years
    return rate * math.exp(exponent) / denominator


def adjusted_capex(base_usd_per_kw: float, category: LandCategory,
                   bin_: CapacityBin | None, params: CostParams) -> float:
    """Scale- and land-type-adjusted CAPEX.

    Ground projects take the capacity-bin multiplier times the brownfield
    premium on contaminated categories; rooftop projects pass through the
    technology base cost unadjusted.
    """
    if category not in GROUND_CATEGORIES:
        return base_usd_per_kw
    if bin_ is None:
        raise DomainError(f"{category.value} project needs a capacity bin")
    if bin_.label not in params.bin_multipliers:
        raise ConfigError(f"no bin multiplier configured for {bin_.label!r}")
    capex = base_usd_per_kw * params.bin_multipliers[bin_.label]
    if category in CONTAMINATED_CATEGORIES:
        capex *= params.brownfield_premium
    return capex


def transmission_adder(tx_multiplier: float, category: LandCategory,
                       params: CostParams) -> float:
    """Interconnection adder in $/MWh: the spatial multiplier times the
    national average levelized cost of transmission. Rooftop systems
    interconnect behind the meter and take no adder."""
    if not tx_multiplier > 0:
        raise DomainError("tx_multiplier must be > 0")
    if category not in GROUND_CATEGORIES:
        return 0.0
    return tx_multiplier * params.national_avg_lcot_usd_per_mwh


def lcoe(capex_usd_per_kw: float, crf_value: float, fom_usd_per_kw_yr: float,
         annual_cf: float, adder_usd_per_mwh: float = 0.0) -> float:
    """Levelized cost of electricity in $/MWh.

    Annual energy per kW of nameplate is annual_cf x 8.760 MWh, so
    LCOE = (capex x crf + fom) / (annual_cf x 8.760) + adder.
    """
    if annual_cf <= 0:
        raise DomainError("annual_cf must be > 0 (site generates no energy)")
    annual_mwh_per_kw = annual_cf * HOURS_PER_YEAR / 1000.0
    return (capex_usd_per_kw * crf_value + fom_usd_per_kw_yr) / annual_mwh_per_kw \
        + adder_usd_per_mwh


@dataclass(frozen=True)
class SupplyPoint:
    """One deployable capacity point on a supply curve."""

    parcel_id: str
    region: Region
    category: LandCategory
    capacity_mw: float
    annual_cf: float
    lcoe_usd_per_mwh: float
    adjusted_capex_usd_per_kw: float


def site_lcoe(parcel: Parcel, capacity_mw: float, annual_cf: float,
              params: CostParams, min_capacity_mw: float = 1.0) -> SupplyPoint:
    """Price one screened site: bin ground capacity, adjust CAPEX, apply
    the transmission adder, and emit a SupplyPoint."""
    tech = technology_for(parcel.category)
    base_capex = params.capex_usd_per_kw[tech]
    fom = params.fom_usd_per_kw_yr[tech]
    if parcel.category in GROUND_CATEGORIES:
        bin_ = capacity_bin(capacity_mw, min_capacity_mw)
        if bin_ is None:
            raise DomainError(
                f"parcel {parcel.id}: {capacity_mw} MW is below the "
                f"{min_capacity_mw} MW minimum project scale")
    else:
        bin_ = None
        if capacity_mw <= 0:
            raise DomainError(f"parcel {parcel.id}: capacity must be > 0")
    capex = adjusted_capex(base_capex, parcel.category, bin_, params)
    adder = transmission_adder(parcel.tx_multiplier, parcel.category, params)
    crf_value = crf(params.finance.discount_rate, params.finance.lifetime_years)
    value = lcoe(capex, crf_value, fom, annual_cf, adder)
    return SupplyPoint(
        parcel_id=parcel.id,
        region=parcel.region,
        category=parcel.category,
        capacity_mw=capacity_mw,
        annual_cf=annual_cf,
        lcoe_usd_per_mwh=value,
        adjusted_capex_usd_per_kw=capex,
    )
