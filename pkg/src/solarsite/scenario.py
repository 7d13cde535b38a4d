"""Scenario engine: allocate capacity along supply curves to meet
deployment targets under land-type prioritization schemes, and summarize
the resulting costs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .curves import SupplyCurve, merge_curves
from .costs import SupplyPoint
from .domain import (CATEGORY_ORDER, CONTAMINATED_CATEGORIES,
                     GREENFIELD_CATEGORIES, LandCategory, REGION_ORDER,
                     Region, ROOFTOP_CATEGORIES, TargetSet, validate_targets)
from .errors import InfeasibleError, ValidationError


class Scheme(str, Enum):
    MIN_LCOE = "min_lcoe"
    CONTAMINATED_FIRST = "contaminated_first"
    GREENFIELD_FIRST = "greenfield_first"
    ROOFTOP_FIRST = "rooftop_first"


class Mode(str, Enum):
    EI_WIDE = "ei_wide"
    REGIONAL = "regional"


# Fallback tokens for contaminated_first: which pool fills after the
# contaminated tier is exhausted. "none" truncates the tier list so a
# strict run fails instead of cascading.
FALLBACK_GREENFIELD = "greenfield"
FALLBACK_ROOFTOP = "rooftop"
FALLBACK_NONE = "none"


def _ordered(categories) -> tuple[LandCategory, ...]:
    return tuple(c for c in CATEGORY_ORDER if c in categories)


def scheme_order(scheme: Scheme, fallback: str | None = None):
    """Category tiers walked in priority order for a prioritization scheme.

    min_lcoe uses a single tier of all categories. contaminated_first puts
    the five disturbed-land categories first, then the fallback pool
    (greenfield by default), then the remainder. greenfield_first and
    rooftop_first fall back to all remaining categories in one tier.
    """
    scheme = Scheme(scheme)
    if scheme is Scheme.MIN_LCOE:
        return (_ordered(CATEGORY_ORDER),)
    if scheme is Scheme.CONTAMINATED_FIRST:
        first = _ordered(CONTAMINATED_CATEGORIES)
        if fallback in (None, FALLBACK_GREENFIELD):
            return (first, _ordered(GREENFIELD_CATEGORIES), _ordered(ROOFTOP_CATEGORIES))
        if fallback == FALLBACK_ROOFTOP:
            return (first, _ordered(ROOFTOP_CATEGORIES), _ordered(GREENFIELD_CATEGORIES))
        if fallback == FALLBACK_NONE:
            return (first,)
        raise ValidationError(f"unknown fallback {fallback!r}")
    if scheme is Scheme.GREENFIELD_FIRST:
        first = _ordered(GREENFIELD_CATEGORIES)
        rest = _ordered(set(CATEGORY_ORDER) - GREENFIELD_CATEGORIES)
        return (first, rest)
    first = _ordered(ROOFTOP_CATEGORIES)
    rest = _ordered(set(CATEGORY_ORDER) - ROOFTOP_CATEGORIES)
    return (first, rest)


@dataclass(frozen=True)
class ScenarioSpec:
    """One prioritization scenario to evaluate against a TargetSet."""

    name: str
    scheme: Scheme
    mode: Mode
    targets: TargetSet
    strict: bool = False
    fallback: str | None = None
    sub_order: tuple[LandCategory, ...] | None = None

    def tiers(self):
        tiers = scheme_order(self.scheme, self.fallback)
        if self.sub_order is None:
            return tiers
        # A sub-order permutes the priority tier into singleton tiers,
        # forcing a within-tier precedence.
        if set(self.sub_order) != set(tiers[0]) or len(self.sub_order) != len(tiers[0]):
            raise ValidationError(
                f"sub_order must be a permutation of the priority tier "
                f"{[c.value for c in tiers[0]]}")
        return tuple((c,) for c in self.sub_order) + tiers[1:]


@dataclass(frozen=True)
class Allocation:
    point: SupplyPoint
    allocated_mw: float


@dataclass(frozen=True)
class ScenarioMetrics:
    total_allocated_mw: float
    average_lcoe_usd_per_mwh: float | None
    total_investment_usd: float


@dataclass(frozen=True)
class RegionSummary:
    allocated_mw: float
    shortfall_mw: float
    average_lcoe_usd_per_mwh: float | None
    investment_usd: float


@dataclass(frozen=True)
class AllocationResult:
    scenario: str
    scheme: Scheme
    mode: Mode
    targets: TargetSet
    allocations: tuple[Allocation, ...]
    total_allocated_mw: float
    shortfall_mw: float
    average_lcoe_usd_per_mwh: float | None
    total_investment_usd: float
    by_region: dict[Region, RegionSummary]
    by_category_mw: dict[LandCategory, float]


def metrics(allocations) -> ScenarioMetrics:
    """Capacity-weighted average LCOE and total investment of an allocation.

    Investment converts MW to kW against the adjusted CAPEX. An empty
    allocation has an undefined average (None), never a NaN.
    """
    allocations = list(allocations)
    total = math.fsum(a.allocated_mw for a in allocations)
    if total <= 0:
        return ScenarioMetrics(0.0, None, 0.0)
    cost = math.fsum(a.allocated_mw * a.point.lcoe_usd_per_mwh for a in allocations)
    investment = math.fsum(
        a.allocated_mw * 1000.0 * a.point.adjusted_capex_usd_per_kw
        for a in allocations)
    return ScenarioMetrics(total, cost / total, investment)


def _fill_greedy(curve: SupplyCurve, want_mw: float):
    """Take up to want_mw from the curve in ascending-lcoe order; the final
    point may be taken partially."""
    taken = 0.0
    allocations = []
    remaining = want_mw
    for point in curve.points:
        if remaining <= 0:
            break
        take = point.capacity_mw if point.capacity_mw <= remaining else remaining
        allocations.append(Allocation(point=point, allocated_mw=take))
        taken += take
        remaining -= take
    return taken, allocations


def _tier_curve(curves, regions, tier) -> SupplyCurve:
    parts = []
    for region in regions:
        for category in tier:
            curve = curves.get((region, category))
            if curve is not None and curve.points:
                parts.append(curve)
    return merge_curves(parts)


def allocate(curves, spec: ScenarioSpec) -> AllocationResult:
    """Fill the deployment target by walking category tiers in priority
    order, greedily by ascending LCOE within each tier.

    In regional mode every region meets its own target from its own
    curves; in ei_wide mode a single walk fills the total target from the
    merged EI-wide curves. When the configured tiers run out before the
    target is met, a strict scenario raises InfeasibleError, otherwise the
    result carries the positive shortfall.
    """
    validate_targets(spec.targets)
    tiers = spec.tiers()
    allocations: list[Allocation] = []
    region_shortfall: dict[Region, float] = {}

    if spec.mode is Mode.REGIONAL:
        for region in REGION_ORDER:
            remaining = float(spec.targets.target_for(region))
            for tier in tiers:
                if remaining <= 0:
                    break
                taken, allocs = _fill_greedy(_tier_curve(curves, [region], tier),
                                             remaining)
                allocations.extend(allocs)
                remaining -= taken
            if remaining > 0 and spec.strict:
                raise InfeasibleError(
                    f"scenario {spec.name!r}: {region.value} is short "
                    f"{remaining:.3f} MW of its {spec.targets.target_for(region)} MW target",
                    region=region.value, shortfall_mw=remaining)
            region_shortfall[region] = max(remaining, 0.0)
        shortfall = math.fsum(region_shortfall.values())
    else:
        remaining = float(spec.targets.total_target_mw)
        for tier in tiers:
            if remaining <= 0:
                break
            taken, allocs = _fill_greedy(_tier_curve(curves, REGION_ORDER, tier),
                                         remaining)
            allocations.extend(allocs)
            remaining -= taken
        shortfall = max(remaining, 0.0)
        if shortfall > 0 and spec.strict:
            raise InfeasibleError(
                f"scenario {spec.name!r}: supply exhausted {shortfall:.3f} MW "
                f"short of the {spec.targets.total_target_mw} MW target",
                region="EI", shortfall_mw=shortfall)
        # Regional targets are not binding EI-wide.
        region_shortfall = {region: 0.0 for region in REGION_ORDER}

    summary = metrics(allocations)
    by_region = {}
    for region in REGION_ORDER:
        region_allocs = [a for a in allocations if a.point.region is region]
        m = metrics(region_allocs)
        by_region[region] = RegionSummary(
            allocated_mw=m.total_allocated_mw,
            shortfall_mw=region_shortfall[region],
            average_lcoe_usd_per_mwh=m.average_lcoe_usd_per_mwh,
            investment_usd=m.total_investment_usd)
    by_category = {}
    for category in CATEGORY_ORDER:
        mw = math.fsum(a.allocated_mw for a in allocations
                       if a.point.category is category)
        if mw > 0:
            by_category[category] = mw

    return AllocationResult(
        scenario=spec.name,
        scheme=spec.scheme,
        mode=spec.mode,
        targets=spec.targets,
        allocations=tuple(allocations),
        total_allocated_mw=summary.total_allocated_mw,
        shortfall_mw=shortfall,
        average_lcoe_usd_per_mwh=summary.average_lcoe_usd_per_mwh,
        total_investment_usd=summary.total_investment_usd,
        by_region=by_region,
        by_category_mw=by_category,
    )


def compare_scenarios(results) -> list[dict]:
    """Tabulate scenario results side by side, marking the cheapest and
    most expensive by average LCOE. All results must share one TargetSet."""
    results = list(results)
    if not results:
        return []
    targets = results[0].targets
    for r in results[1:]:
        if r.targets != targets:
            raise ValidationError(
                f"scenario {r.scenario!r} was run against different targets")
    defined = [r.average_lcoe_usd_per_mwh for r in results
               if r.average_lcoe_usd_per_mwh is not None]
    lo = min(defined) if defined else None
    hi = max(defined) if defined else None
    rows = []
    for r in results:
        avg = r.average_lcoe_usd_per_mwh
        rows.append({
            "scenario": r.scenario,
            "scheme": r.scheme.value,
            "mode": r.mode.value,
            "average_lcoe_usd_per_mwh": avg,
            "total_investment_usd": r.total_investment_usd,
            "allocated_mw": r.total_allocated_mw,
            "shortfall_mw": r.shortfall_mw,
            "capacity_by_category_mw": {c.value: mw for c, mw in r.by_category_mw.items()},
            "is_min_avg_lcoe": avg is not None and avg == lo,
            "is_max_avg_lcoe": avg is not None and avg == hi,
        })
    return rows
