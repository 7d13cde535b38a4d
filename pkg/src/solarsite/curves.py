"""Supply curves: LCOE-sorted sequences of supply points with cumulative
capacity, plus merge and query operations.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from itertools import chain

from .costs import SupplyPoint
from .errors import DomainError, InfeasibleError, ValidationError


@dataclass(frozen=True)
class SupplyCurve:
    """Points sorted by (lcoe, parcel id) with a running capacity prefix."""

    points: tuple[SupplyPoint, ...]
    cum_capacity_mw: tuple[float, ...]
    total_capacity_mw: float

    def __len__(self) -> int:
        return len(self.points)


def build_curve(points) -> SupplyCurve:
    """Stable-sort points by ascending (lcoe, parcel id) and compute the
    cumulative capacity prefix in that order."""
    pts = sorted(points, key=lambda p: (p.lcoe_usd_per_mwh, p.parcel_id))
    cum = []
    running = 0.0
    for p in pts:
        if not p.capacity_mw > 0:
            raise ValidationError(f"supply point {p.parcel_id} has capacity <= 0")
        running += p.capacity_mw
        cum.append(running)
    return SupplyCurve(points=tuple(pts), cum_capacity_mw=tuple(cum),
                       total_capacity_mw=running)


def merge_curves(curves) -> SupplyCurve:
    """Merge curves into one; points must have globally unique parcel ids."""
    curves = list(curves)
    seen: set[str] = set()
    for curve in curves:
        for p in curve.points:
            if p.parcel_id in seen:
                raise ValidationError(
                    f"duplicate parcel id {p.parcel_id!r} across merged curves")
            seen.add(p.parcel_id)
    return build_curve(chain.from_iterable(c.points for c in curves))


def capacity_below_price(curve: SupplyCurve, price_usd_per_mwh: float) -> float:
    """Total MW available at lcoe <= price."""
    lcoes = [p.lcoe_usd_per_mwh for p in curve.points]
    idx = bisect_right(lcoes, price_usd_per_mwh)
    if idx == 0:
        return 0.0
    return curve.cum_capacity_mw[idx - 1]


def cost_at_capacity(curve: SupplyCurve, q_mw: float) -> tuple[float, float]:
    """Marginal and capacity-weighted average LCOE of the first q_mw MW.

    Points are divisible: the point containing cumulative position q may be
    counted partially.
    """
    if q_mw <= 0:
        raise DomainError("q must be > 0 MW")
    if q_mw > curve.total_capacity_mw:
        raise InfeasibleError(
            f"requested {q_mw} MW exceeds curve potential "
            f"{curve.total_capacity_mw} MW",
            shortfall_mw=q_mw - curve.total_capacity_mw)
    idx = bisect_left(curve.cum_capacity_mw, q_mw)
    marginal = curve.points[idx].lcoe_usd_per_mwh
    prev_cum = curve.cum_capacity_mw[idx - 1] if idx > 0 else 0.0
    cost = 0.0
    for p in curve.points[:idx]:
        cost += p.capacity_mw * p.lcoe_usd_per_mwh
    cost += (q_mw - prev_cum) * marginal
    return marginal, cost / q_mw
