"""Supply-curve construction, merging, and cumulative queries."""

import math
import random

import pytest

from solarsite import (build_curve, capacity_below_price, cost_at_capacity,
                       merge_curves)
from solarsite.errors import DomainError, InfeasibleError, ValidationError

from helpers import mk_point


def random_points(rng, n, prefix="R", dyadic=True):
    points = []
    for i in range(n):
        cap = rng.randint(1, 6400) / 64.0 if dyadic else rng.uniform(0.1, 100.0)
        points.append(mk_point(parcel_id=f"{prefix}{i:04d}",
                               lcoe=rng.uniform(20.0, 150.0), capacity=cap))
    return points


class TestBuildCurve:
    def test_empty_curve(self):
        curve = build_curve([])
        assert curve.total_capacity_mw == 0.0
        assert curve.points == ()

    def test_sorts_by_lcoe(self):
        curve = build_curve([mk_point("A", 50), mk_point("B", 40), mk_point("C", 60)])
        assert [p.lcoe_usd_per_mwh for p in curve.points] == [40, 50, 60]

    def test_cumulative_prefix(self):
        curve = build_curve([mk_point("A", 50, 10), mk_point("B", 40, 5)])
        assert curve.cum_capacity_mw == (5.0, 15.0)
        assert curve.total_capacity_mw == 15.0

    def test_ties_break_by_parcel_id(self):
        curve = build_curve([mk_point("B", 50), mk_point("A", 50)])
        assert [p.parcel_id for p in curve.points] == ["A", "B"]

    def test_thousand_random_points_against_resort_oracle(self):
        rng = random.Random(7)
        points = random_points(rng, 1000)
        curve = build_curve(points)
        expected = sorted(points, key=lambda p: (p.lcoe_usd_per_mwh, p.parcel_id))
        assert [p.parcel_id for p in curve.points] == [p.parcel_id for p in expected]
        assert curve.total_capacity_mw == pytest.approx(
            math.fsum(p.capacity_mw for p in points), rel=1e-9)
        assert all(a < b for a, b in zip(curve.cum_capacity_mw,
                                         curve.cum_capacity_mw[1:]))

    def test_idempotent(self):
        rng = random.Random(11)
        curve = build_curve(random_points(rng, 50))
        assert build_curve(curve.points) == curve

    def test_nonpositive_capacity_rejected(self):
        with pytest.raises(ValidationError):
            build_curve([mk_point("A", 50, 0.0)])


class TestMergeCurves:
    def test_merge_of_one_is_identity(self):
        curve = build_curve([mk_point("A", 50), mk_point("B", 40)])
        assert merge_curves([curve]) == curve

    def test_disjoint_price_ranges_concatenate(self):
        cheap = build_curve([mk_point("A", 10), mk_point("B", 20)])
        dear = build_curve([mk_point("C", 30), mk_point("D", 40)])
        merged = merge_curves([dear, cheap])
        assert [p.parcel_id for p in merged.points] == ["A", "B", "C", "D"]

    def test_duplicate_id_rejected(self):
        a = build_curve([mk_point("X", 50)])
        b = build_curve([mk_point("X", 60)])
        with pytest.raises(ValidationError, match="'X'"):
            merge_curves([a, b])

    def test_merge_additivity_at_random_prices(self):
        """capacity_below_price distributes over a merge, exactly."""
        rng = random.Random(23)
        curves = [build_curve(random_points(rng, 40, prefix=f"C{k}_"))
                  for k in range(3)]
        merged = merge_curves(curves)
        for _ in range(50):
            price = rng.uniform(10.0, 160.0)
            parts = sum(capacity_below_price(c, price) for c in curves)
            assert capacity_below_price(merged, price) == parts


class TestCapacityBelowPrice:
    def setup_method(self):
        self.curve = build_curve([mk_point("A", 40, 10), mk_point("B", 50, 10),
                                  mk_point("C", 60, 10)])

    def test_below_minimum(self):
        assert capacity_below_price(self.curve, 39.0) == 0.0

    def test_at_and_above_maximum(self):
        assert capacity_below_price(self.curve, 60.0) == 30.0
        assert capacity_below_price(self.curve, 1e9) == self.curve.total_capacity_mw

    def test_inclusive_at_price(self):
        assert capacity_below_price(self.curve, 50.0) == 20.0

    def test_against_linear_scan_oracle(self):
        rng = random.Random(31)
        curve = build_curve(random_points(rng, 200))
        for _ in range(50):
            price = rng.uniform(0.0, 200.0)
            oracle = math.fsum(p.capacity_mw for p in curve.points
                               if p.lcoe_usd_per_mwh <= price)
            assert capacity_below_price(curve, price) == oracle


class TestCostAtCapacity:
    def setup_method(self):
        self.curve = build_curve([mk_point("A", 40, 10), mk_point("B", 50, 10)])

    def test_partial_point(self):
        """q=15 of {10 MW @ 40, 10 MW @ 50}: marginal 50,
        average (10x40 + 5x50)/15 = 43.333."""
        marginal, average = cost_at_capacity(self.curve, 15.0)
        assert marginal == 50.0
        assert average == pytest.approx(130.0 / 3.0)

    def test_full_curve_marginal_is_max(self):
        marginal, average = cost_at_capacity(self.curve, 20.0)
        assert marginal == 50.0
        assert average == pytest.approx(45.0)

    def test_exact_boundary_stays_on_cheap_point(self):
        marginal, average = cost_at_capacity(self.curve, 10.0)
        assert marginal == 40.0
        assert average == pytest.approx(40.0)

    def test_zero_q_rejected(self):
        with pytest.raises(DomainError):
            cost_at_capacity(self.curve, 0.0)

    def test_excess_q_carries_shortfall(self):
        with pytest.raises(InfeasibleError) as err:
            cost_at_capacity(self.curve, 25.0)
        assert err.value.shortfall_mw == pytest.approx(5.0)

    def test_marginal_nondecreasing_and_average_below(self):
        rng = random.Random(43)
        curve = build_curve(random_points(rng, 120))
        previous = -math.inf
        for _ in range(100):
            q = rng.uniform(1e-6, curve.total_capacity_mw)
            marginal, average = cost_at_capacity(curve, q)
            assert average <= marginal + 1e-12
        for q in sorted(rng.uniform(1e-6, curve.total_capacity_mw)
                        for _ in range(100)):
            marginal, _ = cost_at_capacity(curve, q)
            assert marginal >= previous
            previous = marginal
