"""Domain types, screening, building classification, and target checks."""

import pytest
from hypothesis import given, strategies as st

from solarsite import (LandCategory, Region, RoofSizeClass, ScreenCriteria,
                       TargetSet, classify_building, screen_parcel,
                       validate_targets)
from solarsite.errors import DomainError, ValidationError

from helpers import mk_parcel

CANONICAL_TARGETS = {
    Region.ISO_NE: 12_000, Region.MISO: 92_000, Region.NYISO: 21_000,
    Region.PJM: 42_000, Region.SPP: 97_000, Region.SOUTHEAST: 189_000,
}


class TestParcel:
    def test_valid_parcel(self):
        p = mk_parcel()
        assert p.region is Region.MISO
        assert not p.is_rooftop

    def test_negative_area_rejected(self):
        with pytest.raises(ValidationError):
            mk_parcel(usable_area_m2=-1.0)

    def test_zero_tx_multiplier_rejected(self):
        with pytest.raises(ValidationError):
            mk_parcel(tx_multiplier=0.0)

    def test_bad_fips_rejected(self):
        with pytest.raises(ValidationError):
            mk_parcel(county_fips="123")


class TestScreenParcel:
    def test_steep_slope_excluded(self):
        """Slope above the 10 degree threshold fires the slope rule."""
        d = screen_parcel(mk_parcel(mean_slope_deg=12.0), ScreenCriteria())
        assert not d.eligible
        assert d.reason == "slope"

    def test_clean_parcel_eligible(self):
        d = screen_parcel(mk_parcel(mean_slope_deg=0.0), ScreenCriteria())
        assert d.eligible
        assert d.reason is None

    def test_slope_reported_before_protected(self):
        """Fixed evaluation order: slope wins even when both rules fail."""
        p = mk_parcel(mean_slope_deg=11.0, protected=True)
        assert screen_parcel(p, ScreenCriteria()).reason == "slope"

    def test_protected_then_buffer_order(self):
        p = mk_parcel(protected=True, buffer_conflict=True)
        assert screen_parcel(p, ScreenCriteria()).reason == "protected"
        p = mk_parcel(buffer_conflict=True)
        assert screen_parcel(p, ScreenCriteria()).reason == "buffer"

    def test_rooftops_never_slope_screened(self):
        p = mk_parcel(category=LandCategory.ROOF_MEDIUM, mean_slope_deg=45.0)
        assert screen_parcel(p, ScreenCriteria()).eligible

    def test_disabled_flags_admit_parcels(self):
        p = mk_parcel(protected=True, buffer_conflict=True)
        c = ScreenCriteria(exclude_protected=False, exclude_buffer_conflicts=False)
        assert screen_parcel(p, c).eligible

    @given(slope=st.floats(0, 30), protected=st.booleans(), buffer=st.booleans(),
           max_slope=st.floats(1, 15), relax=st.floats(0, 15))
    def test_relaxing_criteria_is_monotone(self, slope, protected, buffer,
                                           max_slope, relax):
        """A parcel eligible under tight criteria stays eligible under any
        relaxation (higher slope cap, disabled flags)."""
        p = mk_parcel(mean_slope_deg=slope, protected=protected,
                      buffer_conflict=buffer)
        tight = ScreenCriteria(max_slope_deg=max_slope)
        loose = ScreenCriteria(max_slope_deg=max_slope + relax,
                               exclude_protected=False,
                               exclude_buffer_conflicts=False)
        if screen_parcel(p, tight).eligible:
            assert screen_parcel(p, loose).eligible


class TestClassifyBuilding:
    def test_thresholds(self):
        assert classify_building(4_999) is RoofSizeClass.SMALL
        assert classify_building(5_000) is RoofSizeClass.MEDIUM
        assert classify_building(25_000) is RoofSizeClass.MEDIUM
        assert classify_building(30_000) is RoofSizeClass.LARGE

    def test_zero_area_is_small(self):
        assert classify_building(0.0) is RoofSizeClass.SMALL

    def test_negative_area_rejected(self):
        with pytest.raises(DomainError):
            classify_building(-1.0)

    @given(st.floats(0, 1e7))
    def test_partition_is_total_and_ordered(self, area):
        """Every nonnegative area maps to exactly one class, and the class
        rank never decreases with area."""
        rank = {RoofSizeClass.SMALL: 0, RoofSizeClass.MEDIUM: 1,
                RoofSizeClass.LARGE: 2}
        cls = classify_building(area)
        assert cls in rank
        assert rank[classify_building(area + 1.0)] >= rank[cls]


class TestValidateTargets:
    def test_canonical_split_valid(self):
        t = TargetSet(total_target_mw=453_000,
                      region_targets_mw=dict(CANONICAL_TARGETS))
        assert validate_targets(t) is t

    def test_all_zero_valid(self):
        t = TargetSet(total_target_mw=0,
                      region_targets_mw={r: 0 for r in Region})
        validate_targets(t)

    def test_residual_reported(self):
        t = TargetSet(total_target_mw=454_000,
                      region_targets_mw=dict(CANONICAL_TARGETS))
        with pytest.raises(ValidationError, match="residual 1000 MW"):
            validate_targets(t)

    def test_negative_target_rejected(self):
        t = TargetSet(total_target_mw=0, region_targets_mw={Region.MISO: -1,
                                                            Region.SPP: 1})
        with pytest.raises(ValidationError):
            validate_targets(t)

    def test_non_integer_rejected(self):
        t = TargetSet(total_target_mw=10, region_targets_mw={Region.MISO: 10.0})
        with pytest.raises(ValidationError):
            validate_targets(t)

    def test_missing_regions_count_as_zero(self):
        t = TargetSet(total_target_mw=5, region_targets_mw={Region.SPP: 5})
        validate_targets(t)
        assert t.target_for(Region.MISO) == 0

    @given(st.dictionaries(st.sampled_from(list(Region)),
                           st.integers(0, 10_000_000)))
    def test_accepts_iff_sum_matches(self, targets):
        good = TargetSet(total_target_mw=sum(targets.values()),
                         region_targets_mw=targets)
        validate_targets(good)
        bad = TargetSet(total_target_mw=sum(targets.values()) + 1,
                        region_targets_mw=targets)
        with pytest.raises(ValidationError):
            validate_targets(bad)
