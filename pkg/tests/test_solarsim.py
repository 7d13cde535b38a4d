"""Solar geometry and the hourly capacity-factor chain."""

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from solarsite import (Orientation, OrientationDistribution, OrientationWeight,
                       SimConfig, SolarPosition, county_mean_cf, declination,
                       poa_irradiance, simulate_roof_cf, simulate_utility_cf,
                       solar_position, tracker_rotation)
from solarsite.errors import DomainError, ValidationError
from solarsite.solarsim import (CFSeries, cell_temperature, hourly_cf,
                                orientation_cos_aoi, simulate_fixed_cf)

from helpers import clear_sky_meteo, dark_meteo


class TestDeclination:
    def test_june_solstice(self):
        """23.45 sin(360 (284+172)/365) = 23.45 sin(449.75 deg) ~ 23.45."""
        assert declination(172) == pytest.approx(23.45, abs=0.01)

    def test_equinox_near_zero(self):
        assert declination(81) == pytest.approx(0.0, abs=0.1)

    def test_bounded_all_year(self):
        decl = declination(np.arange(1, 366))
        assert np.all(np.abs(decl) <= 23.45 + 1e-9)


class TestSolarPosition:
    def test_equator_equinox_noon_overhead(self):
        sp = solar_position(0.0, 80 * 24 + 12)  # day 81, solar noon
        assert float(sp.zenith_deg) == pytest.approx(0.0, abs=0.5)

    def test_winter_morning_elevation(self):
        """phi=40, n=355, 10:00: sin(alpha) = sin40 sin(-23.45)
        + cos40 cos(-23.45) cos(-30) -> alpha ~ 20.7 deg."""
        sp = solar_position(40.0, 354 * 24 + 10)
        assert 90.0 - float(sp.zenith_deg) == pytest.approx(20.7, abs=0.3)

    def test_azimuth_sides(self):
        morning = solar_position(40.0, 170 * 24 + 9)
        afternoon = solar_position(40.0, 170 * 24 + 15)
        assert 0.0 < float(morning.azimuth_deg) < 180.0
        assert 180.0 < float(afternoon.azimuth_deg) < 360.0

    def test_noon_azimuth_south_in_north(self):
        sp = solar_position(40.0, 170 * 24 + 12)
        assert float(sp.azimuth_deg) == pytest.approx(180.0, abs=1.0)

    def test_latitude_range_enforced(self):
        with pytest.raises(DomainError):
            solar_position(91.0, 12)

    def test_hour_range_enforced(self):
        with pytest.raises(DomainError):
            solar_position(0.0, 8760)


class TestTrackerRotation:
    def test_overhead_sun(self):
        rot, cos_aoi = tracker_rotation(SolarPosition(0.0, 180.0))
        assert float(rot) == pytest.approx(0.0)
        assert float(cos_aoi) == pytest.approx(1.0)

    def test_sun_in_meridian_plane(self):
        """Due-south sun has no east-west component: the tracker stays flat
        and cos_aoi equals cos(zenith)."""
        rot, cos_aoi = tracker_rotation(SolarPosition(30.0, 180.0))
        assert float(rot) == pytest.approx(0.0, abs=1e-9)
        assert float(cos_aoi) == pytest.approx(math.cos(math.radians(30.0)))

    def test_grazing_sun_due_east_unlimited(self):
        rot, cos_aoi = tracker_rotation(SolarPosition(89.9, 90.0),
                                        rotation_limit_deg=None)
        assert float(rot) == pytest.approx(90.0, abs=0.2)
        assert float(cos_aoi) == pytest.approx(1.0, abs=1e-6)

    def test_rotation_limit_clamps(self):
        rot, _ = tracker_rotation(SolarPosition(70.0, 90.0),
                                  rotation_limit_deg=45.0)
        assert float(rot) == pytest.approx(45.0)

    def test_below_horizon_returns_zero(self):
        rot, cos_aoi = tracker_rotation(SolarPosition(95.0, 270.0))
        assert float(rot) == 0.0
        assert float(cos_aoi) == 0.0

    @pytest.mark.parametrize("limit", [None, 60.0])
    def test_never_worse_than_horizontal(self, limit):
        hours = np.arange(8760) + 0.5
        sp = solar_position(38.0, hours)
        _, cos_aoi = tracker_rotation(sp, rotation_limit_deg=limit)
        daylight = np.asarray(sp.zenith_deg) < 90.0
        cos_zen = np.cos(np.radians(np.asarray(sp.zenith_deg)))
        assert np.all(cos_aoi[daylight] >= cos_zen[daylight])


class TestPoaIrradiance:
    def test_dark_sky(self):
        assert poa_irradiance(0, 0, 0, 0.5, 30.0) == 0.0

    def test_horizontal_reduces_to_ghi_composition(self):
        """At tilt 0 the ground term vanishes and the sky term is whole:
        POA = dni cos(zen) + dhi for any albedo."""
        cos_zen = math.cos(math.radians(40.0))
        poa = poa_irradiance(700.0, 800.0, 100.0, cos_zen, 0.0, albedo=0.9)
        assert float(poa) == pytest.approx(800.0 * cos_zen + 100.0, rel=1e-12)

    def test_hand_arithmetic(self):
        """dni 800 x 0.866 + dhi 100 x (1+cos30)/2 + ghi 700 x 0.2 x (1-cos30)/2
        = 692.8 + 93.301 + 9.378 = 795.48."""
        poa = poa_irradiance(700.0, 800.0, 100.0, 0.866, 30.0, albedo=0.2)
        assert float(poa) == pytest.approx(795.479, abs=0.01)

    def test_negative_cos_aoi_drops_beam(self):
        poa = poa_irradiance(0.0, 800.0, 0.0, -0.3, 30.0)
        assert float(poa) == 0.0

    @given(dni=st.floats(0, 1000), dhi=st.floats(0, 500), ghi=st.floats(0, 1400),
           bump=st.floats(0, 100))
    def test_monotone_in_each_component(self, dni, dhi, ghi, bump):
        base = float(poa_irradiance(ghi, dni, dhi, 0.7, 25.0))
        assert float(poa_irradiance(ghi + bump, dni, dhi, 0.7, 25.0)) >= base
        assert float(poa_irradiance(ghi, dni + bump, dhi, 0.7, 25.0)) >= base
        assert float(poa_irradiance(ghi, dni, dhi + bump, 0.7, 25.0)) >= base


class TestCellTemperatureAndCf:
    def test_no_irradiance_no_heating(self):
        assert float(cell_temperature(0.0, 17.5)) == 17.5

    def test_noct_reference_point(self):
        assert float(cell_temperature(800.0, 20.0, noct_c=45.0)) == pytest.approx(45.0)

    def test_half_irradiance(self):
        assert float(cell_temperature(400.0, 0.0, noct_c=45.0)) == pytest.approx(12.5)

    def test_stc_identity(self):
        assert float(hourly_cf(1000.0, 25.0, system_loss=0.0)) == pytest.approx(1.0)

    def test_dark_cf_zero(self):
        assert float(hourly_cf(0.0, 25.0)) == 0.0

    def test_hand_arithmetic(self):
        """0.8 x (1 - 0.0037 x 20) x 0.86 = 0.637088."""
        cf = hourly_cf(800.0, 45.0, temp_coeff_per_c=-0.0037, system_loss=0.14)
        assert float(cf) == pytest.approx(0.637088, abs=1e-6)

    def test_clamped_to_unit_interval(self):
        assert float(hourly_cf(1400.0, -20.0, system_loss=0.0)) == 1.0
        assert float(hourly_cf(100.0, 500.0)) == 0.0


def scalar_utility_cf(series, latitude_deg, config):
    """Independent scalar re-implementation of the utility hour loop."""
    total = 0.0
    lat = math.radians(latitude_deg)
    limit = config.rotation_limit_deg
    for h in range(8760):
        hour = h + 0.5
        day = math.floor(hour / 24.0) + 1.0
        solar_hour = hour - (day - 1.0) * 24.0
        decl = math.radians(23.45 * math.sin(math.radians(360.0 * (284.0 + day) / 365.0)))
        omega = math.radians(15.0 * (solar_hour - 12.0))
        cos_zen = (math.sin(lat) * math.sin(decl)
                   + math.cos(lat) * math.cos(decl) * math.cos(omega))
        if cos_zen <= 0.0:
            continue
        zen = math.acos(min(max(cos_zen, -1.0), 1.0))
        east = -math.cos(decl) * math.sin(omega)
        north = math.sin(decl) * math.cos(lat) - math.cos(decl) * math.cos(omega) * math.sin(lat)
        az = math.atan2(east, north)
        rot = math.atan2(math.sin(zen) * math.sin(az), cos_zen)
        if limit is not None:
            rot = min(max(rot, -math.radians(limit)), math.radians(limit))
        cos_aoi = math.sin(zen) * math.sin(az) * math.sin(rot) + cos_zen * math.cos(rot)
        cos_aoi = min(max(cos_aoi, cos_zen), 1.0)
        tilt = abs(rot)
        poa = (series.dni[h] * max(cos_aoi, 0.0)
               + series.dhi[h] * (1.0 + math.cos(tilt)) / 2.0
               + series.ghi[h] * config.albedo * (1.0 - math.cos(tilt)) / 2.0)
        t_cell = series.t_amb[h] + poa * (config.noct_c - 20.0) / 800.0
        cf = (poa / 1000.0) * (1.0 + config.temp_coeff_per_c * (t_cell - 25.0)) \
            * (1.0 - config.system_loss)
        total += min(max(cf, 0.0), 1.0)
    return total / 8760.0


class TestSimulateUtility:
    def test_dark_year_gives_zero(self):
        cf = simulate_utility_cf(dark_meteo(), 35.0)
        assert cf.annual_mean == 0.0

    def test_clear_sky_annual_mean_in_plausible_band(self):
        cf = simulate_utility_cf(clear_sky_meteo(35.0), 35.0)
        assert 0.15 <= cf.annual_mean <= 0.40

    def test_matches_independent_scalar_loop(self):
        series = clear_sky_meteo(35.0)
        config = SimConfig()
        vectorized = simulate_utility_cf(series, 35.0, config).annual_mean
        scalar = scalar_utility_cf(series, 35.0, config)
        assert vectorized == pytest.approx(scalar, abs=1e-9)

    def test_tracking_beats_fixed_horizontal(self):
        series = clear_sky_meteo(35.0)
        tracking = simulate_utility_cf(series, 35.0).annual_mean
        horizontal = simulate_fixed_cf(series, 35.0, 0.0, 180.0).annual_mean
        assert tracking >= horizontal

    def test_night_hours_have_zero_cf(self):
        series = clear_sky_meteo(40.0)
        cf = simulate_utility_cf(series, 40.0)
        sp = solar_position(40.0, np.arange(8760) + 0.5)
        night = np.asarray(sp.zenith_deg) >= 90.0
        assert np.all(cf.hourly[night] == 0.0)

    def test_hourly_values_bounded(self):
        cf = simulate_utility_cf(clear_sky_meteo(30.0), 30.0)
        assert np.all(cf.hourly >= 0.0) and np.all(cf.hourly <= 1.0)
        assert 0.0 <= cf.annual_mean <= 1.0


class TestSimulateRoof:
    def dist(self, *entries):
        return OrientationDistribution(entries=tuple(entries))

    def test_single_orientation_degenerates(self):
        series = clear_sky_meteo(40.0)
        dist = self.dist(OrientationWeight(Orientation(30.0, 180.0), 1.0))
        direct = simulate_fixed_cf(series, 40.0, 30.0, 180.0).annual_mean
        assert simulate_roof_cf(series, 40.0, dist) == pytest.approx(direct, rel=1e-12)

    def test_even_mix_is_midpoint(self):
        series = clear_sky_meteo(40.0)
        south = Orientation(30.0, 180.0)
        east = Orientation(30.0, 90.0)
        dist = self.dist(OrientationWeight(south, 0.5), OrientationWeight(east, 0.5))
        cf_s = simulate_fixed_cf(series, 40.0, 30.0, 180.0).annual_mean
        cf_e = simulate_fixed_cf(series, 40.0, 30.0, 90.0).annual_mean
        assert simulate_roof_cf(series, 40.0, dist) == pytest.approx(
            (cf_s + cf_e) / 2.0, rel=1e-12)

    def test_south_beats_north_at_midlatitude(self):
        series = clear_sky_meteo(40.0)
        south = simulate_fixed_cf(series, 40.0, 30.0, 180.0).annual_mean
        north = simulate_fixed_cf(series, 40.0, 30.0, 0.0).annual_mean
        assert south >= north

    def test_weighted_cf_within_member_range(self):
        series = clear_sky_meteo(36.0)
        members = [(20.0, 180.0, 0.5), (35.0, 135.0, 0.3), (35.0, 225.0, 0.2)]
        dist = self.dist(*(OrientationWeight(Orientation(t, a), w)
                           for t, a, w in members))
        cfs = [simulate_fixed_cf(series, 36.0, t, a).annual_mean
               for t, a, _ in members]
        mixed = simulate_roof_cf(series, 36.0, dist)
        assert min(cfs) - 1e-12 <= mixed <= max(cfs) + 1e-12

    def test_flat_entry_uses_latitude_tilt(self):
        series = clear_sky_meteo(40.0)
        flat = self.dist(OrientationWeight(Orientation(0.0, 180.0), 1.0, flat=True))
        at_latitude = simulate_fixed_cf(series, 40.0, 40.0, 180.0).annual_mean
        assert simulate_roof_cf(series, 40.0, flat) == pytest.approx(
            at_latitude, rel=1e-12)

    def test_empty_distribution_rejected(self):
        with pytest.raises(DomainError):
            simulate_roof_cf(clear_sky_meteo(40.0), 40.0, self.dist())

    def test_weights_validated(self):
        with pytest.raises(ValidationError):
            self.dist(OrientationWeight(Orientation(30.0, 180.0), 0.7))


class TestCountyMean:
    def test_single_value(self):
        assert county_mean_cf([0.25]) == 0.25

    def test_two_values(self):
        assert county_mean_cf([0.2, 0.3]) == pytest.approx(0.25)

    def test_matches_sum_over_n(self):
        values = [0.21, 0.274, 0.199, 0.305, 0.262]
        assert county_mean_cf(values) == pytest.approx(
            math.fsum(values) / 5.0, abs=1e-12)

    def test_empty_rejected(self):
        with pytest.raises(DomainError):
            county_mean_cf([])

    def test_mean_within_input_range(self):
        values = [0.18, 0.31, 0.22]
        assert min(values) <= county_mean_cf(values) <= max(values)


class TestCFSeries:
    def test_mean_is_arithmetic_mean(self):
        hourly = np.linspace(0.0, 1.0, 8760)
        series = CFSeries.from_hourly(hourly)
        assert series.annual_mean == pytest.approx(float(hourly.mean()), abs=1e-12)

    def test_out_of_range_rejected(self):
        bad = np.zeros(8760)
        bad[0] = 1.5
        with pytest.raises(ValidationError):
            CFSeries.from_hourly(bad)

    def test_wrong_length_rejected(self):
        with pytest.raises(ValidationError):
            CFSeries.from_hourly(np.zeros(100))


class TestOrientationBounds:
    def test_tilt_range(self):
        with pytest.raises(ValidationError):
            Orientation(91.0, 180.0)

    def test_azimuth_range(self):
        with pytest.raises(ValidationError):
            Orientation(30.0, 360.0)

    def test_fixed_cos_aoi_zero_at_night(self):
        sp = SolarPosition(100.0, 0.0)
        assert float(orientation_cos_aoi(sp, 30.0, 180.0)) == 0.0
