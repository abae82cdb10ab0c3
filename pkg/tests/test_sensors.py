"""
Tests for the synthetic radar and TDOA-RF sensors
"""
import numpy as np
import pytest

from backend.models.geometry import EnuPosition
from backend.models.scenario import DropoutRegion, RadarSensorConfig, RfSensorConfig, SensorScenario
from backend.simulation.sensors import (
    range_difference_sigma,
    sensor_streams,
    simulate_radar,
    simulate_rf_fixes,
    simulate_scenario,
)
from backend.tracking.calibration import TruthTrack


def _static_truth(position, duration=1000.0):
    times = np.linspace(0.0, duration, 11)
    return TruthTrack(times, np.tile(np.asarray(position, dtype=float), (times.size, 1)))


def _scenario(sensors, radar=None, rf=None, waypoints=None, speed=5.0, seed=0):
    waypoints = waypoints or [(200.0, 300.0, 50.0), (500.0, 300.0, 50.0)]
    return SensorScenario(
        waypoints=[EnuPosition(east_m=x, north_m=y, up_m=z) for x, y, z in waypoints],
        speed_mps=speed,
        radar=radar or RadarSensorConfig(),
        rf=rf or RfSensorConfig(sensor_positions=sensors),
        rng_seed=seed,
    )


def _cross_range(measurements, origin):
    """Horizontal cross-range offsets of detections of a target due north-east of the radar."""
    points = np.array([m.position for m in measurements]) - np.asarray(origin)
    az = np.radians(45.0)
    return points[:, 0] * np.cos(az) - points[:, 1] * np.sin(az)


class TestRadar:

    def test_zero_noise_reproduces_truth(self, short_scenario):
        radar = short_scenario.radar.model_copy(update={"range_sigma_m": 0.0, "az_sigma_deg": 0.0, "el_sigma_deg": 0.0})
        sc = short_scenario.model_copy(update={"radar": radar})
        run = simulate_scenario(sc)
        truth = TruthTrack.from_samples(run.truth)
        assert len(run.radar) == run.report.radar_samples
        for m in run.radar[::10]:
            assert np.allclose(m.vector, truth.positions_at(m.timestamp)[0], atol=1e-9)

    def test_azimuth_noise_cross_range_spread(self, square_sensors):
        radar = RadarSensorConfig(origin=EnuPosition(), range_sigma_m=0.0, el_sigma_deg=0.0, az_sigma_deg=2.0)
        sc = _scenario(square_sensors, radar=radar)
        target = 500.0 * np.array([np.sin(np.radians(45.0)), np.cos(np.radians(45.0)), 0.0])
        ms = simulate_radar(_static_truth(target), sc, np.random.default_rng(0))
        assert len(ms) == 4001
        spread = np.std(_cross_range(ms, (0.0, 0.0, 0.0)))
        assert spread == pytest.approx(500.0 * np.sin(np.radians(2.0)), rel=0.1)

    def test_degradation_beyond_breakpoint(self, square_sensors):
        radar = RadarSensorConfig(
            origin=EnuPosition(), range_sigma_m=0.0, el_sigma_deg=0.0, az_sigma_deg=2.0, degradation_factor=3.0,
        )
        sc = _scenario(square_sensors, radar=radar)
        rng = np.random.default_rng(1)
        unit = np.array([np.sin(np.radians(45.0)), np.cos(np.radians(45.0)), 0.0])
        near = simulate_radar(_static_truth(700.0 * unit), sc, rng)
        far = simulate_radar(_static_truth(900.0 * unit), sc, rng)
        near_angle = np.std(_cross_range(near, (0.0, 0.0, 0.0))) / 700.0
        far_angle = np.std(_cross_range(far, (0.0, 0.0, 0.0))) / 900.0
        assert far_angle / near_angle == pytest.approx(3.0, rel=0.1)

    def test_outside_field_of_view(self, short_scenario):
        radar = short_scenario.radar.model_copy(update={"boresight_az_deg": 225.0})
        run = simulate_scenario(short_scenario.model_copy(update={"radar": radar}))
        assert run.radar == []
        assert run.report.radar_out_of_coverage == run.report.radar_samples

    def test_beyond_detection_range(self, short_scenario):
        radar = short_scenario.radar.model_copy(update={"max_range_m": 100.0})
        assert simulate_scenario(short_scenario.model_copy(update={"radar": radar})).radar == []

    def test_target_at_radar_is_skipped(self, square_sensors):
        radar = RadarSensorConfig(origin=EnuPosition(east_m=300.0, north_m=300.0, up_m=50.0))
        sc = _scenario(square_sensors, radar=radar)
        assert simulate_radar(_static_truth((300.0, 300.0, 50.0), 10.0), sc, np.random.default_rng(0)) == []

    def test_cadence(self, short_scenario):
        run = simulate_scenario(short_scenario)
        times = np.array([m.timestamp for m in run.radar])
        assert np.mean(np.diff(times)) == pytest.approx(short_scenario.radar.interval_s, rel=0.01)
        assert all(m.track_id == 1 for m in run.radar)

    def test_fragmentation_beyond_breakpoint(self, square_sensors):
        radar = RadarSensorConfig(origin=EnuPosition(), fragment_beyond_breakpoint=True, fragment_length_s=20.0)
        sc = _scenario(
            square_sensors,
            radar=radar,
            waypoints=[(300.0, 300.0, 50.0), (1000.0, 1000.0, 50.0), (300.0, 300.0, 50.0)],
            speed=10.0,
        )
        run = simulate_scenario(sc)
        truth = TruthTrack.from_samples(run.truth)
        ranges = np.array([np.linalg.norm(truth.positions_at(m.timestamp)[0]) for m in run.radar])
        ids = np.array([m.track_id for m in run.radar])
        assert np.all(ids[ranges <= radar.degradation_breakpoint_m] == 1)
        beyond = ids[ranges > radar.degradation_breakpoint_m]
        assert np.all(beyond > 1)
        assert len(set(beyond.tolist())) >= 2
        assert run.report.radar_track_ids == sorted(set(ids.tolist()))


class TestRf:

    def test_noiseless_fixes_match_truth(self, short_scenario):
        rf = short_scenario.rf.model_copy(update={"timing_sigma_s": 0.0, "outlier_prob": 0.0})
        run = simulate_scenario(short_scenario.model_copy(update={"rf": rf}))
        truth = TruthTrack.from_samples(run.truth)
        assert len(run.rf) == run.report.rf_attempts
        for m in run.rf:
            assert np.allclose(m.vector, truth.positions_at(m.timestamp)[0, :2], atol=1e-6)

    def test_range_difference_sigma(self):
        assert range_difference_sigma(10e-9) == pytest.approx(2.998, abs=1e-3)

    def test_outlier_rate_and_size(self, square_sensors):
        rf = RfSensorConfig(
            sensor_positions=square_sensors, interval_s=3.6, timing_sigma_s=1e-9,
            outlier_prob=0.05, outlier_scale_m=1000.0, outlier_max_m=5000.0,
        )
        sc = _scenario(square_sensors, rf=rf, waypoints=[(200.0, 300.0, 50.0), (800.0, 700.0, 50.0)], speed=1.0, seed=3)
        run = simulate_scenario(sc)
        truth = TruthTrack.from_samples(run.truth)
        errors = np.array([np.linalg.norm(m.vector - truth.positions_at(m.timestamp)[0, :2]) for m in run.rf])
        assert run.report.rf_attempts == pytest.approx(200, abs=2)
        assert 2 <= run.report.rf_outliers <= 22
        assert np.count_nonzero(errors > 500.0) == run.report.rf_outliers
        assert errors.max() <= 5000.0 + 1.0

    def test_dropout_region(self, short_scenario):
        region = DropoutRegion(center=EnuPosition(east_m=350.0, north_m=300.0), radius_m=1000.0, dropout_prob=1.0)
        rf = short_scenario.rf.model_copy(update={"dropout_regions": [region]})
        run = simulate_scenario(short_scenario.model_copy(update={"rf": rf}))
        assert run.rf == []
        assert run.report.rf_dropouts == run.report.rf_attempts

    def test_in_hull_epochs_all_produce_fixes(self, default_scenario):
        rf = default_scenario.rf.model_copy(update={"dropout_prob": 0.0, "outlier_prob": 0.0})
        report = simulate_scenario(default_scenario.model_copy(update={"rf": rf}), seed=4).report
        assert report.rf_solver_failures == 0
        assert report.rf_fixes == report.rf_attempts

    def test_accounting(self, short_scenario):
        rf = short_scenario.rf.model_copy(update={"dropout_prob": 0.3, "outlier_prob": 0.2})
        report = simulate_scenario(short_scenario.model_copy(update={"rf": rf})).report
        assert report.rf_attempts == report.rf_dropouts + report.rf_solver_failures + report.rf_fixes
        assert report.rf_outliers <= report.rf_fixes

    def test_direct_call(self, short_scenario):
        truth = _static_truth((500.0, 400.0, 50.0), 20.0)
        ms = simulate_rf_fixes(truth, short_scenario, np.random.default_rng(0))
        assert [m.timestamp for m in ms] == pytest.approx([0.0, 2.0, 4.0, 6.0, 8.0, 10.0, 12.0, 14.0, 16.0, 18.0, 20.0])


class TestScenarioRuns:

    def test_deterministic_under_seed(self, short_scenario):
        a, b = simulate_scenario(short_scenario), simulate_scenario(short_scenario)
        assert a.radar == b.radar
        assert a.rf == b.rf
        assert a.report == b.report

    def test_seed_override(self, short_scenario):
        a = simulate_scenario(short_scenario, seed=1)
        b = simulate_scenario(short_scenario, seed=2)
        assert a.report.rng_seed == 1
        assert a.radar != b.radar

    def test_outliers_keep_other_draws_paired(self, short_scenario):
        clean = simulate_scenario(short_scenario)
        rf = short_scenario.rf.model_copy(update={"outlier_prob": 0.3})
        noisy = simulate_scenario(short_scenario.model_copy(update={"rf": rf}))
        assert clean.radar == noisy.radar
        assert len(clean.rf) == len(noisy.rf)
        same = sum(1 for a, b in zip(clean.rf, noisy.rf) if a == b)
        assert same == len(clean.rf) - noisy.report.rf_outliers

    def test_streams_are_independent(self):
        radar_rng, rf_rng = sensor_streams(0)
        assert radar_rng.random() != rf_rng.random()
