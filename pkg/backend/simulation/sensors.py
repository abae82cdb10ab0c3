"""
Synthetic radar and TDOA-RF sensors observing a ground-truth trajectory.
"""
import logging
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from ..models.measurement import GroundTruthSample, Measurement, Modality
from ..models.report import SimulationReport
from ..models.scenario import RadarSensorConfig, RfSensorConfig, SensorScenario, TdoaObservation
from ..tracking.calibration import TruthLike, as_truth_track
from ..utils.errors import ConvergenceError, GeometryError
from .tdoa import SPEED_OF_LIGHT, tdoa_localize, tdoa_observations
from .trajectory import truth_track

logger = logging.getLogger(__name__)

LOMAX_SHAPE = 1.5
MIN_RANGE_M = 1e-9


@dataclass
class RadarCounts:
    samples: int = 0
    detections: int = 0
    out_of_coverage: int = 0
    skipped: int = 0
    track_ids: List[int] = field(default_factory=list)


@dataclass
class RfCounts:
    attempts: int = 0
    dropouts: int = 0
    solver_failures: int = 0
    outliers: int = 0
    fixes: int = 0


def _cadence(span: Tuple[float, float], interval_s: float, offset_s: float) -> np.ndarray:
    t0, t1 = span
    first = t0 + offset_s
    if first > t1:
        return np.empty(0)
    n = int(np.floor((t1 - first) / interval_s + 1e-9)) + 1
    return first + interval_s * np.arange(n)


def _wrap_deg(angle: np.ndarray) -> np.ndarray:
    return (angle + 180.0) % 360.0 - 180.0


def _assign_track_ids(times: np.ndarray, beyond: np.ndarray, radar: RadarSensorConfig) -> np.ndarray:
    """Track 1 inside the breakpoint; each excursion beyond it gets fresh ids, split every fragment_length_s."""
    ids = np.ones(times.size, dtype=int)
    if not radar.fragment_beyond_breakpoint:
        return ids
    next_id = 1
    excursion_start = None
    current = 1
    for k in range(times.size):
        if not beyond[k]:
            excursion_start = None
            continue
        if excursion_start is None or times[k] - excursion_start >= radar.fragment_length_s:
            excursion_start = times[k] if excursion_start is None else excursion_start + radar.fragment_length_s
            next_id += 1
            current = next_id
        ids[k] = current
    return ids


def _simulate_radar(
    gt: TruthLike,
    radar: RadarSensorConfig,
    rng: np.random.Generator,
) -> Tuple[List[Measurement], RadarCounts]:
    truth = as_truth_track(gt)
    times = _cadence(truth.span, radar.interval_s, radar.start_offset_s)
    counts = RadarCounts(samples=int(times.size))
    if times.size == 0:
        return [], counts

    rel = truth.positions_at(times) - radar.origin.as_array()
    horizontal = np.hypot(rel[:, 0], rel[:, 1])
    true_range = np.hypot(horizontal, rel[:, 2])
    az = np.degrees(np.arctan2(rel[:, 0], rel[:, 1]))
    el = np.degrees(np.arctan2(rel[:, 2], horizontal))
    # drawn for every sample so coverage settings never shift the noise of other samples
    draws = rng.standard_normal((times.size, 3))

    skipped = true_range < MIN_RANGE_M
    in_fov = (
        (np.abs(_wrap_deg(az - radar.boresight_az_deg)) <= radar.fov_az_deg / 2.0)
        & (np.abs(el - radar.boresight_el_deg) <= radar.fov_el_deg / 2.0)
        & (true_range <= radar.max_range_m)
    )
    detected = ~skipped & in_fov
    counts.skipped = int(np.count_nonzero(skipped))
    counts.out_of_coverage = int(np.count_nonzero(~skipped & ~in_fov))

    beyond = true_range > radar.degradation_breakpoint_m
    factor = np.where(beyond, radar.degradation_factor, 1.0)
    noisy_range = true_range + radar.range_sigma_m * draws[:, 0]
    noisy_az = np.radians(az + radar.az_sigma_deg * factor * draws[:, 1])
    noisy_el = np.radians(el + radar.el_sigma_deg * factor * draws[:, 2])
    enu = np.column_stack([
        noisy_range * np.cos(noisy_el) * np.sin(noisy_az),
        noisy_range * np.cos(noisy_el) * np.cos(noisy_az),
        noisy_range * np.sin(noisy_el),
    ]) + radar.origin.as_array()

    track_ids = np.ones(times.size, dtype=int)
    track_ids[detected] = _assign_track_ids(times[detected], beyond[detected], radar)
    measurements = [
        Measurement(
            timestamp=float(times[k]),
            modality=Modality.RADAR_3D,
            position=tuple(float(v) for v in enu[k]),
            track_id=int(track_ids[k]),
        )
        for k in np.flatnonzero(detected)
    ]
    counts.detections = len(measurements)
    counts.track_ids = sorted({m.track_id for m in measurements})
    return measurements, counts


def simulate_radar(gt: TruthLike, sc: SensorScenario, rng: np.random.Generator) -> List[Measurement]:
    """
    Radar detections of the truth at the radar cadence.

    Truth is converted to range, azimuth (clockwise from north) and
    elevation about the radar, perturbed with Gaussian noise (angle
    sigmas multiplied by the degradation factor beyond the breakpoint)
    and converted back to ENU. Samples outside the field of view or
    detection range, or at the radar origin itself, produce nothing.

    Args:
        gt: Ground-truth series
        sc: Scenario carrying the radar settings
        rng: Random generator

    Returns:
        Time-sorted radar measurements
    """
    measurements, _ = _simulate_radar(gt, sc.radar, rng)
    return measurements


def _dropout_prob(rf: RfSensorConfig, position: np.ndarray) -> float:
    for region in rf.dropout_regions:
        center = region.center.as_array()[:2]
        if np.hypot(*(position[:2] - center)) <= region.radius_m:
            return region.dropout_prob
    return rf.dropout_prob


def _simulate_rf(
    gt: TruthLike,
    rf: RfSensorConfig,
    rng: np.random.Generator,
) -> Tuple[List[Measurement], RfCounts]:
    truth = as_truth_track(gt)
    times = _cadence(truth.span, rf.interval_s, rf.start_offset_s)
    counts = RfCounts(attempts=int(times.size))
    if times.size == 0:
        return [], counts

    positions = truth.positions_at(times)
    n_obs = len(rf.sensor_positions) - 1
    # one fixed block of draws per epoch keeps clean and outlier runs paired
    dropout_draws = rng.random(times.size)
    timing_draws = rng.standard_normal((times.size, n_obs))
    outlier_draws = rng.random(times.size)
    magnitude_draws = rng.pareto(LOMAX_SHAPE, times.size)
    direction_draws = rng.uniform(0.0, 2.0 * np.pi, times.size)

    measurements: List[Measurement] = []
    for k, t in enumerate(times):
        if dropout_draws[k] < _dropout_prob(rf, positions[k]):
            counts.dropouts += 1
            continue
        clean = tdoa_observations(rf.sensor_positions, positions[k], rf.reference_index)
        observed = [
            TdoaObservation(sensor_pair=o.sensor_pair, delta_t=o.delta_t + rf.timing_sigma_s * timing_draws[k, i])
            for i, o in enumerate(clean)
        ]
        try:
            fix = tdoa_localize(rf.sensor_positions, observed)
        except (ConvergenceError, GeometryError) as exc:
            counts.solver_failures += 1
            logger.debug("t=%.2f RF fix dropped: %s", t, exc)
            continue
        if outlier_draws[k] < rf.outlier_prob:
            magnitude = min(rf.outlier_scale_m * (1.0 + magnitude_draws[k]), rf.outlier_max_m)
            fix = positions[k, :2] + magnitude * np.array([np.cos(direction_draws[k]), np.sin(direction_draws[k])])
            counts.outliers += 1
        measurements.append(
            Measurement(timestamp=float(t), modality=Modality.RF_2D, position=(float(fix[0]), float(fix[1])))
        )
    counts.fixes = len(measurements)
    return measurements, counts


def simulate_rf_fixes(gt: TruthLike, sc: SensorScenario, rng: np.random.Generator) -> List[Measurement]:
    """
    TDOA-multilaterated 2D fixes at the RF cadence.

    Each epoch may drop out, otherwise noisy arrival-time differences
    against the reference sensor are solved by tdoa_localize. With
    probability outlier_prob the solution is replaced by a heavy-tailed
    outlier around the truth. Epochs where the solver fails are dropped.

    Args:
        gt: Ground-truth series
        sc: Scenario carrying the RF settings
        rng: Random generator

    Returns:
        Time-sorted RF measurements
    """
    measurements, _ = _simulate_rf(gt, sc.rf, rng)
    return measurements


@dataclass
class SimulationRun:
    truth: List[GroundTruthSample]
    radar: List[Measurement]
    rf: List[Measurement]
    report: SimulationReport


def sensor_streams(seed: int) -> Tuple[np.random.Generator, np.random.Generator]:
    """Independent radar and RF generators derived from one seed."""
    radar_seq, rf_seq = np.random.SeedSequence(seed).spawn(2)
    return np.random.default_rng(radar_seq), np.random.default_rng(rf_seq)


def simulate_scenario(sc: SensorScenario, seed: Optional[int] = None) -> SimulationRun:
    """
    Truth plus both sensor streams for a scenario.

    Args:
        sc: Scenario
        seed: Overrides sc.rng_seed when given

    Returns:
        SimulationRun with the accounting report
    """
    seed = sc.rng_seed if seed is None else seed
    track = truth_track(sc)
    radar_rng, rf_rng = sensor_streams(seed)
    radar, radar_counts = _simulate_radar(track, sc.radar, radar_rng)
    rf, rf_counts = _simulate_rf(track, sc.rf, rf_rng)

    t0, t1 = track.span
    report = SimulationReport(
        rng_seed=seed,
        duration_s=t1 - t0,
        gt_samples=int(track.times.size),
        radar_samples=radar_counts.samples,
        radar_detections=radar_counts.detections,
        radar_out_of_coverage=radar_counts.out_of_coverage,
        radar_skipped=radar_counts.skipped,
        radar_track_ids=radar_counts.track_ids,
        rf_attempts=rf_counts.attempts,
        rf_dropouts=rf_counts.dropouts,
        rf_solver_failures=rf_counts.solver_failures,
        rf_outliers=rf_counts.outliers,
        rf_fixes=rf_counts.fixes,
    )
    logger.info(
        "seed %d: %d truth samples, %d radar detections, %d/%d RF fixes (%d outliers, %d dropouts)",
        seed, report.gt_samples, report.radar_detections, report.rf_fixes, report.rf_attempts,
        report.rf_outliers, report.rf_dropouts,
    )
    return SimulationRun(truth=track.to_samples(), radar=radar, rf=rf, report=report)


def range_difference_sigma(timing_sigma_s: float) -> float:
    """Range-difference noise implied by a timing noise sigma."""
    return SPEED_OF_LIGHT * timing_sigma_s
