"""
Asynchronous radar/RF fusion: track selection, range gating, NIS gating,
coasting and run accounting.
"""
import logging
import time
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from ..models.fusion_config import FusionConfig
from ..models.geometry import EnuPosition
from ..models.measurement import Measurement, Modality
from ..models.report import ModalityCounts, RunReport
from ..utils.errors import EmptyTrackError, InputDomainError, OrderingError
from ..utils.helpers import format_duration
from .kalman_filter import FilterState, GateDecision, UpdateKind, initialize, predict, update

logger = logging.getLogger(__name__)

FUSION_MODES = ("fused", "radar-only", "rf-only")


@dataclass(frozen=True)
class TrackPoint:
    """One emitted estimate of the fused track."""

    timestamp: float
    state: np.ndarray
    covariance: Optional[np.ndarray]
    kind: UpdateKind
    source: Optional[Modality] = None
    nis: Optional[float] = None

    @property
    def position(self) -> np.ndarray:
        return self.state[0:3]


@dataclass
class FusedTrack:
    points: List[TrackPoint] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self) -> Iterator[TrackPoint]:
        return iter(self.points)

    def append(self, point: TrackPoint) -> None:
        self.points.append(point)

    @property
    def timestamps(self) -> np.ndarray:
        return np.array([p.timestamp for p in self.points], dtype=float)

    @property
    def positions(self) -> np.ndarray:
        return np.array([p.position for p in self.points], dtype=float).reshape(-1, 3)

    def count(self, kind: UpdateKind) -> int:
        return sum(1 for p in self.points if p.kind is kind)


@dataclass
class FusionResult:
    track: FusedTrack
    report: RunReport
    accepted: List[Measurement] = field(default_factory=list)
    rejected: List[Measurement] = field(default_factory=list)


def _track_key(track_id: Optional[int]) -> int:
    return -1 if track_id is None else track_id


def select_largest_track(ms: Sequence[Measurement]) -> List[Measurement]:
    """
    Keep only radar measurements of the track with the most measurements.

    Ties go to the longest time span, then the lowest track id; radar
    fixes without an id form one anonymous track. Non-radar measurements
    pass through unchanged.

    Args:
        ms: Measurement series

    Returns:
        Filtered series, input order preserved
    """
    radar = [m for m in ms if m.modality is Modality.RADAR_3D]
    if not radar:
        return [m for m in ms if m.modality is not Modality.RADAR_3D]

    counts: Counter = Counter(_track_key(m.track_id) for m in radar)
    first: Dict[int, float] = {}
    last: Dict[int, float] = {}
    for m in radar:
        key = _track_key(m.track_id)
        first[key] = min(first.get(key, m.timestamp), m.timestamp)
        last[key] = max(last.get(key, m.timestamp), m.timestamp)
    best = min(counts, key=lambda k: (-counts[k], -(last[k] - first[k]), k))
    return [m for m in ms if m.modality is not Modality.RADAR_3D or _track_key(m.track_id) == best]


def range_gate(m: Measurement, radar_origin: EnuPosition, max_range_m: float) -> GateDecision:
    """Accept radar fixes within max_range_m (3D) of the radar; RF fixes always pass."""
    if m.modality is not Modality.RADAR_3D:
        return GateDecision.ACCEPT
    distance = float(np.linalg.norm(m.vector - radar_origin.as_array()))
    return GateDecision.ACCEPT if distance <= max_range_m else GateDecision.REJECT


def _check_series(ms: Sequence[Measurement], modality: Modality, name: str) -> None:
    for index, m in enumerate(ms):
        if m.modality is not modality:
            raise InputDomainError(f"{name} series contains a {m.modality.value} measurement at position {index}")
        if index and m.timestamp < ms[index - 1].timestamp:
            raise OrderingError(
                f"{name} series is not time-sorted at position {index} "
                f"({m.timestamp} < {ms[index - 1].timestamp})"
            )


def merge_streams(
    radar: Sequence[Measurement],
    rf: Sequence[Measurement],
    tie_break: str = "radar_first",
) -> List[Measurement]:
    """Stable timestamp merge of the two streams; ties ordered by modality."""
    first = Modality.RADAR_3D if tie_break == "radar_first" else Modality.RF_2D
    return sorted([*radar, *rf], key=lambda m: (m.timestamp, 0 if m.modality is first else 1))


def select_mode(
    radar: Sequence[Measurement],
    rf: Sequence[Measurement],
    mode: str,
) -> Tuple[Sequence[Measurement], Sequence[Measurement]]:
    """Drop the stream a single-modality mode does not use."""
    if mode not in FUSION_MODES:
        raise InputDomainError(f"mode must be one of {FUSION_MODES}, got {mode!r}")
    if mode == "radar-only":
        return radar, []
    if mode == "rf-only":
        return [], rf
    return radar, rf


def run_fusion(
    radar: Sequence[Measurement],
    rf: Sequence[Measurement],
    cfg: FusionConfig,
    mode: str = "fused",
) -> FusionResult:
    """
    Fuse time-sorted radar and RF series into one track.

    Each measurement after the first is preceded by a prediction over the
    gap since the previous one. Radar fixes are range-gated, then every
    surviving fix is NIS-gated; accepted fixes update the filter and
    rejected ones emit the coasted prediction at their timestamp.

    Args:
        radar: Radar measurements, time-sorted
        rf: RF measurements, time-sorted
        cfg: Fusion configuration
        mode: fused, radar-only or rf-only

    Returns:
        FusionResult with the track, run report and accepted/rejected fixes
    """
    started = time.perf_counter()
    radar, rf = select_mode(radar, rf, mode)
    _check_series(radar, Modality.RADAR_3D, "radar")
    _check_series(rf, Modality.RF_2D, "rf")

    per_modality: Dict[Modality, ModalityCounts] = defaultdict(ModalityCounts)
    per_modality[Modality.RADAR_3D].raw = len(radar)
    per_modality[Modality.RF_2D].raw = len(rf)

    in_loop_range_gate = cfg.range_gating and cfg.range_gate_placement == "in_loop"
    candidates = list(radar)
    if cfg.range_gating and cfg.range_gate_placement == "preprocess":
        candidates = _apply_range_gate(candidates, cfg, per_modality)
    selected_track_id = None
    if cfg.select_largest_track and candidates:
        kept = select_largest_track(candidates)
        per_modality[Modality.RADAR_3D].track_rejected = len(candidates) - len(kept)
        candidates = kept
        selected_track_id = candidates[0].track_id if candidates else None

    merged = merge_streams(candidates, rf, cfg.tie_break)
    if not merged:
        raise EmptyTrackError("no measurements to fuse")

    track = FusedTrack()
    accepted: List[Measurement] = []
    rejected: List[Measurement] = []
    nis_values: List[float] = []
    state: Optional[FilterState] = None
    gate_confidence = cfg.gate_confidence if cfg.nis_gating else None

    for m in merged:
        counts = per_modality[m.modality]
        if in_loop_range_gate and range_gate(m, cfg.radar_origin, cfg.radar_max_range_m) is GateDecision.REJECT:
            counts.range_rejected += 1
            logger.debug("t=%.3f radar fix range-gated", m.timestamp)
            continue

        if state is None:
            state = initialize(m.vector, m.modality, cfg.noise, m.timestamp, cfg.initialization)
            counts.updated += 1
            accepted.append(m)
            track.append(TrackPoint(m.timestamp, state.estimate, state.covariance, UpdateKind.UPDATED, m.modality))
            continue

        predicted = predict(state, m.timestamp - state.timestamp, cfg.noise)
        state, outcome = update(predicted, m.vector, m.modality, cfg.noise, gate_confidence)
        nis_values.append(outcome.nis_value)
        if outcome.kind is UpdateKind.REJECTED_BY_GATE:
            counts.nis_rejected += 1
            rejected.append(m)
            logger.debug("t=%.3f %s fix rejected, nis=%.2f", m.timestamp, m.modality.value, outcome.nis_value)
            track.append(TrackPoint(m.timestamp, state.estimate, state.covariance, UpdateKind.COASTED, None, outcome.nis_value))
        else:
            counts.updated += 1
            accepted.append(m)
            track.append(TrackPoint(m.timestamp, state.estimate, state.covariance, UpdateKind.UPDATED, m.modality, outcome.nis_value))

    report = _build_report(mode, per_modality, track, nis_values, selected_track_id, started)
    logger.info(
        "%s fusion: %d raw -> %d updated, %d coasted (%d range-gated, %d NIS-rejected) in %s",
        mode, report.raw_count, report.updated, report.coasted, report.range_rejected,
        report.nis_rejected, format_duration(report.runtime_ms),
    )
    return FusionResult(track=track, report=report, accepted=accepted, rejected=rejected)


def _apply_range_gate(
    ms: List[Measurement],
    cfg: FusionConfig,
    per_modality: Dict[Modality, ModalityCounts],
) -> List[Measurement]:
    kept = [m for m in ms if range_gate(m, cfg.radar_origin, cfg.radar_max_range_m) is GateDecision.ACCEPT]
    per_modality[Modality.RADAR_3D].range_rejected += len(ms) - len(kept)
    return kept


def _build_report(
    mode: str,
    per_modality: Dict[Modality, ModalityCounts],
    track: FusedTrack,
    nis_values: List[float],
    selected_track_id: Optional[int],
    started: float,
) -> RunReport:
    by_modality = {}
    for modality in (Modality.RADAR_3D, Modality.RF_2D):
        counts = per_modality[modality]
        considered = counts.raw - counts.track_rejected - counts.range_rejected
        counts.acceptance_rate = counts.updated / considered if considered else 0.0
        by_modality[modality.value] = counts

    def total(attr: str) -> int:
        return sum(getattr(c, attr) for c in by_modality.values())

    coasted = track.count(UpdateKind.COASTED)
    return RunReport(
        mode=mode,
        raw_count=total("raw"),
        track_rejected=total("track_rejected"),
        range_rejected=total("range_rejected"),
        nis_rejected=total("nis_rejected"),
        updated=total("updated"),
        coasted=coasted,
        survivors=total("raw") - total("track_rejected") - total("range_rejected"),
        by_modality=by_modality,
        selected_track_id=selected_track_id,
        mean_nis=float(np.mean(nis_values)) if nis_values else None,
        runtime_ms=(time.perf_counter() - started) * 1000.0,
    )
