"""
Scoring of estimate series against ground truth: error statistics,
temporal coverage, empirical CDFs and NEES consistency.
"""
import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.stats import chi2

from ..models.geometry import EnuPosition
from ..models.measurement import GroundTruthSample, Measurement
from ..models.report import ConsistencySummary, ErrorReport, ErrorSummary
from ..utils.errors import EmptyReportError, InputDomainError
from .calibration import TruthLike, TruthTrack, as_truth_track
from .fusion import FusedTrack, TrackPoint

logger = logging.getLogger(__name__)

DEFAULT_BIN_S = 4.0
MIN_RECIPROCAL_CONDITION = 1e-12


class ScoringMode(str, Enum):
    """AUTO scores RF fixes in 2D and everything else in 3D."""

    AUTO = "auto"
    HORIZONTAL_2D = "horizontal2D"
    FULL_3D = "full3D"


@dataclass(frozen=True)
class EstimateSeries:
    """
    Flat array view of anything with timestamps and positions.

    Rows of 2D sources carry NaN altitude and dims == 2.
    """

    times: np.ndarray
    positions: np.ndarray
    dims: np.ndarray
    kinds: Tuple[Optional[str], ...]

    def __len__(self) -> int:
        return self.times.size


EstimateLike = Union[FusedTrack, Sequence[TrackPoint], Sequence[Measurement], Sequence[GroundTruthSample], TruthTrack, EstimateSeries]


def as_estimates(est: EstimateLike) -> EstimateSeries:
    """Normalize tracks, measurement lists and truth series to an EstimateSeries."""
    if isinstance(est, EstimateSeries):
        return est
    if isinstance(est, TruthTrack):
        n = est.times.size
        return EstimateSeries(est.times.copy(), est.positions.copy(), np.full(n, 3), (None,) * n)

    items = list(est)
    times = np.array([_timestamp(item) for item in items], dtype=float)
    positions = np.full((len(items), 3), np.nan)
    dims = np.full(len(items), 3)
    kinds: List[Optional[str]] = []
    for row, item in enumerate(items):
        if isinstance(item, TrackPoint):
            positions[row] = item.position
            kinds.append(item.kind.value)
        elif isinstance(item, Measurement):
            positions[row, : item.modality.dim] = item.vector
            dims[row] = item.modality.dim
            kinds.append(None)
        elif isinstance(item, GroundTruthSample):
            positions[row] = item.position.as_array()
            kinds.append(None)
        else:
            raise InputDomainError(f"cannot score object of type {type(item).__name__}")
    return EstimateSeries(times, positions, dims, tuple(kinds))


def _timestamp(item) -> float:
    return float(item.timestamp)


@dataclass(frozen=True)
class ErrorSeries:
    """Per-estimate position errors for the estimates inside the truth span."""

    times: np.ndarray
    errors: np.ndarray
    kinds: Tuple[Optional[str], ...]
    truth_positions: np.ndarray
    excluded_count: int = 0


def position_errors(
    est: EstimateLike,
    gt: TruthLike,
    mode: ScoringMode = ScoringMode.AUTO,
) -> ErrorSeries:
    """
    Euclidean error of each estimate against interpolated truth.

    Args:
        est: Estimates (track, measurement list, ...)
        gt: Ground-truth series
        mode: AUTO scores 2D sources in 2D; HORIZONTAL_2D forces 2D; FULL_3D
            scores 3D sources in 3D (2D sources can only be scored in 2D)

    Returns:
        ErrorSeries; estimates outside the truth span are excluded and counted
    """
    series = as_estimates(est)
    truth = as_truth_track(gt)
    mode = ScoringMode(mode)
    inside = truth.contains(series.times)
    times = series.times[inside]
    positions = series.positions[inside]
    dims = series.dims[inside]
    kinds = tuple(k for k, keep in zip(series.kinds, inside) if keep)
    truth_positions = truth.positions_at(times) if times.size else np.empty((0, 3))

    delta = positions - truth_positions
    horizontal = np.hypot(delta[:, 0], delta[:, 1])
    full = np.sqrt(np.sum(delta ** 2, axis=1)) if delta.size else np.empty(0)
    use_2d = (dims == 2) | (mode is ScoringMode.HORIZONTAL_2D)
    errors = np.where(use_2d, horizontal, full)
    return ErrorSeries(
        times=times,
        errors=errors,
        kinds=kinds,
        truth_positions=truth_positions,
        excluded_count=int(np.count_nonzero(~inside)),
    )


def summarize(errors: Sequence[float]) -> ErrorSummary:
    """Min/max/mean and sample std (1/(N-1); 0 for a single value)."""
    values = np.asarray(errors, dtype=float)
    if values.size == 0:
        raise EmptyReportError("no errors to summarize")
    std = float(np.std(values, ddof=1)) if values.size > 1 else 0.0
    return ErrorSummary(
        count=int(values.size),
        min_m=float(values.min()),
        max_m=float(values.max()),
        mean_m=float(values.mean()),
        std_m=std,
    )


def error_stats(
    est: EstimateLike,
    gt: TruthLike,
    mode: ScoringMode = ScoringMode.AUTO,
    bin_s: float = DEFAULT_BIN_S,
) -> ErrorReport:
    """
    Error statistics, coverage and per-kind breakdown of an estimate series.

    Args:
        est: Estimates to score
        gt: Ground-truth series
        mode: Scoring mode
        bin_s: Coverage bin width, seconds

    Returns:
        ErrorReport
    """
    truth = as_truth_track(gt)
    series = position_errors(est, truth, mode)
    if series.errors.size == 0:
        raise EmptyReportError(f"none of the {series.excluded_count} estimates overlap the ground-truth span")

    by_kind: Dict[str, ErrorSummary] = {}
    for kind in sorted({k for k in series.kinds if k is not None}):
        mask = np.array([k == kind for k in series.kinds])
        by_kind[kind] = summarize(series.errors[mask])

    overall = summarize(series.errors)
    return ErrorReport(
        **overall.model_dump(),
        mode=ScoringMode(mode).value,
        coverage_pct=coverage(series.times, truth.span, bin_s),
        coverage_bin_s=bin_s,
        excluded_count=series.excluded_count,
        by_kind=by_kind,
    )


def coverage(times: Sequence[float], span: Tuple[float, float], bin_s: float = DEFAULT_BIN_S) -> float:
    """
    Percentage of bin_s-wide bins over span holding at least one timestamp.

    The last bin may be shorter than bin_s; timestamps outside the span
    are ignored.
    """
    t0, t1 = float(span[0]), float(span[1])
    if not t1 > t0:
        raise InputDomainError(f"coverage span must have t1 > t0, got {span}")
    if not bin_s > 0:
        raise InputDomainError(f"bin width must be positive, got {bin_s}")

    n_bins = max(1, math.ceil((t1 - t0) / bin_s - 1e-9))
    t = np.asarray(times, dtype=float)
    t = t[(t >= t0) & (t <= t1)]
    if t.size == 0:
        return 0.0
    index = np.minimum(np.floor((t - t0) / bin_s).astype(int), n_bins - 1)
    return 100.0 * np.unique(index).size / n_bins


def empirical_cdf(errors: Sequence[float]) -> List[Tuple[float, float]]:
    """Step CDF as (value, k/N) pairs at the sorted values."""
    values = np.sort(np.asarray(errors, dtype=float))
    if values.size == 0:
        raise InputDomainError("empirical CDF needs at least one value")
    n = values.size
    return [(float(v), (k + 1) / n) for k, v in enumerate(values)]


def cdf_quantile(cdf: Sequence[Tuple[float, float]], q: float) -> float:
    """Smallest value whose CDF fraction reaches q."""
    if not 0.0 < q <= 1.0:
        raise InputDomainError(f"quantile must lie in (0, 1], got {q}")
    for value, fraction in cdf:
        if fraction >= q - 1e-12:
            return value
    return cdf[-1][0]


def nees_band(dof: int, runs: int = 1, confidence: float = 0.95) -> Tuple[float, float]:
    """Two-sided chi-squared interval for a NEES averaged over runs."""
    tail = (1.0 - confidence) / 2.0
    low, high = chi2.ppf([tail, 1.0 - tail], dof * runs) / runs
    return float(low), float(high)


def position_nees(error: np.ndarray, covariance: np.ndarray) -> Optional[float]:
    """e' P^-1 e, or None when P is singular."""
    covariance = np.asarray(covariance, dtype=float)
    cond = np.linalg.cond(covariance)
    if not np.isfinite(cond) or 1.0 / cond < MIN_RECIPROCAL_CONDITION:
        return None
    e = np.asarray(error, dtype=float)
    return float(e @ np.linalg.solve(covariance, e))


@dataclass(frozen=True)
class ConsistencyResult:
    times: np.ndarray
    nees: np.ndarray
    summary: ConsistencySummary


def consistency_report(
    track: Union[FusedTrack, Sequence[TrackPoint]],
    gt: TruthLike,
    confidence: float = 0.95,
) -> ConsistencyResult:
    """
    Per-step position NEES against ground truth.

    Steps with a singular position covariance are flagged, carry NaN and
    are left out of the summary.

    Args:
        track: Fused track with covariances
        gt: Ground-truth series
        confidence: Width of the chi-squared band (3 dof)

    Returns:
        ConsistencyResult
    """
    truth = as_truth_track(gt)
    points = [p for p in track if truth.contains(p.timestamp)]
    if any(p.covariance is None for p in points):
        raise InputDomainError("consistency report needs a covariance for every estimate")

    times = np.array([p.timestamp for p in points], dtype=float)
    truth_positions = truth.positions_at(times) if points else np.empty((0, 3))
    nees = np.full(len(points), np.nan)
    for row, point in enumerate(points):
        value = position_nees(point.position - truth_positions[row], point.covariance[0:3, 0:3])
        if value is not None:
            nees[row] = value

    valid = nees[np.isfinite(nees)]
    band = nees_band(3, 1, confidence)
    flagged = int(np.count_nonzero(~np.isfinite(nees)))
    if flagged:
        logger.warning("%d steps with singular position covariance excluded from NEES", flagged)
    summary = ConsistencySummary(
        count=int(valid.size),
        flagged_count=flagged,
        mean_nees=float(valid.mean()) if valid.size else None,
        band=band,
        fraction_inside_band=float(np.mean((valid >= band[0]) & (valid <= band[1]))) if valid.size else None,
    )
    return ConsistencyResult(times=times, nees=nees, summary=summary)


@dataclass(frozen=True)
class RangeBin:
    range_lo_m: float
    range_hi_m: float
    count: int
    mean_m: Optional[float]
    std_m: Optional[float]


def range_binned_errors(
    est: EstimateLike,
    gt: TruthLike,
    origin: EnuPosition,
    bin_m: float = 100.0,
    mode: ScoringMode = ScoringMode.AUTO,
) -> List[RangeBin]:
    """
    Errors grouped by the true 3D distance from a sensor origin.

    Args:
        est: Estimates to score
        gt: Ground-truth series
        origin: Sensor position the range is measured from
        bin_m: Range bin width, meters
        mode: Scoring mode

    Returns:
        One RangeBin per bin from zero up to the largest range seen
    """
    if not bin_m > 0:
        raise InputDomainError(f"range bin width must be positive, got {bin_m}")
    series = position_errors(est, gt, mode)
    if series.errors.size == 0:
        raise EmptyReportError("no estimates overlap the ground-truth span")

    ranges = np.linalg.norm(series.truth_positions - origin.as_array(), axis=1)
    index = np.floor(ranges / bin_m).astype(int)
    bins = []
    for b in range(int(index.max()) + 1):
        values = series.errors[index == b]
        bins.append(
            RangeBin(
                range_lo_m=b * bin_m,
                range_hi_m=(b + 1) * bin_m,
                count=int(values.size),
                mean_m=float(values.mean()) if values.size else None,
                std_m=float(np.std(values, ddof=1)) if values.size > 1 else (0.0 if values.size else None),
            )
        )
    return bins


def error_series(
    est: EstimateLike,
    gt: TruthLike,
    mode: ScoringMode = ScoringMode.AUTO,
) -> List[Tuple[float, float, Optional[str]]]:
    """(timestamp, error, kind) rows in estimate order."""
    series = position_errors(est, gt, mode)
    return [(float(t), float(e), k) for t, e, k in zip(series.times, series.errors, series.kinds)]

