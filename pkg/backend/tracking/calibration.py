"""
Ground-truth alignment and empirical measurement-covariance estimation.
"""
import logging
from dataclasses import dataclass
from typing import List, Sequence, Tuple, Union

import numpy as np

from ..models.geometry import EnuPosition
from ..models.measurement import GroundTruthSample, Measurement, Modality
from ..models.report import CalibrationResult
from ..utils.errors import CalibrationError, InputDomainError, OutOfRangeError

logger = logging.getLogger(__name__)

MAD_TO_SIGMA = 1.4826
ROBUST_CUTOFF = 3.0
# axes whose MAD-based sigma is below this carry no usable spread and are not cut
MIN_ROBUST_SCALE_M = 1e-6


class TruthTrack:
    """
    Array view of a ground-truth series supporting linear interpolation.

    Timestamps must be strictly increasing and there must be at least two
    samples.
    """

    def __init__(self, times: np.ndarray, positions: np.ndarray):
        times = np.asarray(times, dtype=float)
        positions = np.asarray(positions, dtype=float)
        if times.ndim != 1 or positions.shape != (times.size, 3):
            raise InputDomainError("ground truth needs N timestamps and N x 3 positions")
        if times.size < 2:
            raise InputDomainError("ground truth needs at least two samples")
        if np.any(np.diff(times) <= 0):
            raise InputDomainError("ground-truth timestamps must be strictly increasing")
        self.times = times
        self.positions = positions

    @classmethod
    def from_samples(cls, samples: Sequence[GroundTruthSample]) -> "TruthTrack":
        times = np.array([s.timestamp for s in samples], dtype=float)
        positions = np.array([s.position.as_tuple() for s in samples], dtype=float).reshape(-1, 3)
        return cls(times, positions)

    @property
    def span(self) -> Tuple[float, float]:
        return float(self.times[0]), float(self.times[-1])

    def contains(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        return (t >= self.times[0]) & (t <= self.times[-1])

    def positions_at(self, t) -> np.ndarray:
        """Interpolated positions for an array of times inside the span."""
        t = np.atleast_1d(np.asarray(t, dtype=float))
        if not np.all(self.contains(t)):
            raise OutOfRangeError(f"time outside ground-truth span {self.span}")
        return np.column_stack([np.interp(t, self.times, self.positions[:, k]) for k in range(3)])

    def to_samples(self) -> List[GroundTruthSample]:
        return [
            GroundTruthSample(timestamp=float(t), position=EnuPosition.from_array(p))
            for t, p in zip(self.times, self.positions)
        ]


TruthLike = Union[TruthTrack, Sequence[GroundTruthSample]]


def as_truth_track(gt: TruthLike) -> TruthTrack:
    if isinstance(gt, TruthTrack):
        return gt
    return TruthTrack.from_samples(gt)


def align_ground_truth(gt: TruthLike, t: float) -> EnuPosition:
    """
    Linearly interpolate ground truth at time t.

    Args:
        gt: Ground-truth series (at least two samples)
        t: Query time inside the series span

    Returns:
        Interpolated ENU position
    """
    track = as_truth_track(gt)
    return EnuPosition.from_array(track.positions_at(t)[0])


@dataclass(frozen=True)
class ResidualSet:
    modality: Modality
    residuals: np.ndarray
    excluded_count: int = 0


def compute_residuals(ms: Sequence[Measurement], gt: TruthLike) -> ResidualSet:
    """Measurement minus interpolated truth; measurements outside the truth span are excluded."""
    modalities = {m.modality for m in ms}
    if len(modalities) > 1:
        raise InputDomainError("residuals must be computed for one modality at a time")
    if not ms:
        raise CalibrationError("no measurements to calibrate")
    modality = modalities.pop()
    track = as_truth_track(gt)

    times = np.array([m.timestamp for m in ms], dtype=float)
    inside = track.contains(times)
    values = np.array([m.position for m in ms], dtype=float)[inside]
    truth = track.positions_at(times[inside])[:, : modality.dim] if np.any(inside) else np.empty((0, modality.dim))
    return ResidualSet(
        modality=modality,
        residuals=values - truth,
        excluded_count=int(np.count_nonzero(~inside)),
    )


def _robust_inliers(residuals: np.ndarray) -> np.ndarray:
    median = np.median(residuals, axis=0)
    deviation = np.abs(residuals - median)
    scale = MAD_TO_SIGMA * np.median(deviation, axis=0)
    usable = scale >= MIN_ROBUST_SCALE_M
    return np.all((deviation <= ROBUST_CUTOFF * scale) | ~usable, axis=1)


def estimate_measurement_covariance(
    ms: Sequence[Measurement],
    gt: TruthLike,
    robust: bool = False,
) -> np.ndarray:
    """
    Sample covariance (1/(N-1), mean removed) of measurement residuals.

    Args:
        ms: Measurements of a single modality
        gt: Ground-truth series
        robust: Keep only residuals within 3 MAD-scaled sigmas of the median first

    Returns:
        2x2 (RF) or 3x3 (radar) covariance, m^2
    """
    return calibrate_modality(ms, gt, robust=robust).covariance_matrix


@dataclass(frozen=True)
class ModalityCalibration:
    covariance_matrix: np.ndarray
    bias: np.ndarray
    sample_count: int
    excluded_count: int
    modality: Modality
    robust: bool

    def to_result(self) -> CalibrationResult:
        return CalibrationResult(
            modality=self.modality.value,
            covariance=self.covariance_matrix.tolist(),
            bias=self.bias.tolist(),
            sample_count=self.sample_count,
            excluded_count=self.excluded_count,
            robust=self.robust,
        )


def calibrate_modality(ms: Sequence[Measurement], gt: TruthLike, robust: bool = False) -> ModalityCalibration:
    """Covariance, residual bias and sample accounting for one modality."""
    residual_set = compute_residuals(ms, gt)
    residuals = residual_set.residuals
    excluded = residual_set.excluded_count
    if robust and len(residuals):
        keep = _robust_inliers(residuals)
        excluded += int(np.count_nonzero(~keep))
        residuals = residuals[keep]

    dim = residual_set.modality.dim
    if len(residuals) < dim + 1:
        raise CalibrationError(
            f"{residual_set.modality.value}: need at least {dim + 1} alignable measurements, got {len(residuals)}"
        )
    covariance = np.atleast_2d(np.cov(residuals, rowvar=False, ddof=1))
    covariance = 0.5 * (covariance + covariance.T)
    bias = residuals.mean(axis=0)
    logger.info(
        "calibrated %s from %d residuals (%d excluded), bias=%s",
        residual_set.modality.value, len(residuals), excluded, np.round(bias, 3).tolist(),
    )
    return ModalityCalibration(
        covariance_matrix=covariance,
        bias=bias,
        sample_count=len(residuals),
        excluded_count=excluded,
        modality=residual_set.modality,
        robust=robust,
    )
