"""Tracking package"""
from .geo import geodetic_to_ecef, ecef_to_geodetic, geodetic_to_enu, geodetic_array_to_enu, enu_to_geodetic
from .motion_model import STATE_DIM, cv_transition, process_noise, measurement_matrix
from .kalman_filter import (
    FilterState,
    UpdateKind,
    GateDecision,
    UpdateOutcome,
    predict,
    update,
    initialize,
    nis,
    gate,
    chi2_threshold,
)
from .calibration import (
    TruthTrack,
    align_ground_truth,
    estimate_measurement_covariance,
    calibrate_modality,
)
from .fusion import TrackPoint, FusedTrack, FusionResult, select_largest_track, range_gate, run_fusion
from .metrics import (
    ScoringMode,
    error_stats,
    coverage,
    empirical_cdf,
    cdf_quantile,
    consistency_report,
    range_binned_errors,
    error_series,
)

__all__ = [
    "geodetic_to_ecef",
    "ecef_to_geodetic",
    "geodetic_to_enu",
    "geodetic_array_to_enu",
    "enu_to_geodetic",
    "STATE_DIM",
    "cv_transition",
    "process_noise",
    "measurement_matrix",
    "FilterState",
    "UpdateKind",
    "GateDecision",
    "UpdateOutcome",
    "predict",
    "update",
    "initialize",
    "nis",
    "gate",
    "chi2_threshold",
    "TruthTrack",
    "align_ground_truth",
    "estimate_measurement_covariance",
    "calibrate_modality",
    "TrackPoint",
    "FusedTrack",
    "FusionResult",
    "select_largest_track",
    "range_gate",
    "run_fusion",
    "ScoringMode",
    "error_stats",
    "coverage",
    "empirical_cdf",
    "cdf_quantile",
    "consistency_report",
    "range_binned_errors",
    "error_series",
]
