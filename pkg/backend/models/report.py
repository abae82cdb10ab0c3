"""
Report Data Models
"""
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, Field


class ErrorSummary(BaseModel):
    """Position error statistics over a set of estimates."""

    count: int
    min_m: float
    max_m: float
    mean_m: float
    std_m: float


class ErrorReport(ErrorSummary):
    """Error statistics plus coverage and a per-kind breakdown."""

    mode: str
    coverage_pct: float = Field(..., ge=0, le=100)
    coverage_bin_s: float
    excluded_count: int = 0
    by_kind: Dict[str, ErrorSummary] = Field(default_factory=dict)


class ModalityCounts(BaseModel):
    """Per-modality accounting of one fusion run."""

    raw: int = 0
    track_rejected: int = 0
    range_rejected: int = 0
    nis_rejected: int = 0
    updated: int = 0
    acceptance_rate: float = 0.0


class RunReport(BaseModel):
    """Accounting of one fusion run."""

    mode: str
    raw_count: int
    track_rejected: int
    range_rejected: int
    nis_rejected: int
    updated: int
    coasted: int
    survivors: int
    by_modality: Dict[str, ModalityCounts] = Field(default_factory=dict)
    selected_track_id: Optional[int] = None
    mean_nis: Optional[float] = None
    runtime_ms: float = 0.0


class SimulationReport(BaseModel):
    """What the simulator produced and what it dropped."""

    rng_seed: int
    duration_s: float
    gt_samples: int
    radar_samples: int
    radar_detections: int
    radar_out_of_coverage: int
    radar_skipped: int
    radar_track_ids: List[int] = Field(default_factory=list)
    rf_attempts: int
    rf_dropouts: int
    rf_solver_failures: int
    rf_outliers: int
    rf_fixes: int


class CalibrationResult(BaseModel):
    """Empirical measurement covariance of one modality."""

    modality: str
    covariance: List[List[float]]
    bias: List[float]
    sample_count: int
    excluded_count: int
    robust: bool = False


class ConsistencySummary(BaseModel):
    """Position-NEES summary against ground truth."""

    count: int
    flagged_count: int
    mean_nees: Optional[float] = None
    band: Tuple[float, float]
    fraction_inside_band: Optional[float] = None


class ErrorTableRow(BaseModel):
    """One row of the position-error table."""

    name: str
    scoring: str
    count: int
    min_m: Optional[float] = None
    max_m: Optional[float] = None
    mean_m: Optional[float] = None
    std_m: Optional[float] = None
    coverage_pct: float = 0.0


class EvaluationReport(BaseModel):
    """Output of the evaluate subcommand."""

    report_id: str
    generated_at: str
    track_path: Optional[str] = None
    truth_path: Optional[str] = None
    errors: ErrorReport
    consistency: Optional[ConsistencySummary] = None
    counts: Dict[str, int] = Field(default_factory=dict)


class BenchmarkReport(BaseModel):
    """Monte Carlo summary over a range of seeds."""

    report_id: str
    generated_at: str
    seeds: List[int]
    failed_seeds: Dict[int, str] = Field(default_factory=dict)
    per_seed: Dict[int, List[ErrorTableRow]] = Field(default_factory=dict)
    averages: List[ErrorTableRow] = Field(default_factory=list)
    coasted_to_updated_ratio: Optional[float] = None
