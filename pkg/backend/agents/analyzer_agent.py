"""
Analyzer Agent - Scores tracks against ground truth and generates reports
"""
import uuid
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from .base_agent import BaseAgent
from ..config import settings
from ..models.geometry import EnuPosition
from ..models.measurement import GroundTruthSample, Measurement
from ..models.report import ErrorTableRow, EvaluationReport
from ..storage.artifact_store import ArtifactStore
from ..storage.csv_io import (
    CDF_COLUMNS,
    ERROR_SERIES_COLUMNS,
    RANGE_BIN_COLUMNS,
    write_rows,
)
from ..tracking.calibration import TruthTrack
from ..tracking.fusion import FusedTrack
from ..tracking.kalman_filter import UpdateKind
from ..tracking.metrics import (
    ScoringMode,
    consistency_report,
    coverage,
    empirical_cdf,
    error_series,
    error_stats,
    position_errors,
    range_binned_errors,
    summarize,
)
from ..utils.helpers import timestamp_now

RADAR_RAW = "radar_raw"
RF_RAW = "rf_raw"
RADAR_VALIDATED = "radar_validated"
RF_VALIDATED = "rf_validated"
KF_FUSED = "kf_fused"
KF_UPDATED = "kf_updated"
KF_COASTED = "kf_coasted"
TABLE_ROWS = (RADAR_RAW, RF_RAW, RADAR_VALIDATED, RF_VALIDATED, KF_FUSED, KF_UPDATED, KF_COASTED)


@dataclass
class Evaluation:
    report: EvaluationReport
    cdf: List[tuple]
    series: List[tuple]


class AnalyzerAgent(BaseAgent):
    """
    Scores estimates against ground truth.
    Provides:
    - Error statistics and coverage for a single track
    - NEES consistency when covariances are available
    - CDF, error-vs-time and error-vs-range data files
    - The position-error table across raw, validated and fused series
    """

    def __init__(self):
        super().__init__(
            name="Analyzer",
            description="Scores tracks and generates reports"
        )

    async def execute(self, context: Dict[str, Any]) -> Dict[str, Any]:
        """Evaluate a track and store report.json and cdf.csv."""
        evaluation = await self.run_blocking(
            self.evaluate,
            context["track"],
            context["truth"],
            context.get("mode", ScoringMode.AUTO),
            context.get("bin_s", settings.DEFAULT_COVERAGE_BIN_S),
        )
        store: Optional[ArtifactStore] = context.get("store")
        files = {}
        if store is not None:
            files = self.write(
                evaluation,
                store,
                context["track"],
                context["truth"],
                context.get("radar_origin"),
                context.get("mode", ScoringMode.AUTO),
            )
        return {"report": evaluation.report, "files": files}

    def evaluate(
        self,
        track: FusedTrack,
        truth: Sequence[GroundTruthSample],
        mode: ScoringMode = ScoringMode.AUTO,
        bin_s: float = settings.DEFAULT_COVERAGE_BIN_S,
        track_path: Optional[str] = None,
        truth_path: Optional[str] = None,
    ) -> Evaluation:
        """
        Score one track.

        Args:
            track: Fused (or single-modality) track
            truth: Ground truth
            mode: Scoring mode
            bin_s: Coverage bin width
            track_path: Recorded in the report
            truth_path: Recorded in the report

        Returns:
            Evaluation with the report, CDF pairs and per-estimate errors
        """
        gt = TruthTrack.from_samples(truth)
        errors = error_stats(track, gt, mode, bin_s)
        series = error_series(track, gt, mode)

        consistency = None
        if len(track) and all(p.covariance is not None for p in track):
            consistency = consistency_report(track, gt).summary

        report = EvaluationReport(
            report_id=f"report_{uuid.uuid4().hex[:8]}",
            generated_at=timestamp_now(),
            track_path=track_path,
            truth_path=truth_path,
            errors=errors,
            consistency=consistency,
            counts={
                "estimates": len(track),
                UpdateKind.UPDATED.value: track.count(UpdateKind.UPDATED),
                UpdateKind.COASTED.value: track.count(UpdateKind.COASTED),
            },
        )
        self.log_info(
            f"mean error {errors.mean_m:.2f} m over {errors.count} estimates, coverage {errors.coverage_pct:.1f}%"
        )
        return Evaluation(report=report, cdf=empirical_cdf([e for _, e, _ in series]), series=series)

    def write(
        self,
        evaluation: Evaluation,
        store: ArtifactStore,
        track: Optional[FusedTrack] = None,
        truth: Optional[Sequence[GroundTruthSample]] = None,
        radar_origin: Optional[EnuPosition] = None,
        mode: ScoringMode = ScoringMode.AUTO,
    ) -> Dict[str, str]:
        """Write report.json, cdf.csv, error_series.csv and, given a radar origin, error_vs_range.csv."""
        write_rows(store.path("cdf.csv"), CDF_COLUMNS, evaluation.cdf)
        write_rows(store.path("error_series.csv"), ERROR_SERIES_COLUMNS, evaluation.series)
        files = {
            "report": store.save_json("report", evaluation.report),
            "cdf": store.register("cdf.csv", "cdf"),
            "error_series": store.register("error_series.csv", "error_series"),
        }
        if radar_origin is not None and track is not None and truth is not None:
            bins = range_binned_errors(track, TruthTrack.from_samples(truth), radar_origin, mode=mode)
            write_rows(
                store.path("error_vs_range.csv"),
                RANGE_BIN_COLUMNS,
                [(b.range_lo_m, b.range_hi_m, b.count, b.mean_m, b.std_m) for b in bins],
            )
            files["error_vs_range"] = store.register("error_vs_range.csv", "error_vs_range")
        return files

    def error_table(
        self,
        truth: Sequence[GroundTruthSample],
        radar_raw: Sequence[Measurement],
        rf_raw: Sequence[Measurement],
        radar_validated: Sequence[Measurement],
        rf_validated: Sequence[Measurement],
        fused: FusedTrack,
        horizontal: bool = False,
        bin_s: float = settings.DEFAULT_COVERAGE_BIN_S,
    ) -> List[ErrorTableRow]:
        """
        Position-error table across raw, validated and fused series.

        RF rows are always scored in 2D; the others in 3D unless
        horizontal is set.

        Args:
            truth: Ground truth
            radar_raw: Radar measurements before any gating
            rf_raw: RF measurements before any gating
            radar_validated: Radar measurements accepted by a radar-only run
            rf_validated: RF measurements accepted by an rf-only run
            fused: Fused track
            horizontal: Score every row in 2D
            bin_s: Coverage bin width

        Returns:
            Rows in TABLE_ROWS order
        """
        gt = TruthTrack.from_samples(truth)
        mode = ScoringMode.HORIZONTAL_2D if horizontal else ScoringMode.AUTO
        updated = [p for p in fused if p.kind is UpdateKind.UPDATED]
        coasted = [p for p in fused if p.kind is UpdateKind.COASTED]
        series = {
            RADAR_RAW: radar_raw,
            RF_RAW: rf_raw,
            RADAR_VALIDATED: radar_validated,
            RF_VALIDATED: rf_validated,
            KF_FUSED: list(fused),
            KF_UPDATED: updated,
            KF_COASTED: coasted,
        }
        rows = []
        for name in TABLE_ROWS:
            scoring = "2D" if horizontal or name in (RF_RAW, RF_VALIDATED) else "3D"
            rows.append(self._table_row(name, scoring, series[name], gt, mode, bin_s))
        return rows

    def _table_row(self, name: str, scoring: str, estimates, gt: TruthTrack, mode: ScoringMode, bin_s: float) -> ErrorTableRow:
        if not len(estimates):
            return ErrorTableRow(name=name, scoring=scoring, count=0)
        errors = position_errors(estimates, gt, mode)
        if errors.errors.size == 0:
            return ErrorTableRow(name=name, scoring=scoring, count=0)
        summary = summarize(errors.errors)
        return ErrorTableRow(
            name=name,
            scoring=scoring,
            count=summary.count,
            min_m=summary.min_m,
            max_m=summary.max_m,
            mean_m=summary.mean_m,
            std_m=summary.std_m,
            coverage_pct=coverage(errors.times, gt.span, bin_s),
        )


def average_rows(tables: Sequence[Sequence[ErrorTableRow]]) -> List[ErrorTableRow]:
    """Average each statistic of same-named rows, skipping empty rows."""
    averaged = []
    if not tables:
        return averaged
    for template in tables[0]:
        rows = [row for table in tables for row in table if row.name == template.name]
        filled = [row for row in rows if row.count > 0]

        def mean_of(attr: str) -> Optional[float]:
            return float(np.mean([getattr(r, attr) for r in filled])) if filled else None

        averaged.append(
            ErrorTableRow(
                name=template.name,
                scoring=template.scoring,
                count=int(round(np.mean([r.count for r in rows]))),
                min_m=mean_of("min_m"),
                max_m=mean_of("max_m"),
                mean_m=mean_of("mean_m"),
                std_m=mean_of("std_m"),
                coverage_pct=float(np.mean([r.coverage_pct for r in rows])),
            )
        )
    return averaged
