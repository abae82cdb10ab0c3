"""
Calibrator Agent - Estimates measurement covariances from truth residuals
"""
from typing import Any, Dict, Optional, Sequence, Tuple

import numpy as np

from .base_agent import BaseAgent
from ..models.fusion_config import FusionConfig
from ..models.measurement import GroundTruthSample, Measurement, Modality
from ..models.report import CalibrationResult
from ..storage.artifact_store import ArtifactStore
from ..tracking.calibration import TruthTrack, calibrate_modality

# Smallest eigenvalue written into a calibrated covariance; keeps noiseless
# calibrations loadable as a positive-definite FusionConfig.
MIN_EIGENVALUE_M2 = 1e-9


def regularize_covariance(covariance: np.ndarray, floor: float = MIN_EIGENVALUE_M2) -> np.ndarray:
    """Lift the spectrum of a symmetric matrix so its smallest eigenvalue is at least floor."""
    smallest = float(np.linalg.eigvalsh(covariance).min())
    if smallest >= floor:
        return covariance
    return covariance + (floor - smallest) * np.eye(covariance.shape[0])


class CalibratorAgent(BaseAgent):
    """
    Produces a FusionConfig whose r_radar and r_rf are the empirical
    residual covariances, plus a bias report per modality.
    """

    def __init__(self):
        super().__init__(
            name="Calibrator",
            description="Estimates sensor noise covariances against ground truth"
        )

    async def execute(self, context: Dict[str, Any]) -> Dict[str, Any]:
        """Calibrate and store the resulting config and report."""
        config, results = await self.run_blocking(
            self.calibrate,
            context["radar"],
            context["rf"],
            context["truth"],
            context.get("base_config"),
            context.get("robust", False),
        )
        store: Optional[ArtifactStore] = context.get("store")
        files = self.write(config, results, store) if store is not None else {}
        return {"config": config, "calibration": results, "files": files}

    def calibrate(
        self,
        radar: Sequence[Measurement],
        rf: Sequence[Measurement],
        truth: Sequence[GroundTruthSample],
        base_config: Optional[FusionConfig] = None,
        robust: bool = False,
    ) -> Tuple[FusionConfig, Dict[str, CalibrationResult]]:
        """
        Calibrate both modalities.

        Args:
            radar: Radar measurements
            rf: RF measurements
            truth: Ground truth
            base_config: Config whose other fields are kept
            robust: Use MAD-based inlier selection before the covariance

        Returns:
            Tuple of (calibrated config, per-modality calibration results)
        """
        base_config = base_config or FusionConfig()
        track = TruthTrack.from_samples(truth)
        radar_cal = calibrate_modality(radar, track, robust=robust)
        rf_cal = calibrate_modality(rf, track, robust=robust)

        for name, cal in ((Modality.RADAR_3D.value, radar_cal), (Modality.RF_2D.value, rf_cal)):
            if np.linalg.eigvalsh(cal.covariance_matrix).min() < MIN_EIGENVALUE_M2:
                self.log_warning(f"{name} covariance is near singular, flooring eigenvalues at {MIN_EIGENVALUE_M2:g} m^2")
        noise = base_config.noise.model_copy(update={
            "r_radar": regularize_covariance(radar_cal.covariance_matrix).tolist(),
            "r_rf": regularize_covariance(rf_cal.covariance_matrix).tolist(),
        })
        # revalidate so the stored matrices pass the same checks as a loaded file
        config = FusionConfig.model_validate({**base_config.model_dump(), "noise": noise.model_dump()})
        results = {
            Modality.RADAR_3D.value: radar_cal.to_result(),
            Modality.RF_2D.value: rf_cal.to_result(),
        }
        self.log_info(
            f"radar sigma diag={np.sqrt(np.diag(radar_cal.covariance_matrix)).round(2).tolist()} m, "
            f"rf sigma diag={np.sqrt(np.diag(rf_cal.covariance_matrix)).round(2).tolist()} m"
        )
        return config, results

    def write(
        self,
        config: FusionConfig,
        results: Dict[str, CalibrationResult],
        store: ArtifactStore,
    ) -> Dict[str, str]:
        config.save(store.path("fusion_config.json"))
        return {
            "config": store.register("fusion_config.json", "config"),
            "calibration": store.save_json(
                "calibration_report", {name: r.model_dump() for name, r in results.items()}
            ),
        }
