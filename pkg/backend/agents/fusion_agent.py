"""
Fusion Agent - Runs the radar/RF tracking pipeline
"""
from typing import Any, Dict, Sequence

from .base_agent import BaseAgent
from ..models.fusion_config import FusionConfig
from ..models.measurement import Measurement
from ..storage.artifact_store import ArtifactStore
from ..storage.csv_io import write_measurements, write_track
from ..tracking.fusion import FusionResult, run_fusion


class FusionAgent(BaseAgent):
    """
    Fuses radar and RF series in one of three modes:
    - fused: both streams
    - radar-only / rf-only: the same pipeline fed a single stream
    """

    def __init__(self, agent_id: str = "fusion_1"):
        super().__init__(
            name=f"Fusion_{agent_id}",
            description="Kalman fusion of radar and RF measurements"
        )
        self.agent_id = agent_id

    async def execute(self, context: Dict[str, Any]) -> Dict[str, Any]:
        """Fuse and, when a store is given, write the track and report."""
        result = await self.run_blocking(
            self.fuse,
            context.get("radar", []),
            context.get("rf", []),
            context["config"],
            context.get("mode", "fused"),
        )
        store = context.get("store")
        files = self.write(result, store) if store is not None else {}
        return {"result": result, "report": result.report, "files": files}

    def fuse(
        self,
        radar: Sequence[Measurement],
        rf: Sequence[Measurement],
        config: FusionConfig,
        mode: str = "fused",
    ) -> FusionResult:
        """
        Run the pipeline.

        Args:
            radar: Time-sorted radar measurements
            rf: Time-sorted RF measurements
            config: Fusion configuration
            mode: fused, radar-only or rf-only

        Returns:
            FusionResult
        """
        result = run_fusion(radar, rf, config, mode)
        report = result.report
        self.log_debug(f"{mode}: {report.updated} updated, {report.coasted} coasted of {report.survivors} survivors")
        return result

    def write(self, result: FusionResult, store: ArtifactStore, accepted: bool = False) -> Dict[str, str]:
        """Write track.csv, track_covariance.csv and report.json (and accepted.csv on request)."""
        write_track(store.path("track.csv"), result.track, store.path("track_covariance.csv"))
        files = {
            "track": store.register("track.csv", "track"),
            "covariance": store.register("track_covariance.csv", "track_covariance"),
            "report": store.save_json("report", result.report),
        }
        if accepted:
            write_measurements(store.path("accepted.csv"), result.accepted)
            files["accepted"] = store.register("accepted.csv", "measurements")
        return files
