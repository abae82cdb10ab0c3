"""
Orchestrator Agent - Coordinates seeded Monte Carlo benchmark runs
"""
import asyncio
import uuid
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence

from .base_agent import BaseAgent
from .simulator_agent import SimulatorAgent
from .fusion_agent import FusionAgent
from .analyzer_agent import AnalyzerAgent, KF_COASTED, KF_UPDATED, average_rows
from ..config import settings
from ..models.fusion_config import FusionConfig
from ..models.report import BenchmarkReport, ErrorTableRow, RunReport
from ..models.scenario import SensorScenario
from ..utils.errors import FusionToolkitError
from ..utils.helpers import timestamp_now


@dataclass
class SeedResult:
    seed: int
    rows: List[ErrorTableRow]
    reports: Dict[str, RunReport]


class OrchestratorAgent(BaseAgent):
    """
    Orchestrates the benchmark workflow:
    - Simulates each seed of a scenario
    - Fuses it radar-only, rf-only and fused
    - Builds the per-seed error table and averages it
    - Runs seeds concurrently in a bounded worker pool
    """

    def __init__(self, num_workers: Optional[int] = None):
        super().__init__(
            name="Orchestrator",
            description="Coordinates Monte Carlo benchmark runs"
        )
        self.num_workers = num_workers or settings.MONTE_CARLO_WORKERS
        self.simulator = SimulatorAgent()
        self.fusion = FusionAgent(agent_id="benchmark")
        self.analyzer = AnalyzerAgent()

    async def execute(self, context: Dict[str, Any]) -> Dict[str, Any]:
        """Execute a benchmark."""
        report = await self.run_benchmark(
            scenario=context["scenario"],
            config=context["config"],
            seeds=context["seeds"],
            horizontal=context.get("horizontal", False),
            bin_s=context.get("bin_s", settings.DEFAULT_COVERAGE_BIN_S),
        )
        return {"report": report}

    def run_seed(
        self,
        scenario: SensorScenario,
        config: FusionConfig,
        seed: int,
        horizontal: bool = False,
        bin_s: float = settings.DEFAULT_COVERAGE_BIN_S,
    ) -> SeedResult:
        """
        Simulate one seed and score all three fusion modes.

        Args:
            scenario: Scenario to simulate
            config: Fusion configuration
            seed: RNG seed
            horizontal: Score every row in 2D
            bin_s: Coverage bin width

        Returns:
            SeedResult with the error table and the three run reports
        """
        run = self.simulator.simulate(scenario, seed)
        radar_only = self.fusion.fuse(run.radar, run.rf, config, "radar-only")
        rf_only = self.fusion.fuse(run.radar, run.rf, config, "rf-only")
        fused = self.fusion.fuse(run.radar, run.rf, config, "fused")
        rows = self.analyzer.error_table(
            truth=run.truth,
            radar_raw=run.radar,
            rf_raw=run.rf,
            radar_validated=radar_only.accepted,
            rf_validated=rf_only.accepted,
            fused=fused.track,
            horizontal=horizontal,
            bin_s=bin_s,
        )
        return SeedResult(
            seed=seed,
            rows=rows,
            reports={"radar-only": radar_only.report, "rf-only": rf_only.report, "fused": fused.report},
        )

    async def run_benchmark(
        self,
        scenario: SensorScenario,
        config: FusionConfig,
        seeds: Sequence[int],
        horizontal: bool = False,
        bin_s: float = settings.DEFAULT_COVERAGE_BIN_S,
    ) -> BenchmarkReport:
        """
        Run every seed and aggregate.

        A seed that raises a toolkit error is recorded in failed_seeds and
        left out of the averages.

        Args:
            scenario: Scenario to simulate
            config: Fusion configuration
            seeds: Seeds to run
            horizontal: Score every row in 2D
            bin_s: Coverage bin width

        Returns:
            BenchmarkReport
        """
        self.log_info(f"Starting benchmark over {len(seeds)} seeds with {self.num_workers} workers")
        semaphore = asyncio.Semaphore(self.num_workers)

        async def guarded(seed: int):
            async with semaphore:
                try:
                    return await self.run_blocking(self.run_seed, scenario, config, seed, horizontal, bin_s)
                except FusionToolkitError as e:
                    self.log_error(f"Seed {seed} failed: {e}")
                    return e

        outcomes = await asyncio.gather(*(guarded(seed) for seed in seeds))

        per_seed: Dict[int, List[ErrorTableRow]] = {}
        failed: Dict[int, str] = {}
        for seed, outcome in zip(seeds, outcomes):
            if isinstance(outcome, SeedResult):
                per_seed[seed] = outcome.rows
            else:
                failed[seed] = str(outcome)

        averages = average_rows(list(per_seed.values()))
        report = BenchmarkReport(
            report_id=f"benchmark_{uuid.uuid4().hex[:8]}",
            generated_at=timestamp_now(),
            seeds=list(seeds),
            failed_seeds=failed,
            per_seed=per_seed,
            averages=averages,
            coasted_to_updated_ratio=self._coasted_ratio(averages),
        )
        self.log_info(f"Completed benchmark: {len(per_seed)} seeds scored, {len(failed)} failed")
        return report

    def _coasted_ratio(self, averages: List[ErrorTableRow]) -> Optional[float]:
        """Ratio of the averaged coasted and updated mean errors."""
        by_name = {row.name: row for row in averages}
        coasted = by_name.get(KF_COASTED)
        updated = by_name.get(KF_UPDATED)
        if not coasted or not updated or coasted.mean_m is None or not updated.mean_m:
            return None
        return coasted.mean_m / updated.mean_m
