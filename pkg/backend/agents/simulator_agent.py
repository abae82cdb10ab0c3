"""
Simulator Agent - Generates ground truth and synthetic sensor streams
"""
from typing import Any, Dict, Optional

from .base_agent import BaseAgent
from ..models.scenario import SensorScenario
from ..simulation.sensors import SimulationRun, simulate_scenario
from ..storage.artifact_store import ArtifactStore
from ..storage.csv_io import write_ground_truth, write_measurements


class SimulatorAgent(BaseAgent):
    """
    Runs a SensorScenario and writes gt.csv, radar.csv, rf.csv and
    simulation_report.json.
    """

    def __init__(self):
        super().__init__(
            name="Simulator",
            description="Generates seeded synthetic flights and sensor data"
        )

    async def execute(self, context: Dict[str, Any]) -> Dict[str, Any]:
        """Simulate a scenario and store the result."""
        scenario: SensorScenario = context["scenario"]
        store: ArtifactStore = context["store"]
        run = await self.run_blocking(self.simulate, scenario, context.get("seed"))
        files = self.write(run, store)
        return {"report": run.report, "files": files}

    def simulate(self, scenario: SensorScenario, seed: Optional[int] = None) -> SimulationRun:
        """
        Simulate truth and both sensors.

        Args:
            scenario: Scenario to run
            seed: Overrides scenario.rng_seed

        Returns:
            SimulationRun
        """
        run = simulate_scenario(scenario, seed)
        self.log_info(
            f"seed {run.report.rng_seed}: {len(run.truth)} truth, {len(run.radar)} radar, "
            f"{len(run.rf)} rf samples over {run.report.duration_s:.1f}s"
        )
        return run

    def write(self, run: SimulationRun, store: ArtifactStore) -> Dict[str, str]:
        """Write the three CSVs and the accounting report."""
        write_ground_truth(store.path("gt.csv"), run.truth)
        write_measurements(store.path("radar.csv"), run.radar)
        write_measurements(store.path("rf.csv"), run.rf)
        return {
            "gt": store.register("gt.csv", "truth"),
            "radar": store.register("radar.csv", "measurements"),
            "rf": store.register("rf.csv", "measurements"),
            "report": store.save_json("simulation_report", run.report),
        }
