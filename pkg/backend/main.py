"""
FastAPI Main Application - UAV Radar/RF Fusion Tracker
"""
from datetime import datetime
from typing import List, Literal, Optional

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel, Field, ValidationError

from .config import settings
from .agents.simulator_agent import SimulatorAgent
from .agents.fusion_agent import FusionAgent
from .agents.analyzer_agent import AnalyzerAgent
from .models.fusion_config import FusionConfig
from .models.geometry import EnuPosition
from .models.manifest import RunManifest
from .models.measurement import Measurement, Modality
from .models.report import EvaluationReport, RunReport, SimulationReport
from .models.scenario import SensorScenario
from .storage.artifact_store import ArtifactStore, load_run, new_run_id
from .storage.csv_io import read_ground_truth, read_measurements, read_track
from .tracking.metrics import ScoringMode
from .utils.errors import FusionToolkitError
from . import __version__


app = FastAPI(
    title=settings.APP_NAME,
    description="Batch radar/RF UAV tracking: simulation, fusion and evaluation",
    version=__version__
)

# CORS middleware
app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)


# Request/Response Models
class SimulateRequest(BaseModel):
    scenario: Optional[SensorScenario] = None  # If None, use the shipped default scenario
    seed: Optional[int] = Field(default=None, ge=0)


class SimulateResponse(BaseModel):
    run_id: str
    report: SimulationReport


class FuseRequest(BaseModel):
    source_run_id: Optional[str] = None  # Read radar.csv/rf.csv from a simulate run
    radar: List[Measurement] = Field(default_factory=list)
    rf: List[Measurement] = Field(default_factory=list)
    config: Optional[FusionConfig] = None
    mode: Literal["fused", "radar-only", "rf-only"] = "fused"


class FuseResponse(BaseModel):
    run_id: str
    report: RunReport


class EvaluateRequest(BaseModel):
    track_run_id: str
    truth_run_id: str
    horizontal: bool = False
    bin_s: float = Field(default=settings.DEFAULT_COVERAGE_BIN_S, gt=0)
    radar_origin: Optional[EnuPosition] = None


def _raise_http(exc: Exception):
    """Map toolkit errors onto HTTP status codes."""
    if isinstance(exc, FileNotFoundError):
        raise HTTPException(status_code=404, detail=f"Run not found: {exc}")
    if isinstance(exc, ValidationError):
        raise HTTPException(status_code=400, detail=str(exc))
    if isinstance(exc, FusionToolkitError):
        status = {2: 400, 3: 422}.get(exc.exit_code, 500)
        raise HTTPException(status_code=status, detail=f"{type(exc).__name__}: {exc}")
    raise HTTPException(status_code=500, detail=str(exc))


def _new_store(prefix: str) -> ArtifactStore:
    run_id = new_run_id(prefix)
    return ArtifactStore(settings.OUTPUT_DIR / run_id, run_id)


def _record(store: ArtifactStore, subcommand: str, inputs: List[str], seed: Optional[int] = None):
    store.write_manifest(
        RunManifest(
            subcommand=subcommand,
            input_paths=inputs,
            output_dir=str(store.artifacts_dir),
            rng_seed=seed,
            tool_version=__version__,
        )
    )


# API Endpoints
@app.get("/")
async def root():
    return {"message": settings.APP_NAME, "version": __version__, "docs": "/docs"}


@app.post("/api/simulate", response_model=SimulateResponse)
async def simulate(request: SimulateRequest):
    """
    Simulate a scenario (the shipped default when none is given).
    Writes gt.csv, radar.csv and rf.csv into a new run.
    """
    try:
        scenario = request.scenario or SensorScenario.load(settings.default_scenario_path)
        if request.seed is not None:
            scenario = scenario.with_seed(request.seed)
        store = _new_store("simulate")
        result = await SimulatorAgent().execute({"scenario": scenario, "store": store})
        _record(store, "simulate", [], scenario.rng_seed)
        return SimulateResponse(run_id=store.run_id, report=result["report"])
    except Exception as e:
        _raise_http(e)


@app.post("/api/fuse", response_model=FuseResponse)
async def fuse(request: FuseRequest):
    """
    Fuse measurements given inline or stored by a simulate run.
    """
    try:
        radar, rf, inputs = request.radar, request.rf, []
        if request.source_run_id is not None:
            load_run(request.source_run_id)
            source = settings.OUTPUT_DIR / request.source_run_id
            radar = read_measurements(source / "radar.csv", Modality.RADAR_3D)
            rf = read_measurements(source / "rf.csv", Modality.RF_2D)
            inputs = [str(source / "radar.csv"), str(source / "rf.csv")]
        config = request.config or FusionConfig.load(settings.default_fusion_config_path)

        store = _new_store("fuse")
        result = await FusionAgent(agent_id="api").execute(
            {"radar": radar, "rf": rf, "config": config, "mode": request.mode, "store": store}
        )
        config.save(store.path("fusion_config.json"))
        store.register("fusion_config.json", "config")
        _record(store, "fuse", inputs)
        return FuseResponse(run_id=store.run_id, report=result["report"])
    except Exception as e:
        _raise_http(e)


@app.post("/api/evaluate", response_model=EvaluationReport)
async def evaluate(request: EvaluateRequest):
    """
    Score the track of a fuse run against the truth of a simulate run.
    """
    try:
        load_run(request.track_run_id)
        load_run(request.truth_run_id)
        track_dir = settings.OUTPUT_DIR / request.track_run_id
        truth_path = settings.OUTPUT_DIR / request.truth_run_id / "gt.csv"
        track = read_track(track_dir / "track.csv", track_dir / "track_covariance.csv")
        truth = read_ground_truth(truth_path)

        store = _new_store("evaluate")
        result = await AnalyzerAgent().execute({
            "track": track,
            "truth": truth,
            "mode": ScoringMode.HORIZONTAL_2D if request.horizontal else ScoringMode.AUTO,
            "bin_s": request.bin_s,
            "radar_origin": request.radar_origin,
            "store": store,
        })
        _record(store, "evaluate", [str(track_dir / "track.csv"), str(truth_path)])
        return result["report"]
    except Exception as e:
        _raise_http(e)


@app.get("/api/runs/{run_id}")
async def get_run(run_id: str):
    """
    Get the manifest, file index and JSON reports of a stored run.
    """
    try:
        return load_run(run_id)
    except Exception as e:
        _raise_http(e)


@app.get("/health")
async def health_check():
    """Health check endpoint"""
    return {"status": "healthy", "timestamp": datetime.now().isoformat()}


if __name__ == "__main__":
    import uvicorn
    uvicorn.run(app, host="0.0.0.0", port=8000)
