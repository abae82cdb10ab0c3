"""
Command-line front end: simulate, calibrate, fuse, evaluate, convert,
benchmark and schema subcommands.

Exit codes: 0 success, 2 input/config error, 3 insufficient data,
1 internal error.
"""
import argparse
import asyncio
import json
import logging
import sys
from pathlib import Path
from typing import Callable, List, Optional, Sequence, Type, TypeVar

import numpy as np
from pydantic import BaseModel, ValidationError

from . import __version__
from .agents import AnalyzerAgent, CalibratorAgent, FusionAgent, OrchestratorAgent, SimulatorAgent
from .config import settings
from .models.fusion_config import FusionConfig
from .models.geometry import EnuPosition, GeodeticCoord
from .models.manifest import RunManifest
from .models.measurement import GroundTruthSample, Measurement, Modality
from .models.report import EvaluationReport
from .models.scenario import SensorScenario
from .storage.artifact_store import ArtifactStore, new_run_id
from .storage.csv_io import (
    read_ground_truth,
    read_measurements,
    read_table,
    read_track,
    write_ground_truth,
    write_measurements,
)
from .tracking.fusion import FUSION_MODES
from .tracking.geo import geodetic_array_to_enu
from .tracking.metrics import ScoringMode
from .utils.errors import ConfigError, FusionToolkitError, SchemaError

logger = logging.getLogger("backend.cli")

M = TypeVar("M", bound=BaseModel)


def load_model(cls: Type[M], path: Path) -> M:
    """Parse a JSON config file into cls; missing or malformed files are config errors."""
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from exc
    return cls.model_validate(data)


def _store(args: argparse.Namespace) -> ArtifactStore:
    if args.out is None:
        run_id = new_run_id(args.command)
        return ArtifactStore(settings.OUTPUT_DIR / run_id, run_id)
    return ArtifactStore(args.out)


def _manifest(args: argparse.Namespace, store: ArtifactStore, config_path=None, inputs=(), seed=None) -> None:
    arguments = {k: (str(v) if isinstance(v, Path) else v) for k, v in vars(args).items() if k != "handler"}
    store.write_manifest(
        RunManifest(
            subcommand=args.command,
            config_path=str(config_path) if config_path is not None else None,
            input_paths=[str(p) for p in inputs if p is not None],
            output_dir=str(store.artifacts_dir),
            rng_seed=seed,
            tool_version=__version__,
            arguments=arguments,
        )
    )


def cmd_simulate(args: argparse.Namespace) -> int:
    scenario = load_model(SensorScenario, args.config)
    if args.seed is not None:
        scenario = scenario.with_seed(args.seed)
    store = _store(args)
    agent = SimulatorAgent()
    run = agent.simulate(scenario)
    agent.write(run, store)
    _manifest(args, store, args.config, seed=scenario.rng_seed)
    print(f"wrote {len(run.truth)} truth, {len(run.radar)} radar, {len(run.rf)} rf rows to {store.artifacts_dir}")
    return 0


def cmd_calibrate(args: argparse.Namespace) -> int:
    truth = read_ground_truth(args.gt)
    radar = read_measurements(args.radar, Modality.RADAR_3D)
    rf = read_measurements(args.rf, Modality.RF_2D)
    base = load_model(FusionConfig, args.config) if args.config else None
    store = _store(args)
    agent = CalibratorAgent()
    config, results = agent.calibrate(radar, rf, truth, base, robust=args.robust)
    agent.write(config, results, store)
    _manifest(args, store, args.config, [args.radar, args.rf, args.gt])
    print(f"wrote calibrated config to {store.path('fusion_config.json')}")
    return 0


def cmd_fuse(args: argparse.Namespace) -> int:
    config = load_model(FusionConfig, args.config)
    radar: List[Measurement] = []
    rf: List[Measurement] = []
    if args.mode != "rf-only":
        if args.radar is None:
            raise ConfigError(f"--radar is required in {args.mode} mode")
        radar = read_measurements(args.radar, Modality.RADAR_3D)
    if args.mode != "radar-only":
        if args.rf is None:
            raise ConfigError(f"--rf is required in {args.mode} mode")
        rf = read_measurements(args.rf, Modality.RF_2D)
    store = _store(args)
    agent = FusionAgent()
    result = agent.fuse(radar, rf, config, args.mode)
    agent.write(result, store, accepted=args.write_accepted)
    inputs = [args.radar if args.mode != "rf-only" else None, args.rf if args.mode != "radar-only" else None]
    _manifest(args, store, args.config, inputs)
    report = result.report
    print(f"{args.mode}: {report.updated} updated, {report.coasted} coasted -> {store.path('track.csv')}")
    return 0


def cmd_evaluate(args: argparse.Namespace) -> int:
    covariance_path = args.covariance
    if covariance_path is None:
        sibling = Path(args.track).with_name("track_covariance.csv")
        covariance_path = sibling if sibling.is_file() else None
    track = read_track(args.track, covariance_path)
    truth = read_ground_truth(args.gt)
    mode = ScoringMode.HORIZONTAL_2D if args.horizontal else ScoringMode.AUTO
    origin = EnuPosition.from_array(args.radar_origin) if args.radar_origin else None

    store = _store(args)
    agent = AnalyzerAgent()
    evaluation = agent.evaluate(track, truth, mode, args.bin_seconds, str(args.track), str(args.gt))
    agent.write(evaluation, store, track, truth, origin, mode)
    _manifest(args, store, None, [args.track, args.gt, covariance_path])
    errors = evaluation.report.errors
    print(f"mean {errors.mean_m:.2f} m, max {errors.max_m:.2f} m, coverage {errors.coverage_pct:.1f}%")
    return 0


def _column(frame, name: str, path: Path) -> np.ndarray:
    if name not in frame.columns:
        raise SchemaError(f"missing column {name!r}", str(path), 1)
    try:
        return frame[name].astype(float).to_numpy()
    except ValueError as exc:
        raise SchemaError(f"column {name!r} is not numeric: {exc}", str(path)) from exc


def cmd_convert(args: argparse.Namespace) -> int:
    """Geodetic CSV (configurable columns) -> ENU measurement or truth CSV."""
    path = Path(args.input)
    frame = read_table(path)
    origin = GeodeticCoord(latitude_deg=args.origin_lat, longitude_deg=args.origin_lon, altitude_m=args.origin_alt)
    times = _column(frame, args.time_col, path)
    lat = _column(frame, args.lat_col, path)
    lon = _column(frame, args.lon_col, path)
    if args.alt_col:
        alt = _column(frame, args.alt_col, path)
        if args.altitude_reference == "orthometric":
            alt = alt + args.geoid_undulation
    else:
        alt = np.full(times.size, origin.altitude_m)
    enu = geodetic_array_to_enu(lat, lon, alt, origin).reshape(-1, 3)

    store = _store(args)
    output = store.path(f"{args.kind}.csv")
    if args.kind == "gt":
        order = np.argsort(times, kind="stable")
        write_ground_truth(output, [GroundTruthSample(timestamp=float(times[k]), position=EnuPosition.from_array(enu[k])) for k in order])
    else:
        modality = Modality(args.kind)
        track_ids = _column(frame, args.track_col, path).astype(int) if args.track_col else None
        rows = []
        for k in np.argsort(times, kind="stable"):
            position = tuple(float(v) for v in enu[k, : modality.dim])
            track_id = int(track_ids[k]) if track_ids is not None and modality is Modality.RADAR_3D else None
            rows.append(Measurement(timestamp=float(times[k]), modality=modality, position=position, track_id=track_id))
        write_measurements(output, rows)
    store.register(output.name, args.kind)
    _manifest(args, store, None, [path])
    print(f"converted {times.size} rows to {output}")
    return 0


def cmd_benchmark(args: argparse.Namespace) -> int:
    scenario = load_model(SensorScenario, args.config)
    config = load_model(FusionConfig, args.fusion_config)
    seeds = list(range(args.seed, args.seed + args.runs))
    store = _store(args)
    orchestrator = OrchestratorAgent(num_workers=args.workers)
    report = asyncio.run(
        orchestrator.run_benchmark(scenario, config, seeds, horizontal=args.horizontal, bin_s=args.bin_seconds)
    )
    store.save_json("benchmark", report)
    _manifest(args, store, args.config, [args.fusion_config], seed=args.seed)
    for row in report.averages:
        mean = "n/a" if row.mean_m is None else f"{row.mean_m:8.2f}"
        print(f"{row.name:16s} {row.scoring} n={row.count:5d} mean={mean} coverage={row.coverage_pct:5.1f}%")
    return 0 if not report.failed_seeds else 1


def cmd_schema(args: argparse.Namespace) -> int:
    out = Path(args.out or settings.OUTPUT_DIR / "schema")
    out.mkdir(parents=True, exist_ok=True)
    for name, model in (
        ("evaluation_report", EvaluationReport),
        ("fusion_config", FusionConfig),
        ("scenario", SensorScenario),
    ):
        (out / f"{name}.schema.json").write_text(json.dumps(model.model_json_schema(), indent=2) + "\n", encoding="utf-8")
    print(f"wrote schemas to {out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="uav-fusion", description=settings.APP_NAME)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--verbose", "-v", action="store_true", help="Debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, handler: Callable[[argparse.Namespace], int], help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--out", type=Path, default=None, help="Output directory (default: a new run under OUTPUT_DIR)")
        p.set_defaults(handler=handler)
        return p

    p = add("simulate", cmd_simulate, "Simulate truth and sensor CSVs from a scenario")
    p.add_argument("--config", type=Path, default=settings.default_scenario_path, help="Scenario JSON")
    p.add_argument("--seed", type=int, default=None, help="Override the scenario rng_seed")

    p = add("calibrate", cmd_calibrate, "Estimate measurement covariances against ground truth")
    p.add_argument("--radar", type=Path, required=True)
    p.add_argument("--rf", type=Path, required=True)
    p.add_argument("--gt", type=Path, required=True)
    p.add_argument("--config", type=Path, default=None, help="Base fusion config to copy other fields from")
    p.add_argument("--robust", action="store_true", help="MAD-based outlier rejection before the covariance")

    p = add("fuse", cmd_fuse, "Fuse radar and RF measurements into a track")
    p.add_argument("--radar", type=Path, default=None)
    p.add_argument("--rf", type=Path, default=None)
    p.add_argument("--config", type=Path, default=settings.default_fusion_config_path, help="Fusion config JSON")
    p.add_argument("--mode", choices=FUSION_MODES, default="fused")
    p.add_argument("--write-accepted", action="store_true", help="Also write the accepted measurements")

    p = add("evaluate", cmd_evaluate, "Score a track against ground truth")
    p.add_argument("--track", type=Path, required=True)
    p.add_argument("--gt", type=Path, required=True)
    p.add_argument("--covariance", type=Path, default=None, help="track_covariance.csv (default: next to the track)")
    p.add_argument("--bin-seconds", type=float, default=settings.DEFAULT_COVERAGE_BIN_S)
    p.add_argument("--horizontal", action="store_true", help="Score every estimate in 2D")
    p.add_argument("--radar-origin", type=float, nargs=3, metavar=("E", "N", "U"), default=None,
                   help="Radar ENU position; enables error_vs_range.csv")

    p = add("convert", cmd_convert, "Convert a geodetic CSV to the ENU schema")
    p.add_argument("--input", type=Path, required=True)
    p.add_argument("--kind", choices=["radar", "rf", "gt"], required=True)
    p.add_argument("--origin-lat", type=float, required=True)
    p.add_argument("--origin-lon", type=float, required=True)
    p.add_argument("--origin-alt", type=float, default=0.0)
    p.add_argument("--time-col", default="t_s")
    p.add_argument("--lat-col", default="lat")
    p.add_argument("--lon-col", default="lon")
    p.add_argument("--alt-col", default="alt", help="Empty string: use the origin altitude")
    p.add_argument("--track-col", default=None)
    p.add_argument("--altitude-reference", choices=["ellipsoidal", "orthometric"], default="ellipsoidal")
    p.add_argument("--geoid-undulation", type=float, default=0.0, help="N in meters; h = H + N for orthometric input")

    p = add("benchmark", cmd_benchmark, "Monte Carlo benchmark over a range of seeds")
    p.add_argument("--config", type=Path, default=settings.default_scenario_path, help="Scenario JSON")
    p.add_argument("--fusion-config", type=Path, default=settings.default_fusion_config_path)
    p.add_argument("--seed", type=int, default=0, help="First seed")
    p.add_argument("--runs", type=int, default=20)
    p.add_argument("--workers", type=int, default=settings.MONTE_CARLO_WORKERS)
    p.add_argument("--horizontal", action="store_true")
    p.add_argument("--bin-seconds", type=float, default=settings.DEFAULT_COVERAGE_BIN_S)

    add("schema", cmd_schema, "Write JSON schemas of the report and config files")
    return parser


def configure_logging(verbose: bool = False) -> None:
    level = logging.DEBUG if verbose else getattr(logging, settings.LOG_LEVEL.upper(), logging.INFO)
    logging.basicConfig(level=level, format="%(asctime)s %(levelname)s %(name)s: %(message)s", stream=sys.stderr)


def _validation_message(exc: ValidationError) -> str:
    return "; ".join(f"{'.'.join(str(p) for p in err['loc']) or '<root>'}: {err['msg']}" for err in exc.errors())


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.verbose)
    try:
        return args.handler(args)
    except ValidationError as exc:
        logger.error("invalid input: %s", _validation_message(exc))
        return 2
    except FusionToolkitError as exc:
        logger.error("%s: %s", type(exc).__name__, exc)
        return exc.exit_code
    except Exception:
        logger.exception("internal error")
        return 1


if __name__ == "__main__":
    sys.exit(main())
