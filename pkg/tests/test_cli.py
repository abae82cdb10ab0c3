"""
End-to-end tests of the uav-fusion command line
"""
import json

import pytest
from jsonschema import Draft202012Validator

from backend.cli import main
from backend.config import settings
from backend.models.fusion_config import FusionConfig
from backend.storage.csv_io import read_ground_truth, read_measurements, write_ground_truth, write_measurements
from tests.helpers import radar, truth


@pytest.fixture
def scenario_path(tmp_path, short_scenario):
    path = tmp_path / "scenario.json"
    path.write_text(short_scenario.model_dump_json(indent=2), encoding="utf-8")
    return path


@pytest.fixture
def simulated(tmp_path, scenario_path):
    out = tmp_path / "sim"
    assert main(["simulate", "--config", str(scenario_path), "--out", str(out)]) == 0
    return out


def _fuse(simulated, out, *extra):
    return main([
        "fuse", "--radar", str(simulated / "radar.csv"), "--rf", str(simulated / "rf.csv"),
        "--config", str(settings.default_fusion_config_path), "--out", str(out), *extra,
    ])


class TestSimulate:

    def test_outputs(self, simulated):
        for name in ("gt.csv", "radar.csv", "rf.csv", "simulation_report.json", "manifest.json", "index.json"):
            assert (simulated / name).is_file()
        manifest = json.loads((simulated / "manifest.json").read_text())
        assert manifest["subcommand"] == "simulate"
        assert manifest["rng_seed"] == 7

    def test_seed_override_is_recorded(self, tmp_path, scenario_path):
        out = tmp_path / "sim42"
        assert main(["simulate", "--config", str(scenario_path), "--seed", "42", "--out", str(out)]) == 0
        assert json.loads((out / "simulation_report.json").read_text())["rng_seed"] == 42

    def test_same_seed_same_files(self, tmp_path, scenario_path, simulated):
        out = tmp_path / "again"
        assert main(["simulate", "--config", str(scenario_path), "--out", str(out)]) == 0
        for name in ("gt.csv", "radar.csv", "rf.csv"):
            assert (out / name).read_bytes() == (simulated / name).read_bytes()

    def test_default_output_directory(self, output_dir, scenario_path):
        assert main(["simulate", "--config", str(scenario_path)]) == 0
        (run_dir,) = list(output_dir.iterdir())
        assert run_dir.name.startswith("simulate_")

    def test_missing_config(self, tmp_path):
        assert main(["simulate", "--config", str(tmp_path / "none.json"), "--out", str(tmp_path / "o")]) == 2

    def test_invalid_scenario(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"waypoints": [], "speed_mps": 5.0, "rf": {"sensor_positions": []}}))
        assert main(["simulate", "--config", str(path), "--out", str(tmp_path / "o")]) == 2


class TestFuseAndEvaluate:

    def test_pipeline(self, tmp_path, simulated):
        assert _fuse(simulated, tmp_path / "fuse", "--write-accepted") == 0
        fuse_dir = tmp_path / "fuse"
        for name in ("track.csv", "track_covariance.csv", "report.json", "accepted.csv"):
            assert (fuse_dir / name).is_file()
        run_report = json.loads((fuse_dir / "report.json").read_text())
        assert run_report["updated"] + run_report["coasted"] == run_report["survivors"]

        eval_dir = tmp_path / "eval"
        code = main([
            "evaluate", "--track", str(fuse_dir / "track.csv"), "--gt", str(simulated / "gt.csv"),
            "--radar-origin", "0", "0", "10", "--out", str(eval_dir),
        ])
        assert code == 0
        report = json.loads((eval_dir / "report.json").read_text())
        assert report["errors"]["coverage_pct"] == 100.0
        assert report["consistency"] is not None
        assert (eval_dir / "cdf.csv").read_text().splitlines()[0] == "error_m,fraction"
        assert (eval_dir / "error_vs_range.csv").is_file()

    def test_horizontal_scoring(self, tmp_path, simulated):
        assert _fuse(simulated, tmp_path / "fuse") == 0
        code = main([
            "evaluate", "--track", str(tmp_path / "fuse" / "track.csv"), "--gt", str(simulated / "gt.csv"),
            "--horizontal", "--bin-seconds", "2", "--out", str(tmp_path / "eval"),
        ])
        assert code == 0
        errors = json.loads((tmp_path / "eval" / "report.json").read_text())["errors"]
        assert errors["mode"] == "horizontal2D"
        assert errors["coverage_bin_s"] == 2.0

    def test_rf_only_never_reads_radar(self, tmp_path, simulated):
        code = main([
            "fuse", "--radar", str(tmp_path / "missing.csv"), "--rf", str(simulated / "rf.csv"),
            "--mode", "rf-only", "--out", str(tmp_path / "rf_only"),
        ])
        assert code == 0

    def test_missing_measurement_file(self, tmp_path, simulated):
        code = main([
            "fuse", "--radar", str(tmp_path / "missing.csv"), "--rf", str(simulated / "rf.csv"),
            "--out", str(tmp_path / "fuse"),
        ])
        assert code == 2

    def test_missing_stream_argument(self, tmp_path, simulated):
        assert main(["fuse", "--rf", str(simulated / "rf.csv"), "--out", str(tmp_path / "fuse")]) == 2

    def test_unknown_config_key(self, tmp_path, simulated):
        config = tmp_path / "fusion.json"
        config.write_text(json.dumps({**FusionConfig().model_dump(mode="json"), "gate": 0.9}))
        code = main([
            "fuse", "--radar", str(simulated / "radar.csv"), "--rf", str(simulated / "rf.csv"),
            "--config", str(config), "--out", str(tmp_path / "fuse"),
        ])
        assert code == 2

    def test_malformed_config(self, tmp_path, simulated):
        config = tmp_path / "fusion.json"
        config.write_text("{not json")
        code = main([
            "fuse", "--radar", str(simulated / "radar.csv"), "--rf", str(simulated / "rf.csv"),
            "--config", str(config), "--out", str(tmp_path / "fuse"),
        ])
        assert code == 2

    def test_unsorted_input(self, tmp_path):
        path = write_measurements(tmp_path / "radar.csv", [radar(2.0, 100.0, 0.0, 50.0), radar(1.0, 100.0, 0.0, 50.0)])
        assert main(["fuse", "--radar", str(path), "--mode", "radar-only", "--out", str(tmp_path / "fuse")]) == 2

    def test_empty_input_is_insufficient_data(self, tmp_path):
        path = write_measurements(tmp_path / "rf.csv", [])
        assert main(["fuse", "--rf", str(path), "--mode", "rf-only", "--out", str(tmp_path / "fuse")]) == 3

    def test_evaluate_without_overlap(self, tmp_path, simulated):
        assert _fuse(simulated, tmp_path / "fuse") == 0
        gt = write_ground_truth(tmp_path / "late_gt.csv", [truth(1000.0, 0.0, 0.0, 0.0), truth(1001.0, 1.0, 0.0, 0.0)])
        code = main(["evaluate", "--track", str(tmp_path / "fuse" / "track.csv"), "--gt", str(gt), "--out", str(tmp_path / "e")])
        assert code == 3


def test_calibrate(tmp_path, simulated):
    out = tmp_path / "cal"
    code = main([
        "calibrate", "--radar", str(simulated / "radar.csv"), "--rf", str(simulated / "rf.csv"),
        "--gt", str(simulated / "gt.csv"), "--config", str(settings.default_fusion_config_path), "--out", str(out),
    ])
    assert code == 0
    config = FusionConfig.load(out / "fusion_config.json")
    assert config.radar_max_range_m == 800.0
    report = json.loads((out / "calibration_report.json").read_text())
    assert report["rf"]["sample_count"] > 3


def test_calibrate_insufficient_data(tmp_path, simulated):
    empty_rf = write_measurements(tmp_path / "rf.csv", [])
    code = main([
        "calibrate", "--radar", str(simulated / "radar.csv"), "--rf", str(empty_rf),
        "--gt", str(simulated / "gt.csv"), "--out", str(tmp_path / "cal"),
    ])
    assert code == 3


class TestConvert:

    ORIGIN = ["--origin-lat", "35.7", "--origin-lon", "-78.7", "--origin-alt", "100"]

    def _input(self, tmp_path):
        path = tmp_path / "geo.csv"
        path.write_text(
            "t_s,lat,lon,alt,track\n"
            "1.0,35.701,-78.7,150,5\n"
            "0.0,35.7,-78.7,150,5\n",
            encoding="utf-8",
        )
        return path

    def test_truth(self, tmp_path):
        out = tmp_path / "conv"
        assert main(["convert", "--input", str(self._input(tmp_path)), "--kind", "gt", *self.ORIGIN, "--out", str(out)]) == 0
        samples = read_ground_truth(out / "gt.csv")
        assert [s.timestamp for s in samples] == [0.0, 1.0]
        assert samples[0].position.as_tuple() == pytest.approx((0.0, 0.0, 50.0), abs=1e-6)
        assert samples[1].position.north_m == pytest.approx(111.0, abs=0.5)

    def test_orthometric_altitude(self, tmp_path):
        out = tmp_path / "conv"
        code = main([
            "convert", "--input", str(self._input(tmp_path)), "--kind", "gt", *self.ORIGIN,
            "--altitude-reference", "orthometric", "--geoid-undulation", "-30", "--out", str(out),
        ])
        assert code == 0
        assert read_ground_truth(out / "gt.csv")[0].position.up_m == pytest.approx(20.0, abs=1e-6)

    def test_radar_with_track_ids(self, tmp_path):
        out = tmp_path / "conv"
        code = main([
            "convert", "--input", str(self._input(tmp_path)), "--kind", "radar", *self.ORIGIN,
            "--track-col", "track", "--out", str(out),
        ])
        assert code == 0
        ms = read_measurements(out / "radar.csv")
        assert [m.track_id for m in ms] == [5, 5]

    def test_rf_without_altitude_column(self, tmp_path):
        out = tmp_path / "conv"
        code = main(["convert", "--input", str(self._input(tmp_path)), "--kind", "rf", *self.ORIGIN, "--alt-col", "", "--out", str(out)])
        assert code == 0
        ms = read_measurements(out / "rf.csv")
        assert len(ms[0].position) == 2

    def test_missing_column(self, tmp_path):
        code = main([
            "convert", "--input", str(self._input(tmp_path)), "--kind", "gt", *self.ORIGIN,
            "--lat-col", "latitude", "--out", str(tmp_path / "conv"),
        ])
        assert code == 2

    def test_latitude_out_of_range(self, tmp_path):
        path = tmp_path / "geo.csv"
        path.write_text("t_s,lat,lon,alt\n0,95,0,0\n", encoding="utf-8")
        code = main(["convert", "--input", str(path), "--kind", "gt", *self.ORIGIN, "--out", str(tmp_path / "conv")])
        assert code == 2


def test_schema(tmp_path):
    assert main(["schema", "--out", str(tmp_path / "schema")]) == 0
    names = sorted(p.name for p in (tmp_path / "schema").iterdir())
    assert names == ["evaluation_report.schema.json", "fusion_config.schema.json", "scenario.schema.json"]


def test_evaluation_report_matches_its_schema(tmp_path, simulated):
    assert _fuse(simulated, tmp_path / "fuse") == 0
    assert main([
        "evaluate", "--track", str(tmp_path / "fuse" / "track.csv"), "--gt", str(simulated / "gt.csv"),
        "--out", str(tmp_path / "eval"),
    ]) == 0
    assert main(["schema", "--out", str(tmp_path / "schema")]) == 0

    schema = json.loads((tmp_path / "schema" / "evaluation_report.schema.json").read_text())
    report = json.loads((tmp_path / "eval" / "report.json").read_text())
    Draft202012Validator.check_schema(schema)
    Draft202012Validator(schema).validate(report)

    report["errors"]["count"] = "many"
    assert not Draft202012Validator(schema).is_valid(report)


def test_benchmark(tmp_path, scenario_path):
    out = tmp_path / "bench"
    code = main([
        "benchmark", "--config", str(scenario_path), "--seed", "3", "--runs", "2", "--workers", "2", "--out", str(out),
    ])
    assert code == 0
    report = json.loads((out / "benchmark.json").read_text())
    assert report["seeds"] == [3, 4]
    assert report["failed_seeds"] == {}
