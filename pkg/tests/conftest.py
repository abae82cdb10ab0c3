"""
Shared fixtures
"""
from typing import List

import pytest

from backend.config import settings
from backend.models.fusion_config import FusionConfig
from backend.models.geometry import EnuPosition
from backend.models.scenario import RadarSensorConfig, RfSensorConfig, SensorScenario


@pytest.fixture
def output_dir(tmp_path, monkeypatch):
    """Point settings.OUTPUT_DIR at a temporary directory."""
    monkeypatch.setattr(settings, "OUTPUT_DIR", tmp_path / "runs")
    return tmp_path / "runs"


@pytest.fixture(scope="session")
def default_scenario() -> SensorScenario:
    return SensorScenario.load(settings.default_scenario_path)


@pytest.fixture(scope="session")
def default_fusion_config() -> FusionConfig:
    return FusionConfig.load(settings.default_fusion_config_path)


@pytest.fixture
def square_sensors() -> List[EnuPosition]:
    return [
        EnuPosition(east_m=0.0, north_m=0.0),
        EnuPosition(east_m=1000.0, north_m=0.0),
        EnuPosition(east_m=1000.0, north_m=1000.0),
        EnuPosition(east_m=0.0, north_m=1000.0),
    ]


@pytest.fixture
def short_scenario(square_sensors) -> SensorScenario:
    """A 60 s straight leg inside the radar's field of view and the RF hull."""
    return SensorScenario(
        waypoints=[
            EnuPosition(east_m=200.0, north_m=300.0, up_m=50.0),
            EnuPosition(east_m=500.0, north_m=300.0, up_m=50.0),
        ],
        speed_mps=5.0,
        radar=RadarSensorConfig(origin=EnuPosition(up_m=10.0)),
        rf=RfSensorConfig(sensor_positions=square_sensors, interval_s=2.0),
        rng_seed=7,
    )

