"""Models package"""
from .geometry import GeodeticCoord, EnuPosition
from .measurement import Modality, Measurement, GroundTruthSample
from .fusion_config import NoiseConfig, InitializationConfig, FusionConfig
from .scenario import (
    DropoutRegion,
    RadarSensorConfig,
    RfSensorConfig,
    SensorScenario,
    TdoaObservation,
)
from .report import (
    ErrorSummary,
    ErrorReport,
    ModalityCounts,
    RunReport,
    SimulationReport,
    CalibrationResult,
    ConsistencySummary,
    ErrorTableRow,
    EvaluationReport,
    BenchmarkReport,
)
from .manifest import RunManifest

__all__ = [
    "GeodeticCoord",
    "EnuPosition",
    "Modality",
    "Measurement",
    "GroundTruthSample",
    "NoiseConfig",
    "InitializationConfig",
    "FusionConfig",
    "DropoutRegion",
    "RadarSensorConfig",
    "RfSensorConfig",
    "SensorScenario",
    "TdoaObservation",
    "ErrorSummary",
    "ErrorReport",
    "ModalityCounts",
    "RunReport",
    "SimulationReport",
    "CalibrationResult",
    "ConsistencySummary",
    "ErrorTableRow",
    "EvaluationReport",
    "BenchmarkReport",
    "RunManifest",
]
