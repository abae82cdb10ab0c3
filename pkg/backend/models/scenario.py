"""
Simulation Scenario Models
"""
import json
from pathlib import Path
from typing import List, Literal, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, model_validator

from .geometry import EnuPosition


class DropoutRegion(BaseModel):
    """Horizontal disc inside which RF fixes drop out with their own probability."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    center: EnuPosition
    radius_m: float = Field(..., gt=0)
    dropout_prob: float = Field(..., ge=0, le=1)


class RadarSensorConfig(BaseModel):
    """Polar-noise radar producing 3D detections at a fixed cadence."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    origin: EnuPosition = Field(default_factory=lambda: EnuPosition(up_m=10.0))
    interval_s: float = Field(default=0.25, gt=0)
    start_offset_s: float = Field(default=0.0, ge=0)
    range_sigma_m: float = Field(default=2.0, ge=0)
    az_sigma_deg: float = Field(default=2.0, ge=0)
    el_sigma_deg: float = Field(default=2.0, ge=0)
    max_range_m: float = Field(default=2000.0, gt=0, description="Detection range")
    boresight_az_deg: float = Field(default=45.0, description="Clockwise from north")
    boresight_el_deg: float = 15.0
    fov_az_deg: float = Field(default=120.0, gt=0, le=360)
    fov_el_deg: float = Field(default=60.0, gt=0, le=180)
    degradation_breakpoint_m: float = Field(default=800.0, gt=0)
    degradation_factor: float = Field(default=1.0, ge=1)
    fragment_beyond_breakpoint: bool = False
    fragment_length_s: float = Field(default=20.0, gt=0)


class RfSensorConfig(BaseModel):
    """TDOA sensor network producing 2D fixes."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    sensor_positions: List[EnuPosition] = Field(..., min_length=3)
    reference_index: int = Field(default=0, ge=0)
    interval_s: float = Field(default=3.88, gt=0)
    start_offset_s: float = Field(default=0.0, ge=0)
    timing_sigma_s: float = Field(default=1.0e-7, ge=0)
    outlier_prob: float = Field(default=0.0, ge=0, le=1)
    outlier_scale_m: float = Field(default=1000.0, ge=0)
    outlier_max_m: float = Field(default=5000.0, ge=0)
    dropout_prob: float = Field(default=0.0, ge=0, le=1)
    dropout_regions: List[DropoutRegion] = Field(default_factory=list)

    @model_validator(mode="after")
    def _check_reference(self) -> "RfSensorConfig":
        if self.reference_index >= len(self.sensor_positions):
            raise ValueError("reference_index must name one of the sensors")
        if self.outlier_max_m < self.outlier_scale_m:
            raise ValueError("outlier_max_m must be at least outlier_scale_m")
        return self


class SensorScenario(BaseModel):
    """Full description of a synthetic flight and the sensors observing it."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    schema_version: Literal[1] = 1
    waypoints: List[EnuPosition] = Field(..., min_length=2)
    speed_mps: float = Field(..., gt=0)
    gt_rate_hz: float = Field(default=10.0, gt=0)
    start_time_s: float = 0.0
    radar: RadarSensorConfig = Field(default_factory=RadarSensorConfig)
    rf: RfSensorConfig
    rng_seed: int = Field(default=0, ge=0)

    @classmethod
    def load(cls, path: Union[str, Path]) -> "SensorScenario":
        return cls.model_validate(json.loads(Path(path).read_text(encoding="utf-8")))

    def with_seed(self, seed: int) -> "SensorScenario":
        return self.model_copy(update={"rng_seed": seed})


class TdoaObservation(BaseModel):
    """
    Arrival-time difference of one emission at a sensor pair.

    delta_t is arrival at sensor_pair[1] minus arrival at sensor_pair[0].
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    sensor_pair: Tuple[int, int]
    delta_t: float

    @model_validator(mode="after")
    def _distinct(self) -> "TdoaObservation":
        i, j = self.sensor_pair
        if i == j or i < 0 or j < 0:
            raise ValueError("sensor_pair indices must be distinct and non-negative")
        return self
