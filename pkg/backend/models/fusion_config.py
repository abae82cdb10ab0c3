"""
Fusion Configuration Models

Loaded from JSON files only; unknown keys are rejected.
"""
import json
from pathlib import Path
from typing import List, Literal, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from .geometry import EnuPosition
from .measurement import Modality


def _check_spd(matrix: List[List[float]], dim: int, name: str) -> List[List[float]]:
    arr = np.asarray(matrix, dtype=float)
    if arr.shape != (dim, dim):
        raise ValueError(f"{name} must be {dim}x{dim}, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} must be finite")
    if not np.allclose(arr, arr.T, rtol=1e-9, atol=1e-12):
        raise ValueError(f"{name} must be symmetric")
    try:
        np.linalg.cholesky(arr)
    except np.linalg.LinAlgError:
        raise ValueError(f"{name} must be positive definite") from None
    return arr.tolist()


class NoiseConfig(BaseModel):
    """Process and measurement noise of the constant-velocity filter."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    sigma_a: float = Field(default=1.0, gt=0, description="White-acceleration intensity, m/s^2 per axis")
    r_radar: List[List[float]] = Field(
        default_factory=lambda: [[200.0, 0.0, 0.0], [0.0, 200.0, 0.0], [0.0, 0.0, 350.0]],
        description="Radar 3x3 measurement covariance, m^2",
    )
    r_rf: List[List[float]] = Field(
        default_factory=lambda: [[450.0, 0.0], [0.0, 450.0]],
        description="RF 2x2 measurement covariance, m^2",
    )

    @field_validator("r_radar")
    @classmethod
    def _radar_spd(cls, value: List[List[float]]) -> List[List[float]]:
        return _check_spd(value, 3, "r_radar")

    @field_validator("r_rf")
    @classmethod
    def _rf_spd(cls, value: List[List[float]]) -> List[List[float]]:
        return _check_spd(value, 2, "r_rf")

    def measurement_covariance(self, modality: Modality) -> np.ndarray:
        if modality is Modality.RADAR_3D:
            return np.asarray(self.r_radar, dtype=float)
        return np.asarray(self.r_rf, dtype=float)


class InitializationConfig(BaseModel):
    """How the first surviving measurement seeds the filter."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    default_altitude_m: float = 0.0
    position_inflation: float = Field(default=10.0, gt=0)
    velocity_variance: float = Field(default=100.0, gt=0, description="m^2/s^2")
    altitude_variance: float = Field(default=1.0e4, gt=0, description="m^2, used when seeded from a 2D fix")


class FusionConfig(BaseModel):
    """Everything that defines a fusion run."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    schema_version: Literal[1] = 1
    noise: NoiseConfig = Field(default_factory=NoiseConfig)
    gate_confidence: float = Field(default=0.95, gt=0, lt=1)
    radar_max_range_m: float = Field(default=800.0, gt=0)
    radar_origin: EnuPosition = Field(default_factory=EnuPosition)
    range_gating: bool = True
    range_gate_placement: Literal["in_loop", "preprocess"] = "in_loop"
    nis_gating: bool = True
    select_largest_track: bool = True
    tie_break: Literal["radar_first", "rf_first"] = "radar_first"
    initialization: InitializationConfig = Field(default_factory=InitializationConfig)

    @classmethod
    def load(cls, path: Union[str, Path]) -> "FusionConfig":
        return cls.model_validate(json.loads(Path(path).read_text(encoding="utf-8")))

    def save(self, path: Union[str, Path]) -> Path:
        path = Path(path)
        path.write_text(self.model_dump_json(indent=2) + "\n", encoding="utf-8")
        return path
