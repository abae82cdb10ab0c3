"""
Measurement Data Models
"""
import math
from enum import Enum
from typing import Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from .geometry import EnuPosition


class Modality(str, Enum):
    """Sensing modality; the value is the CSV spelling."""

    RADAR_3D = "radar"
    RF_2D = "rf"

    @property
    def dim(self) -> int:
        return 3 if self is Modality.RADAR_3D else 2


class Measurement(BaseModel):
    """One timestamped position fix in the shared ENU frame."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    timestamp: float = Field(..., description="Seconds, epoch-relative")
    modality: Modality
    position: Tuple[float, ...] = Field(..., description="ENU meters; 3 components for radar, 2 for RF")
    track_id: Optional[int] = Field(default=None, description="Sensor track id (radar only)")

    @model_validator(mode="after")
    def _check_dimension(self) -> "Measurement":
        if len(self.position) != self.modality.dim:
            raise ValueError(
                f"{self.modality.value} measurement needs {self.modality.dim} components, "
                f"got {len(self.position)}"
            )
        if not all(math.isfinite(v) for v in self.position) or not math.isfinite(self.timestamp):
            raise ValueError("measurement values must be finite")
        if self.modality is Modality.RF_2D and self.track_id is not None:
            raise ValueError("track_id is only defined for radar measurements")
        return self

    @property
    def vector(self) -> np.ndarray:
        return np.asarray(self.position, dtype=float)


class GroundTruthSample(BaseModel):
    """RTK reference position at a timestamp."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    timestamp: float
    position: EnuPosition
