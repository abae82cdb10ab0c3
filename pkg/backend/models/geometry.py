"""
Coordinate Data Models
"""
import math
from typing import Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator


class GeodeticCoord(BaseModel):
    """WGS-84 geodetic position; altitude is height above the ellipsoid."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    latitude_deg: float = Field(..., ge=-90.0, le=90.0, description="Latitude in decimal degrees")
    longitude_deg: float = Field(..., ge=-180.0, le=180.0, description="Longitude in decimal degrees")
    altitude_m: float = Field(default=0.0, description="Height above the WGS-84 ellipsoid")


class EnuPosition(BaseModel):
    """Position in a local East-North-Up frame, meters from the frame origin."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    east_m: float = 0.0
    north_m: float = 0.0
    up_m: float = 0.0

    @field_validator("east_m", "north_m", "up_m")
    @classmethod
    def _finite(cls, value: float) -> float:
        if not math.isfinite(value):
            raise ValueError("ENU components must be finite")
        return value

    @classmethod
    def from_array(cls, values) -> "EnuPosition":
        east, north, up = (float(v) for v in values)
        return cls(east_m=east, north_m=north, up_m=up)

    def as_tuple(self) -> Tuple[float, float, float]:
        return (self.east_m, self.north_m, self.up_m)

    def as_array(self) -> np.ndarray:
        return np.array(self.as_tuple(), dtype=float)
