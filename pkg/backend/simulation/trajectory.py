"""
Piecewise-linear constant-speed ground-truth trajectories.
"""
import logging
import math
from typing import List, Sequence

import numpy as np

from ..models.geometry import EnuPosition
from ..models.measurement import GroundTruthSample
from ..models.scenario import SensorScenario
from ..tracking.calibration import TruthTrack
from ..utils.errors import InputDomainError

logger = logging.getLogger(__name__)


class WaypointPath:
    """Straight segments between waypoints flown at a constant speed."""

    def __init__(self, waypoints: Sequence[EnuPosition], speed_mps: float, start_time_s: float = 0.0):
        if len(waypoints) < 2:
            raise InputDomainError("a path needs at least two waypoints")
        if not speed_mps > 0:
            raise InputDomainError(f"speed must be positive, got {speed_mps}")
        points = np.array([w.as_tuple() for w in waypoints], dtype=float)
        lengths = np.linalg.norm(np.diff(points, axis=0), axis=1)
        degenerate = np.flatnonzero(lengths == 0)
        if degenerate.size:
            raise InputDomainError(f"waypoints {degenerate[0]} and {degenerate[0] + 1} coincide (degenerate segment)")
        self.points = points
        self.speed_mps = float(speed_mps)
        self.start_time_s = float(start_time_s)
        self.arc_length = np.concatenate([[0.0], np.cumsum(lengths)])

    @property
    def length_m(self) -> float:
        return float(self.arc_length[-1])

    @property
    def duration_s(self) -> float:
        return self.length_m / self.speed_mps

    @property
    def end_time_s(self) -> float:
        return self.start_time_s + self.duration_s

    @property
    def corner_times(self) -> np.ndarray:
        return self.start_time_s + self.arc_length / self.speed_mps

    def positions_at(self, t) -> np.ndarray:
        """Exact positions at times t, clamped to the path end points."""
        s = (np.atleast_1d(np.asarray(t, dtype=float)) - self.start_time_s) * self.speed_mps
        return np.column_stack([np.interp(s, self.arc_length, self.points[:, k]) for k in range(3)])

    def sample_times(self, rate_hz: float) -> np.ndarray:
        """Uniform grid at rate_hz from the start, always including the end time."""
        if not rate_hz > 0:
            raise InputDomainError(f"sample rate must be positive, got {rate_hz}")
        duration = self.duration_s
        n = int(math.floor(duration * rate_hz + 1e-9)) + 1
        times = np.arange(n) / rate_hz
        if duration - times[-1] > 1e-9:
            times = np.append(times, duration)
        return self.start_time_s + times

    @classmethod
    def from_scenario(cls, sc: SensorScenario) -> "WaypointPath":
        return cls(sc.waypoints, sc.speed_mps, sc.start_time_s)


def generate_waypoint_trajectory(sc: SensorScenario) -> List[GroundTruthSample]:
    """
    Sample the scenario's waypoint path at gt_rate_hz.

    Args:
        sc: Scenario with waypoints, speed and truth rate

    Returns:
        Ground-truth samples from the first to the last waypoint inclusive
    """
    return truth_track(sc).to_samples()


def truth_track(sc: SensorScenario) -> TruthTrack:
    """Array form of generate_waypoint_trajectory."""
    path = WaypointPath.from_scenario(sc)
    times = path.sample_times(sc.gt_rate_hz)
    logger.debug("trajectory: %.1f m over %.1f s, %d samples", path.length_m, path.duration_s, times.size)
    return TruthTrack(times, path.positions_at(times))
