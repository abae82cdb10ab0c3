"""Simulation package"""
from .trajectory import WaypointPath, generate_waypoint_trajectory, truth_track
from .tdoa import SPEED_OF_LIGHT, tdoa_observations, tdoa_localize
from .sensors import SimulationRun, simulate_radar, simulate_rf_fixes, simulate_scenario, sensor_streams

__all__ = [
    "WaypointPath",
    "generate_waypoint_trajectory",
    "truth_track",
    "SPEED_OF_LIGHT",
    "tdoa_observations",
    "tdoa_localize",
    "SimulationRun",
    "simulate_radar",
    "simulate_rf_fixes",
    "simulate_scenario",
    "sensor_streams",
]
