"""
2D TDOA multilateration: observation generation and a Gauss-Newton solver
on hyperbolic range-difference residuals.

Sensors and emitters are handled as horizontal (east, north) projections.
"""
import logging
from typing import List, Sequence, Union

import numpy as np

from ..models.geometry import EnuPosition
from ..models.scenario import TdoaObservation
from ..utils.errors import ConvergenceError, GeometryError, InputDomainError

logger = logging.getLogger(__name__)

SPEED_OF_LIGHT = 299792458.0
MAX_ITERATIONS = 50
STEP_TOLERANCE_M = 1e-9
COST_RTOL = 1e-12
MAX_STEP_HALVINGS = 40
COLLINEARITY_RATIO = 1e-9

PointLike = Union[EnuPosition, Sequence[float], np.ndarray]


def _horizontal(points: Sequence[PointLike]) -> np.ndarray:
    rows = [p.as_tuple()[:2] if isinstance(p, EnuPosition) else tuple(np.asarray(p, dtype=float)[:2]) for p in points]
    return np.array(rows, dtype=float).reshape(-1, 2)


def check_geometry(sensors: Sequence[PointLike]) -> np.ndarray:
    """Horizontal sensor array; raises GeometryError when sensors are collinear."""
    xy = _horizontal(sensors)
    if len(xy) < 3:
        raise GeometryError(f"2D TDOA needs at least 3 sensors, got {len(xy)}")
    singular = np.linalg.svd(xy - xy.mean(axis=0), compute_uv=False)
    if singular[0] == 0 or singular[1] / singular[0] < COLLINEARITY_RATIO:
        raise GeometryError("sensors are collinear; 2D position is unobservable")
    return xy


def tdoa_observations(
    sensors: Sequence[PointLike],
    emitter: PointLike,
    reference_index: int = 0,
) -> List[TdoaObservation]:
    """
    Noiseless arrival-time differences of an emission, reference sensor first.

    Args:
        sensors: Sensor positions
        emitter: Emitter position
        reference_index: Sensor every pair is taken against

    Returns:
        One observation per non-reference sensor
    """
    xy = _horizontal(sensors)
    if not 0 <= reference_index < len(xy):
        raise InputDomainError(f"reference_index {reference_index} outside 0..{len(xy) - 1}")
    p = _horizontal([emitter])[0]
    distances = np.linalg.norm(xy - p, axis=1)
    return [
        TdoaObservation(
            sensor_pair=(reference_index, j),
            delta_t=float((distances[j] - distances[reference_index]) / SPEED_OF_LIGHT),
        )
        for j in range(len(xy))
        if j != reference_index
    ]


def _residuals(p: np.ndarray, xy: np.ndarray, pairs: np.ndarray, measured: np.ndarray) -> np.ndarray:
    distances = np.linalg.norm(xy - p, axis=1)
    return measured - (distances[pairs[:, 1]] - distances[pairs[:, 0]])


def _jacobian(p: np.ndarray, xy: np.ndarray, pairs: np.ndarray) -> np.ndarray:
    diff = p - xy
    distances = np.maximum(np.linalg.norm(diff, axis=1), 1e-12)
    units = diff / distances[:, None]
    return units[pairs[:, 1]] - units[pairs[:, 0]]


def tdoa_localize(sensors: Sequence[PointLike], obs: Sequence[TdoaObservation]) -> np.ndarray:
    """
    Least-squares 2D emitter position from TDOA observations.

    Minimizes r_j = c*dt_j - (|p - s_j| - |p - s_i|) over all pairs (i, j)
    by Gauss-Newton from the sensor centroid, halving steps that do not
    reduce the cost.

    Args:
        sensors: Sensor positions (at least 3, not collinear)
        obs: At least two observations

    Returns:
        (east, north) estimate, meters
    """
    xy = check_geometry(sensors)
    if len(obs) < 2:
        raise InputDomainError(f"2D TDOA needs at least 2 observations, got {len(obs)}")
    pairs = np.array([o.sensor_pair for o in obs], dtype=int)
    if pairs.max() >= len(xy):
        raise InputDomainError(f"observation references sensor {pairs.max()} but only {len(xy)} sensors exist")
    measured = SPEED_OF_LIGHT * np.array([o.delta_t for o in obs], dtype=float)

    p = xy.mean(axis=0)
    residual = _residuals(p, xy, pairs, measured)
    cost = float(residual @ residual)
    for _ in range(MAX_ITERATIONS):
        jac = _jacobian(p, xy, pairs)
        step, *_ = np.linalg.lstsq(jac, residual, rcond=None)
        if not np.all(np.isfinite(step)):
            raise ConvergenceError("Gauss-Newton step is not finite")
        if np.linalg.norm(step) < STEP_TOLERANCE_M:
            return p + step

        for _ in range(MAX_STEP_HALVINGS):
            candidate = p + step
            candidate_residual = _residuals(candidate, xy, pairs, measured)
            candidate_cost = float(candidate_residual @ candidate_residual)
            if candidate_cost < cost:
                break
            step = step / 2.0
        else:
            # no strict descent along the step: p is a minimum to working precision
            return p

        settled = np.linalg.norm(step) < STEP_TOLERANCE_M or cost - candidate_cost <= COST_RTOL * cost
        p, residual, cost = candidate, candidate_residual, candidate_cost
        if settled:
            return p

    raise ConvergenceError(f"TDOA solver did not converge in {MAX_ITERATIONS} iterations (cost {cost:.3e} m^2)")
