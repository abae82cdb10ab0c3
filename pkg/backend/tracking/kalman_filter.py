"""
Kalman predict/update engine with NIS validation gating.

A FilterState is an immutable value; predict and update return new
states and never mutate their inputs.
"""
import logging
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Optional, Tuple

import numpy as np
from scipy.stats import chi2

from ..models.fusion_config import InitializationConfig, NoiseConfig
from ..models.measurement import Modality
from ..utils.errors import ConfigError, InputDomainError, NumericalDegeneracyError, OrderingError
from .motion_model import STATE_DIM, cv_transition, measurement_matrix, process_noise

logger = logging.getLogger(__name__)

MIN_RECIPROCAL_CONDITION = 1e-12


class UpdateKind(str, Enum):
    UPDATED = "updated"
    REJECTED_BY_GATE = "rejected_by_gate"
    COASTED = "coasted"


class GateDecision(str, Enum):
    ACCEPT = "accept"
    REJECT = "reject"


@dataclass(frozen=True)
class FilterState:
    """CV estimate, its covariance and the time it refers to."""

    estimate: np.ndarray
    covariance: np.ndarray
    timestamp: float

    @property
    def position(self) -> np.ndarray:
        return self.estimate[0:3]

    @property
    def velocity(self) -> np.ndarray:
        return self.estimate[3:6]


@dataclass(frozen=True)
class UpdateOutcome:
    kind: UpdateKind
    nis_value: Optional[float] = None
    innovation: Optional[np.ndarray] = None


def _symmetrize(matrix: np.ndarray) -> np.ndarray:
    return 0.5 * (matrix + matrix.T)


def _check_conditioning(s: np.ndarray) -> None:
    cond = np.linalg.cond(s)
    if not np.isfinite(cond) or 1.0 / cond < MIN_RECIPROCAL_CONDITION:
        raise NumericalDegeneracyError(f"innovation covariance is singular (condition number {cond:.3e})")


def predict(fs: FilterState, dt: float, noise: NoiseConfig) -> FilterState:
    """
    Propagate a filter state forward by dt seconds.

    Args:
        fs: Current state
        dt: Propagation interval; zero returns fs unchanged
        noise: Process noise settings

    Returns:
        Predicted state at fs.timestamp + dt
    """
    if dt < 0:
        raise OrderingError(f"cannot predict backwards in time (dt={dt}); sort measurements first")
    if dt == 0:
        return fs
    f = cv_transition(dt)
    estimate = f @ fs.estimate
    covariance = _symmetrize(f @ fs.covariance @ f.T + process_noise(dt, noise.sigma_a))
    return FilterState(estimate=estimate, covariance=covariance, timestamp=fs.timestamp + dt)


def nis(innovation: np.ndarray, s: np.ndarray) -> float:
    """Normalized innovation squared y' S^-1 y."""
    y = np.asarray(innovation, dtype=float)
    s = np.asarray(s, dtype=float)
    _check_conditioning(s)
    return max(0.0, float(y @ np.linalg.solve(s, y)))


@lru_cache(maxsize=64)
def chi2_threshold(dim: int, confidence: float) -> float:
    """
    Inverse chi-squared CDF at confidence with dim degrees of freedom.

    Args:
        dim: Measurement dimension, 2 or 3
        confidence: Gate probability in (0, 1)

    Returns:
        Gate threshold on NIS
    """
    if dim not in (2, 3):
        raise InputDomainError(f"gating dimension must be 2 or 3, got {dim}")
    if not 0.0 < confidence < 1.0:
        raise ConfigError(f"confidence must lie in (0, 1), got {confidence}")
    return float(chi2.ppf(confidence, dim))


def gate(nis_value: float, dim: int, confidence: float) -> GateDecision:
    """Accept iff nis_value lies inside the chi-squared confidence region."""
    if nis_value <= chi2_threshold(dim, confidence):
        return GateDecision.ACCEPT
    return GateDecision.REJECT


def update(
    fs: FilterState,
    z,
    modality: Modality,
    noise: NoiseConfig,
    gate_confidence: Optional[float] = None,
) -> Tuple[FilterState, UpdateOutcome]:
    """
    Correct a (predicted) state with one measurement.

    The covariance is updated in Joseph form and symmetrized. When
    gate_confidence is given the measurement is first NIS-tested; a
    rejected measurement returns fs itself, untouched.

    Args:
        fs: Prior state, usually the output of predict
        z: Measurement vector (3 for radar, 2 for RF)
        modality: Sensing modality of z
        noise: Measurement covariances
        gate_confidence: Optional NIS gate probability

    Returns:
        Tuple of (posterior state, outcome)
    """
    z = np.asarray(z, dtype=float)
    if z.shape != (modality.dim,):
        raise InputDomainError(f"{modality.value} measurement must have {modality.dim} components, got {z.shape}")

    h = measurement_matrix(modality)
    r = noise.measurement_covariance(modality)
    innovation = z - h @ fs.estimate
    s = _symmetrize(h @ fs.covariance @ h.T + r)
    nis_value = nis(innovation, s)

    if gate_confidence is not None and gate(nis_value, modality.dim, gate_confidence) is GateDecision.REJECT:
        return fs, UpdateOutcome(UpdateKind.REJECTED_BY_GATE, nis_value, innovation)

    # K = P H' S^-1, computed as a solve against symmetric S
    gain = np.linalg.solve(s, h @ fs.covariance).T
    estimate = fs.estimate + gain @ innovation
    a = np.eye(STATE_DIM) - gain @ h
    covariance = _symmetrize(a @ fs.covariance @ a.T + gain @ r @ gain.T)
    posterior = FilterState(estimate=estimate, covariance=covariance, timestamp=fs.timestamp)
    return posterior, UpdateOutcome(UpdateKind.UPDATED, nis_value, innovation)


def initialize(
    first_z,
    modality: Modality,
    noise: NoiseConfig,
    t: float,
    init: Optional[InitializationConfig] = None,
) -> FilterState:
    """
    Seed a filter from its first measurement.

    Position comes from the fix (altitude from init.default_altitude_m for
    2D fixes), velocity starts at zero. Position covariance is the
    measurement covariance inflated by init.position_inflation.

    Args:
        first_z: First measurement vector
        modality: Its modality
        noise: Measurement covariances
        t: Its timestamp
        init: Initialization settings

    Returns:
        Initial filter state
    """
    init = init or InitializationConfig()
    z = np.asarray(first_z, dtype=float)
    if z.shape != (modality.dim,):
        raise InputDomainError(f"{modality.value} measurement must have {modality.dim} components, got {z.shape}")

    estimate = np.zeros(STATE_DIM)
    covariance = np.zeros((STATE_DIM, STATE_DIM))
    r = noise.measurement_covariance(modality)
    d = modality.dim
    estimate[0:d] = z
    covariance[0:d, 0:d] = init.position_inflation * r
    if d == 2:
        estimate[2] = init.default_altitude_m
        covariance[2, 2] = init.altitude_variance
    covariance[3:6, 3:6] = init.velocity_variance * np.eye(3)
    logger.debug("filter initialized from %s fix at t=%.3f", modality.value, t)
    return FilterState(estimate=estimate, covariance=covariance, timestamp=t)
