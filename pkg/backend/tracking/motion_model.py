"""
Constant-velocity motion model, white-acceleration process noise and the
position-selecting measurement matrices.

State order is x, y, z, vx, vy, vz.
"""
import numpy as np

from ..models.measurement import Modality
from ..utils.errors import ConfigError, InputDomainError

STATE_DIM = 6


def cv_transition(dt: float) -> np.ndarray:
    """
    Constant-velocity transition matrix [[I, dt*I], [0, I]].

    Args:
        dt: Propagation interval in seconds

    Returns:
        6x6 transition matrix
    """
    if dt < 0:
        raise InputDomainError(f"dt must be non-negative, got {dt}")
    f = np.eye(STATE_DIM)
    f[0:3, 3:6] = dt * np.eye(3)
    return f


def process_noise(dt: float, sigma_a: float) -> np.ndarray:
    """
    Discrete white-acceleration process noise.

    Each axis gets sigma_a^2 * [[dt^4/4, dt^3/2], [dt^3/2, dt^2]], spread
    over the (position, velocity) pair of that axis.

    Args:
        dt: Propagation interval in seconds
        sigma_a: Acceleration noise standard deviation, m/s^2

    Returns:
        6x6 covariance
    """
    if sigma_a <= 0:
        raise ConfigError(f"sigma_a must be positive, got {sigma_a}")
    if dt < 0:
        raise InputDomainError(f"dt must be non-negative, got {dt}")
    block = np.array([
        [dt ** 4 / 4.0, dt ** 3 / 2.0],
        [dt ** 3 / 2.0, dt ** 2],
    ])
    return sigma_a ** 2 * np.kron(block, np.eye(3))


def measurement_matrix(modality: Modality) -> np.ndarray:
    """Leading-block selector: [I3 | 0] for radar, [I2 | 0] for RF."""
    return np.eye(modality.dim, STATE_DIM)
