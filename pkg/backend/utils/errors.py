"""
Error hierarchy shared by the tracking core, the CLI and the HTTP API.

Every error carries the process exit code the CLI reports for it.
"""
from typing import Optional


class FusionToolkitError(Exception):
    """Base class for all toolkit errors."""

    exit_code: int = 1


class InputDomainError(FusionToolkitError, ValueError):
    """An argument lies outside the domain of the operation."""

    exit_code = 2


class SchemaError(InputDomainError):
    """A data file violates its documented schema."""

    def __init__(self, message: str, path: Optional[str] = None, line: Optional[int] = None):
        self.path = path
        self.line = line
        location = ""
        if path is not None:
            location = f"{path}"
            if line is not None:
                location += f":{line}"
            location += ": "
        super().__init__(f"{location}{message}")


class ConfigError(FusionToolkitError, ValueError):
    """A configuration value is invalid."""

    exit_code = 2


class OrderingError(FusionToolkitError, ValueError):
    """Measurements or filter steps are not in timestamp order."""

    exit_code = 2


class InsufficientDataError(FusionToolkitError):
    """Not enough usable data to produce a result."""

    exit_code = 3


class CalibrationError(InsufficientDataError):
    """Too few alignable measurements to estimate a covariance."""


class EmptyTrackError(InsufficientDataError):
    """Fusion was asked to run on an empty measurement set."""


class EmptyReportError(InsufficientDataError):
    """No estimate could be aligned to ground truth."""


class OutOfRangeError(InsufficientDataError):
    """A timestamp falls outside the ground-truth span."""


class NumericalDegeneracyError(FusionToolkitError):
    """A matrix that must be inverted is numerically singular."""


class ConvergenceError(FusionToolkitError):
    """An iterative solver failed to converge."""


class GeometryError(FusionToolkitError):
    """Sensor geometry cannot support a position solution."""
