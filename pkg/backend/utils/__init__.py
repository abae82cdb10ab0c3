"""Utilities package"""
from .helpers import sanitize_run_id, is_valid_run_id, format_duration, timestamp_now
from .errors import (
    FusionToolkitError,
    InputDomainError,
    SchemaError,
    ConfigError,
    OrderingError,
    InsufficientDataError,
    CalibrationError,
    EmptyTrackError,
    EmptyReportError,
    OutOfRangeError,
    NumericalDegeneracyError,
    ConvergenceError,
    GeometryError,
)

__all__ = [
    "sanitize_run_id",
    "is_valid_run_id",
    "format_duration",
    "timestamp_now",
    "FusionToolkitError",
    "InputDomainError",
    "SchemaError",
    "ConfigError",
    "OrderingError",
    "InsufficientDataError",
    "CalibrationError",
    "EmptyTrackError",
    "EmptyReportError",
    "OutOfRangeError",
    "NumericalDegeneracyError",
    "ConvergenceError",
    "GeometryError",
]
