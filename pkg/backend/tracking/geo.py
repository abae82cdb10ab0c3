"""
WGS-84 geodetic <-> local East-North-Up conversion.

Uses the full ellipsoidal chain geodetic -> ECEF -> ENU. Altitudes are
ellipsoidal heights.
"""
import math
from typing import Tuple

import numpy as np

from ..models.geometry import EnuPosition, GeodeticCoord
from ..utils.errors import InputDomainError

WGS84_A = 6378137.0
WGS84_F = 1.0 / 298.257223563
WGS84_E2 = WGS84_F * (2.0 - WGS84_F)


def _check_domain(latitude_deg, longitude_deg) -> None:
    lat = np.asarray(latitude_deg, dtype=float)
    lon = np.asarray(longitude_deg, dtype=float)
    if not (np.all(np.isfinite(lat)) and np.all(np.isfinite(lon))):
        raise InputDomainError("latitude/longitude must be finite")
    if np.any(np.abs(lat) > 90.0):
        raise InputDomainError("latitude must lie within [-90, 90] degrees")
    if np.any(np.abs(lon) > 180.0):
        raise InputDomainError("longitude must lie within [-180, 180] degrees")


def geodetic_to_ecef(latitude_deg, longitude_deg, altitude_m) -> np.ndarray:
    """Vectorized geodetic -> ECEF. Returns an array of shape (..., 3)."""
    lat = np.radians(np.asarray(latitude_deg, dtype=float))
    lon = np.radians(np.asarray(longitude_deg, dtype=float))
    h = np.asarray(altitude_m, dtype=float)
    sin_lat = np.sin(lat)
    n = WGS84_A / np.sqrt(1.0 - WGS84_E2 * sin_lat * sin_lat)
    x = (n + h) * np.cos(lat) * np.cos(lon)
    y = (n + h) * np.cos(lat) * np.sin(lon)
    z = (n * (1.0 - WGS84_E2) + h) * sin_lat
    return np.stack([x, y, z], axis=-1)


def ecef_to_geodetic(ecef: np.ndarray) -> Tuple[float, float, float]:
    """ECEF -> (latitude_deg, longitude_deg, altitude_m) by fixed-point iteration on latitude."""
    x, y, z = (float(v) for v in ecef)
    p = math.hypot(x, y)
    lon = math.atan2(y, x)
    lat = math.atan2(z, p * (1.0 - WGS84_E2))
    for _ in range(20):
        sin_lat = math.sin(lat)
        n = WGS84_A / math.sqrt(1.0 - WGS84_E2 * sin_lat * sin_lat)
        h = p * math.cos(lat) + z * sin_lat - WGS84_A * WGS84_A / n
        new_lat = math.atan2(z, p * (1.0 - WGS84_E2 * n / (n + h)))
        if abs(new_lat - lat) < 1e-15:
            lat = new_lat
            break
        lat = new_lat
    sin_lat = math.sin(lat)
    n = WGS84_A / math.sqrt(1.0 - WGS84_E2 * sin_lat * sin_lat)
    h = p * math.cos(lat) + z * sin_lat - WGS84_A * WGS84_A / n
    return math.degrees(lat), math.degrees(lon), h


def enu_rotation(origin: GeodeticCoord) -> np.ndarray:
    """Rows are the east, north and up unit vectors of the origin, in ECEF."""
    lat = math.radians(origin.latitude_deg)
    lon = math.radians(origin.longitude_deg)
    sin_lat, cos_lat = math.sin(lat), math.cos(lat)
    sin_lon, cos_lon = math.sin(lon), math.cos(lon)
    return np.array([
        [-sin_lon, cos_lon, 0.0],
        [-sin_lat * cos_lon, -sin_lat * sin_lon, cos_lat],
        [cos_lat * cos_lon, cos_lat * sin_lon, sin_lat],
    ])


def geodetic_to_enu(p: GeodeticCoord, origin: GeodeticCoord) -> EnuPosition:
    """
    Convert a geodetic position into the ENU frame of origin.

    Args:
        p: Point to convert
        origin: Frame origin

    Returns:
        ENU position in meters
    """
    _check_domain([p.latitude_deg, origin.latitude_deg], [p.longitude_deg, origin.longitude_deg])
    enu = geodetic_array_to_enu(
        np.array([p.latitude_deg]), np.array([p.longitude_deg]), np.array([p.altitude_m]), origin
    )[0]
    return EnuPosition.from_array(enu)


def geodetic_array_to_enu(latitude_deg, longitude_deg, altitude_m, origin: GeodeticCoord) -> np.ndarray:
    """Vectorized geodetic -> ENU for whole columns. Returns shape (N, 3)."""
    _check_domain(latitude_deg, longitude_deg)
    ecef = geodetic_to_ecef(latitude_deg, longitude_deg, altitude_m)
    ecef0 = geodetic_to_ecef(origin.latitude_deg, origin.longitude_deg, origin.altitude_m)
    return (ecef - ecef0) @ enu_rotation(origin).T


def enu_to_geodetic(p: EnuPosition, origin: GeodeticCoord) -> GeodeticCoord:
    """
    Convert an ENU position in the frame of origin back to geodetic.

    Args:
        p: ENU position
        origin: Frame origin

    Returns:
        Geodetic coordinate
    """
    _check_domain(origin.latitude_deg, origin.longitude_deg)
    ecef0 = geodetic_to_ecef(origin.latitude_deg, origin.longitude_deg, origin.altitude_m)
    ecef = ecef0 + enu_rotation(origin).T @ p.as_array()
    lat, lon, h = ecef_to_geodetic(ecef)
    return GeodeticCoord(latitude_deg=lat, longitude_deg=lon, altitude_m=h)
