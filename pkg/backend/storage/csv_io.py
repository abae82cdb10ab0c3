"""
CSV schemas for measurements, ground truth, fused tracks and derived
evaluation data.
"""
import logging
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, Union

import numpy as np
import pandas as pd
from pydantic import ValidationError

from ..models.geometry import EnuPosition
from ..models.measurement import GroundTruthSample, Measurement, Modality
from ..tracking.fusion import FusedTrack, TrackPoint
from ..tracking.kalman_filter import UpdateKind
from ..tracking.motion_model import STATE_DIM
from ..utils.errors import SchemaError

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

MEASUREMENT_COLUMNS = ["t_s", "modality", "x_m", "y_m", "z_m", "track_id"]
TRUTH_COLUMNS = ["t_s", "x_m", "y_m", "z_m"]
TRACK_COLUMNS = ["t", "x", "y", "z", "vx", "vy", "vz", "kind", "source", "nis"]
COVARIANCE_COLUMNS = [f"p{i}{j}" for i in range(STATE_DIM) for j in range(i, STATE_DIM)]
CDF_COLUMNS = ["error_m", "fraction"]
RANGE_BIN_COLUMNS = ["range_lo_m", "range_hi_m", "count", "mean_m", "std_m"]
ERROR_SERIES_COLUMNS = ["t_s", "error_m", "kind"]


def read_table(path: PathLike, columns: Optional[Sequence[str]] = None) -> pd.DataFrame:
    """
    Read a CSV as strings, checking the header.

    Args:
        path: CSV file
        columns: Exact expected header, or None to accept any header

    Returns:
        DataFrame of raw string cells
    """
    path = Path(path)
    if not path.is_file():
        raise SchemaError("file not found", str(path))
    if path.stat().st_size == 0:
        return pd.DataFrame(columns=list(columns or []))
    try:
        frame = pd.read_csv(path, dtype=str, keep_default_na=False)
    except (pd.errors.ParserError, UnicodeDecodeError) as exc:
        raise SchemaError(f"unreadable CSV: {exc}", str(path)) from exc
    if columns is not None and list(frame.columns) != list(columns):
        raise SchemaError(
            f"header must be {','.join(columns)}, got {','.join(map(str, frame.columns))}", str(path), 1
        )
    return frame


def _float(value: str, column: str, path: Path, line: int) -> float:
    try:
        return float(value)
    except ValueError:
        raise SchemaError(f"column {column}: {value!r} is not a number", str(path), line) from None


def _optional_float(value: str, column: str, path: Path, line: int) -> Optional[float]:
    return None if value.strip() == "" else _float(value, column, path, line)


def _line(index: int) -> int:
    # header is line 1
    return int(index) + 2


def read_measurements(path: PathLike, modality: Optional[Modality] = None) -> List[Measurement]:
    """
    Load a measurement CSV (t_s,modality,x_m,y_m,z_m,track_id).

    Args:
        path: CSV file
        modality: Keep only rows of this modality

    Returns:
        Measurements in file order
    """
    path = Path(path)
    frame = read_table(path, MEASUREMENT_COLUMNS)
    measurements: List[Measurement] = []
    for index, row in frame.iterrows():
        line = _line(index)
        try:
            row_modality = Modality(row["modality"].strip())
        except ValueError:
            raise SchemaError(f"modality must be radar or rf, got {row['modality']!r}", str(path), line) from None
        if modality is not None and row_modality is not modality:
            continue

        position = [_float(row["x_m"], "x_m", path, line), _float(row["y_m"], "y_m", path, line)]
        z = _optional_float(row["z_m"], "z_m", path, line)
        if row_modality is Modality.RADAR_3D:
            if z is None:
                raise SchemaError("radar rows need z_m", str(path), line)
            position.append(z)
        elif z is not None:
            raise SchemaError("rf rows must leave z_m empty", str(path), line)

        track_id = row["track_id"].strip()
        try:
            measurements.append(
                Measurement(
                    timestamp=_float(row["t_s"], "t_s", path, line),
                    modality=row_modality,
                    position=tuple(position),
                    track_id=int(track_id) if track_id else None,
                )
            )
        except (ValidationError, ValueError) as exc:
            raise SchemaError(str(exc).splitlines()[0], str(path), line) from exc
    logger.debug("read %d measurements from %s", len(measurements), path)
    return measurements


def write_measurements(path: PathLike, ms: Iterable[Measurement]) -> Path:
    rows = []
    for m in ms:
        z = m.position[2] if m.modality is Modality.RADAR_3D else ""
        rows.append([m.timestamp, m.modality.value, m.position[0], m.position[1], z, "" if m.track_id is None else m.track_id])
    return _write(path, rows, MEASUREMENT_COLUMNS)


def read_ground_truth(path: PathLike) -> List[GroundTruthSample]:
    """Load a ground-truth CSV (t_s,x_m,y_m,z_m)."""
    path = Path(path)
    frame = read_table(path, TRUTH_COLUMNS)
    samples = []
    for index, row in frame.iterrows():
        line = _line(index)
        values = [_float(row[c], c, path, line) for c in TRUTH_COLUMNS]
        try:
            samples.append(GroundTruthSample(timestamp=values[0], position=EnuPosition.from_array(values[1:])))
        except ValidationError as exc:
            raise SchemaError(str(exc).splitlines()[0], str(path), line) from exc
    return samples


def write_ground_truth(path: PathLike, samples: Iterable[GroundTruthSample]) -> Path:
    rows = [[s.timestamp, *s.position.as_tuple()] for s in samples]
    return _write(path, rows, TRUTH_COLUMNS)


def write_track(path: PathLike, track: FusedTrack, covariance_path: Optional[PathLike] = None) -> Path:
    """Write track.csv and, when covariance_path is given, the 21 upper-triangle covariance entries per row."""
    rows = [
        [
            p.timestamp,
            *(float(v) for v in p.state),
            p.kind.value,
            p.source.value if p.source is not None else "",
            "" if p.nis is None else float(p.nis),
        ]
        for p in track
    ]
    written = _write(path, rows, TRACK_COLUMNS)
    if covariance_path is not None:
        upper = np.triu_indices(STATE_DIM)
        cov_rows = [[float(v) for v in np.asarray(p.covariance)[upper]] for p in track]
        _write(covariance_path, cov_rows, COVARIANCE_COLUMNS)
    return written


def read_track(path: PathLike, covariance_path: Optional[PathLike] = None) -> FusedTrack:
    """
    Load a track CSV written by write_track.

    Args:
        path: track.csv
        covariance_path: Optional matching track_covariance.csv

    Returns:
        FusedTrack; covariances are None unless covariance_path is given
    """
    path = Path(path)
    frame = read_table(path, TRACK_COLUMNS)
    covariances: List[Optional[np.ndarray]] = [None] * len(frame)
    if covariance_path is not None:
        covariances = _read_covariances(Path(covariance_path), len(frame))

    track = FusedTrack()
    for (index, row), covariance in zip(frame.iterrows(), covariances):
        line = _line(index)
        state = np.array([_float(row[c], c, path, line) for c in TRACK_COLUMNS[1:7]])
        try:
            kind = UpdateKind(row["kind"].strip())
            source = Modality(row["source"].strip()) if row["source"].strip() else None
        except ValueError:
            raise SchemaError(f"bad kind/source {row['kind']!r}/{row['source']!r}", str(path), line) from None
        if kind not in (UpdateKind.UPDATED, UpdateKind.COASTED):
            raise SchemaError(f"kind must be updated or coasted, got {kind.value}", str(path), line)
        track.append(
            TrackPoint(
                timestamp=_float(row["t"], "t", path, line),
                state=state,
                covariance=covariance,
                kind=kind,
                source=source,
                nis=_optional_float(row["nis"], "nis", path, line),
            )
        )
    return track


def _read_covariances(path: Path, expected_rows: int) -> List[np.ndarray]:
    frame = read_table(path, COVARIANCE_COLUMNS)
    if len(frame) != expected_rows:
        raise SchemaError(f"expected {expected_rows} covariance rows, got {len(frame)}", str(path))
    upper = np.triu_indices(STATE_DIM)
    covariances = []
    for index, row in frame.iterrows():
        line = _line(index)
        matrix = np.zeros((STATE_DIM, STATE_DIM))
        matrix[upper] = [_float(row[c], c, path, line) for c in COVARIANCE_COLUMNS]
        covariances.append(matrix + np.triu(matrix, 1).T)
    return covariances


def write_rows(path: PathLike, columns: Sequence[str], rows: Iterable[Sequence]) -> Path:
    """Write plain rows; None cells are left empty."""
    cleaned = [["" if v is None else v for v in row] for row in rows]
    return _write(path, cleaned, columns)


def _write(path: PathLike, rows: List[List], columns: Sequence[str]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    pd.DataFrame(rows, columns=list(columns), dtype=object).to_csv(path, index=False, lineterminator="\n")
    return path
