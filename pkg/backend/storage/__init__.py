"""Storage package"""
from .csv_io import (
    read_measurements,
    write_measurements,
    read_ground_truth,
    write_ground_truth,
    read_track,
    write_track,
    write_rows,
    read_table,
)
from .artifact_store import ArtifactStore, new_run_id, load_run

__all__ = [
    "read_measurements",
    "write_measurements",
    "read_ground_truth",
    "write_ground_truth",
    "read_track",
    "write_track",
    "write_rows",
    "read_table",
    "ArtifactStore",
    "new_run_id",
    "load_run",
]
