"""
Artifact Store - Run directories holding manifests, reports and data files
"""
import json
import logging
import uuid
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from pydantic import BaseModel

from ..config import settings
from ..models.manifest import RunManifest
from ..utils.errors import InputDomainError
from ..utils.helpers import is_valid_run_id, sanitize_run_id, timestamp_now

logger = logging.getLogger(__name__)

MANIFEST_NAME = "manifest.json"
INDEX_NAME = "index.json"


def new_run_id(prefix: str) -> str:
    """Sortable, collision-free run id such as fuse_20260101_120000_1a2b3c4d."""
    stamp = datetime.now().strftime("%Y%m%d_%H%M%S")
    return sanitize_run_id(f"{prefix}_{stamp}_{uuid.uuid4().hex[:8]}")


class ArtifactStore:
    """
    Writes the files of one run into a single output directory and keeps
    an index of everything written:
    - manifest.json (RunManifest)
    - report JSON files (pydantic models)
    - CSV data files (written by storage.csv_io, registered here)
    """

    def __init__(self, output_dir: Union[str, Path, None] = None, run_id: Optional[str] = None):
        """
        Initialize a store.

        Args:
            output_dir: Directory to write into; defaults to OUTPUT_DIR/run_id
            run_id: Run identifier; derived from output_dir when omitted
        """
        if output_dir is None:
            run_id = run_id or new_run_id("run")
            output_dir = settings.OUTPUT_DIR / run_id
        self.artifacts_dir = Path(output_dir)
        self.run_id = run_id or self.artifacts_dir.name
        self.artifacts_dir.mkdir(parents=True, exist_ok=True)
        self.artifact_index: List[Dict[str, str]] = []

    def path(self, filename: str) -> Path:
        return self.artifacts_dir / filename

    def register(self, filename: str, kind: str) -> str:
        """
        Record a file written by someone else.

        Args:
            filename: File name inside the run directory
            kind: Short label, e.g. "track" or "cdf"

        Returns:
            The file name
        """
        self.artifact_index = [a for a in self.artifact_index if a["file"] != filename]
        self.artifact_index.append({"file": filename, "kind": kind, "written_at": timestamp_now()})
        self._save_index()
        return filename

    def save_json(self, name: str, data: Any, kind: str = "report") -> str:
        """
        Save a pydantic model or plain data as pretty-printed JSON.

        Args:
            name: File stem
            data: BaseModel or JSON-serializable data
            kind: Index label

        Returns:
            File name
        """
        filename = f"{name}.json"
        if isinstance(data, BaseModel):
            text = data.model_dump_json(indent=2)
        else:
            text = json.dumps(data, indent=2, default=str)
        self.path(filename).write_text(text + "\n", encoding="utf-8")
        return self.register(filename, kind)

    def write_manifest(self, manifest: RunManifest) -> str:
        if manifest.created_at is None:
            manifest = manifest.model_copy(update={"created_at": timestamp_now()})
        self.path(MANIFEST_NAME).write_text(manifest.model_dump_json(indent=2) + "\n", encoding="utf-8")
        return self.register(MANIFEST_NAME, "manifest")

    def _save_index(self) -> None:
        self.path(INDEX_NAME).write_text(json.dumps(self.artifact_index, indent=2), encoding="utf-8")

    def get_artifacts_summary(self) -> Dict[str, Any]:
        return {
            "run_id": self.run_id,
            "artifacts_dir": str(self.artifacts_dir),
            "total_files": len(self.artifact_index),
            "files": self.artifact_index,
        }


def load_run(run_id: str, base_dir: Union[str, Path, None] = None) -> Dict[str, Any]:
    """
    Read back a stored run: manifest, index and every JSON report.

    Args:
        run_id: Run directory name under base_dir
        base_dir: Defaults to settings.OUTPUT_DIR

    Returns:
        Dictionary with run_id, manifest, files and reports
    """
    if not is_valid_run_id(run_id):
        raise InputDomainError(f"invalid run id {run_id!r}")
    run_dir = Path(base_dir or settings.OUTPUT_DIR) / run_id
    manifest_path = run_dir / MANIFEST_NAME
    if not manifest_path.is_file():
        raise FileNotFoundError(run_id)

    index_path = run_dir / INDEX_NAME
    files = json.loads(index_path.read_text(encoding="utf-8")) if index_path.is_file() else []
    reports = {
        entry["file"]: json.loads((run_dir / entry["file"]).read_text(encoding="utf-8"))
        for entry in files
        if entry["file"].endswith(".json") and entry["file"] != MANIFEST_NAME
    }
    return {
        "run_id": run_id,
        "manifest": json.loads(manifest_path.read_text(encoding="utf-8")),
        "files": files,
        "reports": reports,
    }
