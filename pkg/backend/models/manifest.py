"""
Run Manifest Model
"""
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field


class RunManifest(BaseModel):
    """Everything needed to reproduce a CLI or API run."""

    subcommand: str
    config_path: Optional[str] = None
    input_paths: List[str] = Field(default_factory=list)
    output_dir: str
    rng_seed: Optional[int] = None
    tool_version: str
    arguments: Dict[str, Any] = Field(default_factory=dict)
    created_at: Optional[str] = None
