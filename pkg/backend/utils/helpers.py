"""
Run-id, timing and timestamp helpers
"""
import re
from datetime import datetime, timezone

_RUN_ID = re.compile(r"[A-Za-z0-9][A-Za-z0-9_.-]{0,99}")
_RUN_ID_INVALID_CHARS = re.compile(r"[^A-Za-z0-9_.-]")


def sanitize_run_id(name: str) -> str:
    """
    Turn an arbitrary label into a run-directory name.

    Characters outside [A-Za-z0-9_.-] become underscores and the result
    is capped at 100 characters.
    """
    return _RUN_ID_INVALID_CHARS.sub("_", name.strip())[:100]


def is_valid_run_id(run_id: str) -> bool:
    """True if run_id names a single directory below the output root."""
    return bool(_RUN_ID.fullmatch(run_id))


def format_duration(ms: float) -> str:
    """
    Format a runtime in milliseconds for log lines.

    Args:
        ms: Duration in milliseconds

    Returns:
        e.g. 850ms, 2.4s or 3m 12s
    """
    if ms < 1000:
        return f"{ms:.0f}ms"
    if ms < 60000:
        return f"{ms / 1000:.1f}s"
    minutes = int(ms // 60000)
    seconds = (ms % 60000) / 1000
    return f"{minutes}m {seconds:.0f}s"


def timestamp_now() -> str:
    """Current UTC time in ISO 8601."""
    return datetime.now(timezone.utc).isoformat()
