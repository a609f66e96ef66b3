from .file_lock import FileLock, safe_read_lines, safe_read_text, safe_write_file, safe_append_file
from .errors import MinerError, StageError, InvariantViolation

__all__ = [
    "FileLock",
    "safe_read_lines",
    "safe_read_text",
    "safe_write_file",
    "safe_append_file",
    "MinerError",
    "StageError",
    "InvariantViolation",
]
