"""
Thread-safe file operations utility.
Mencegah race condition saat pipeline, CLI, dan API mengakses file state
secara bersamaan. Tulis-ulang file selalu lewat temp file + rename supaya
pembaca tidak pernah melihat file setengah jadi.
"""
import os
import tempfile
import threading
from contextlib import contextmanager
from pathlib import Path
from typing import Iterable, Iterator, List, Optional, Tuple


class FileLock:
    """
    Thread-safe file lock menggunakan threading.Lock.
    Satu lock per file path untuk mencegah concurrent access.
    """
    _locks: dict = {}
    _master_lock = threading.Lock()

    @classmethod
    def get_lock(cls, file_path: str) -> threading.Lock:
        """Get atau create lock untuk file tertentu."""
        key = str(Path(file_path).resolve())
        with cls._master_lock:
            if key not in cls._locks:
                cls._locks[key] = threading.Lock()
            return cls._locks[key]


@contextmanager
def file_lock(file_path: str) -> Iterator[None]:
    """
    Context manager untuk file locking.

    Usage:
        with file_lock("/path/to/corpus.ndjson"):
            # safe file operations here
    """
    lock = FileLock.get_lock(file_path)
    lock.acquire()
    try:
        yield
    finally:
        lock.release()


def safe_read_lines(file_path: str, limit: Optional[int] = None) -> List[Tuple[int, str]]:
    """
    Thread-safe file reading.
    Returns list of (line_no, line) untuk baris yang tidak kosong,
    line_no dimulai dari 1. `limit` membatasi jumlah baris data yang dibaca.
    """
    path = Path(file_path)

    with file_lock(file_path):
        if not path.exists():
            return []

        rows: List[Tuple[int, str]] = []
        with open(path, "r", encoding="utf-8") as f:
            for line_no, line in enumerate(f, start=1):
                if limit is not None and len(rows) >= limit:
                    break
                stripped = line.rstrip("\r\n")
                if stripped.strip():
                    rows.append((line_no, stripped))
        return rows


def safe_read_text(file_path: str) -> Optional[str]:
    """Thread-safe baca seluruh isi file, None jika file tidak ada."""
    path = Path(file_path)
    with file_lock(file_path):
        if not path.exists():
            return None
        return path.read_text(encoding="utf-8")


def safe_write_file(file_path: str, lines: Iterable[str], header: Optional[str] = None) -> None:
    """
    Thread-safe atomic file writing.
    Menulis header (opsional) + semua baris ke temp file, lalu rename.
    """
    path = Path(file_path)
    path.parent.mkdir(parents=True, exist_ok=True)

    with file_lock(file_path):
        fd, tmp_name = tempfile.mkstemp(dir=str(path.parent), prefix=f".{path.name}.", suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as f:
                if header is not None:
                    f.write(header + "\n")
                for line in lines:
                    f.write(line + "\n")
            os.replace(tmp_name, path)
        except BaseException:
            if os.path.exists(tmp_name):
                os.unlink(tmp_name)
            raise


def safe_append_file(file_path: str, lines: Iterable[str]) -> None:
    """
    Thread-safe file appending.
    Append beberapa baris sekaligus di bawah satu lock.
    """
    path = Path(file_path)
    path.parent.mkdir(parents=True, exist_ok=True)

    with file_lock(file_path):
        with open(path, "a", encoding="utf-8", newline="\n") as f:
            for line in lines:
                f.write(line + "\n")
