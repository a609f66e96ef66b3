"""
Hierarki error untuk seluruh pipeline.
Semua error data turunan dari ValueError supaya pemanggil lama yang
menangkap ValueError tetap jalan; exit_code dipakai oleh CLI.
"""
from typing import Iterable, Optional


class MinerError(ValueError):
    """Base error untuk semua kegagalan yang disebabkan input atau data."""
    exit_code = 2


class ConfigError(MinerError):
    """Config atau argumen CLI di luar range yang didokumentasikan."""
    exit_code = 1


class ReportParseError(MinerError):
    """JSON report tidak bisa di-parse."""

    def __init__(self, message: str, offset: int, line_no: Optional[int] = None):
        self.offset = offset
        self.line_no = line_no
        where = f"line {line_no}, " if line_no is not None else ""
        super().__init__(f"{where}byte offset {offset}: {message}")


class SchemaError(MinerError):
    """Report valid JSON tapi tidak sesuai schema."""

    def __init__(self, message: str, line_no: Optional[int] = None):
        self.line_no = line_no
        prefix = f"line {line_no}: " if line_no is not None else ""
        super().__init__(prefix + message)


class DuplicateSampleError(MinerError):
    def __init__(self, sample_ids: Iterable[str]):
        self.sample_ids = sorted(set(sample_ids))
        super().__init__(f"Duplicate sample_id: {', '.join(self.sample_ids)}")


class UndefinedColumnError(MinerError):
    """Kolom posisi kosong, sigma tidak terdefinisi."""


class DomainError(MinerError):
    """Argumen di luar domain formula (log X <= 0, token kosong, ...)."""


class UnknownTokenError(MinerError, LookupError):
    def __init__(self, token: str):
        self.token = token
        super().__init__(f"Token '{token}' tidak ada di vocabulary (model stale?)")


class NothingToTrainError(MinerError):
    pass


class StateVersionError(MinerError):
    pass


class StorageError(MinerError):
    """File state atau output tidak bisa ditulis/dibaca (permission atau path bentrok)."""


class GroundTruthError(MinerError):
    def __init__(self, message: str, line_no: Optional[int] = None):
        self.line_no = line_no
        prefix = f"line {line_no}: " if line_no is not None else ""
        super().__init__(prefix + message)


class InvariantViolation(RuntimeError):
    """Internal invariant rusak. Ini bug, bukan masalah input."""
    exit_code = 3


class StageError(MinerError):
    """Membungkus error dari satu stage pipeline beserta nama stage-nya."""

    def __init__(self, stage: str, cause: BaseException):
        self.stage = stage
        self.cause = cause
        self.exit_code = getattr(cause, "exit_code", 3)
        super().__init__(f"[{stage}] {cause}")
