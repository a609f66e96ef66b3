"""
Repository layer untuk corpus sampel di state directory.
Bertanggung jawab untuk semua operasi I/O file terkait report:
corpus.ndjson (append-only) dan version.json (sidecar versi).
"""
import json
import logging
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterator, List, Optional, Tuple

from schemas.report import AvReport, Corpus, CorpusState
from utils.errors import ConfigError, StateVersionError
from utils.file_lock import safe_append_file, safe_read_lines, safe_read_text, safe_write_file

logger = logging.getLogger(__name__)

STATE_FORMAT = 1


def read_raw_lines(file_path: str) -> Iterator[Tuple[int, bytes]]:
    """
    Baca file input report per baris sebagai bytes (decode dilakukan parser).
    Baris kosong dilewati; line_no dimulai dari 1.

    Raises:
        ConfigError: file tidak ada atau tidak bisa dibaca
    """
    path = Path(file_path)
    if not path.is_file():
        raise ConfigError(f"File report tidak ditemukan: {file_path}")
    with open(path, "rb") as f:
        for line_no, raw in enumerate(f, start=1):
            raw = raw.rstrip(b"\r\n")
            if raw.strip():
                yield line_no, raw


class CorpusRepository:
    """
    Repository untuk corpus persisten.
    Format: corpus.ndjson (satu AvReport per baris) + version.json.
    Pembaca hanya membaca `samples` baris pertama yang tercatat di
    version.json, jadi append yang belum selesai tidak pernah terlihat.
    """

    CORPUS_FILE = "corpus.ndjson"
    VERSION_FILE = "version.json"

    def __init__(self, state_dir: str):
        """
        Args:
            state_dir: Path ke state directory (dibuat saat write pertama)
        """
        self.state_dir = Path(state_dir)
        self.corpus_path = str(self.state_dir / self.CORPUS_FILE)
        self.version_path = str(self.state_dir / self.VERSION_FILE)

    def exists(self) -> bool:
        return Path(self.version_path).exists()

    def read_state(self) -> CorpusState:
        """
        Baca version.json.

        Raises:
            StateVersionError: file tidak ada, rusak, atau format tidak kompatibel
        """
        text = safe_read_text(self.version_path)
        if text is None:
            raise StateVersionError(f"State tidak ditemukan di {self.state_dir} (jalankan 'mine' dulu)")
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise StateVersionError(f"version.json rusak: {e.msg}") from None
        if data.get("format") != STATE_FORMAT:
            raise StateVersionError(
                f"Format state {data.get('format')!r} tidak kompatibel (butuh {STATE_FORMAT})"
            )
        try:
            return CorpusState.model_validate(data)
        except ValueError as e:
            raise StateVersionError(f"version.json tidak valid: {e}") from None

    def write_state(self, state: CorpusState) -> None:
        state = state.model_copy(update={"updated_at": datetime.now(timezone.utc).isoformat(timespec="seconds")})
        safe_write_file(self.version_path, [json.dumps(state.model_dump(), sort_keys=True)])

    def load(self) -> Corpus:
        """
        Load snapshot corpus sesuai version.json.

        Returns:
            Corpus dengan version dari sidecar
        """
        state = self.read_state()
        rows = safe_read_lines(self.corpus_path, limit=state.samples)
        if len(rows) < state.samples:
            raise StateVersionError(
                f"corpus.ndjson berisi {len(rows)} baris, version.json mencatat {state.samples}"
            )
        reports = [AvReport.from_line(line, line_no=line_no) for line_no, line in rows]
        return Corpus(reports=reports, version=state.version)

    def save(self, corpus: Corpus, state: Optional[CorpusState] = None) -> CorpusState:
        """
        Tulis ulang seluruh corpus (dipakai oleh `mine`).
        Returns state baru yang sudah ditulis.
        """
        safe_write_file(self.corpus_path, [r.to_line() for r in corpus.reports])
        state = (state or CorpusState()).model_copy(
            update={"format": STATE_FORMAT, "version": corpus.version, "samples": len(corpus)}
        )
        self.write_state(state)
        logger.info("Corpus v%d disimpan: %d sampel", corpus.version, len(corpus))
        return state

    def append(self, new_reports: List[AvReport], version: int) -> CorpusState:
        """
        Append report baru lalu ganti version.json.
        Baris sisa append yang gagal sebelumnya (di luar `samples`) dibuang dulu.
        """
        state = self.read_state()
        rows = safe_read_lines(self.corpus_path)
        if len(rows) > state.samples:
            logger.warning("Membuang %d baris corpus yang tidak tercatat di version.json",
                           len(rows) - state.samples)
            safe_write_file(self.corpus_path, [line for _, line in rows[: state.samples]])
        if new_reports:
            safe_append_file(self.corpus_path, [r.to_line() for r in new_reports])
        state = state.model_copy(update={"version": version, "samples": state.samples + len(new_reports)})
        self.write_state(state)
        logger.info("Corpus v%d: +%d sampel (total %d)", version, len(new_reports), state.samples)
        return state

    def record_model(self, model_version: int, fingerprint: str) -> CorpusState:
        state = self.read_state().model_copy(update={"model_version": model_version, "fingerprint": fingerprint})
        self.write_state(state)
        return state

    def check_compatible(self, fingerprint: str) -> CorpusState:
        """
        Pastikan state bisa di-update dengan config sekarang.

        Raises:
            StateVersionError: format berbeda atau corpus lebih baru dari model
        """
        state = self.read_state()
        if state.fingerprint is not None and state.fingerprint != fingerprint:
            logger.warning("Config fingerprint berubah (%s -> %s), model dilatih ulang penuh",
                           state.fingerprint, fingerprint)
        if state.model_version > state.version:
            raise StateVersionError(
                f"Model v{state.model_version} lebih baru dari corpus v{state.version}"
            )
        return state


def write_report_file(file_path: str, reports: List[AvReport]) -> None:
    """Tulis report sebagai file input NDJSON (dipakai generator synth)."""
    safe_write_file(file_path, [r.to_line() for r in reports])
