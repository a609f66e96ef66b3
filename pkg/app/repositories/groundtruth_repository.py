"""
Repository layer untuk ground truth CSV.
Format: header `sample_id,family`, UTF-8, koma sebagai pemisah, tanpa quoting.
"""
from pathlib import Path
from typing import Dict, List, Tuple

from utils.errors import GroundTruthError
from utils.file_lock import safe_write_file

HEADER = "sample_id,family"


class GroundTruthRepository:

    def __init__(self, file_path: str):
        self.file_path = file_path

    def load(self) -> Dict[str, str]:
        """
        Load mapping sample_id -> family (urutan file dipertahankan).

        Raises:
            GroundTruthError: file tidak terbaca atau baris tidak valid (dengan nomor baris)
        """
        path = Path(self.file_path)
        if not path.is_file():
            raise GroundTruthError(f"Ground truth tidak ditemukan: {self.file_path}")

        truth: Dict[str, str] = {}
        with open(path, "rb") as f:
            for line_no, raw in enumerate(f, start=1):
                try:
                    line = raw.decode("utf-8").rstrip("\r\n")
                except UnicodeDecodeError:
                    raise GroundTruthError("Bukan UTF-8 valid", line_no=line_no) from None
                if line_no == 1:
                    if line.lstrip("﻿").strip() != HEADER:
                        raise GroundTruthError(f"Header harus '{HEADER}'", line_no=1)
                    continue
                if not line.strip():
                    continue
                parts = line.split(",")
                if len(parts) != 2:
                    raise GroundTruthError(f"Harus tepat 2 kolom, ditemukan {len(parts)}", line_no=line_no)
                sample_id, family = parts[0].strip(), parts[1].strip()
                if not sample_id or not family:
                    raise GroundTruthError("sample_id dan family tidak boleh kosong", line_no=line_no)
                if sample_id in truth:
                    raise GroundTruthError(f"sample_id duplikat '{sample_id}'", line_no=line_no)
                truth[sample_id] = family

        if not truth and path.stat().st_size == 0:
            raise GroundTruthError(f"Header harus '{HEADER}'", line_no=1)
        return truth

    def save(self, rows: List[Tuple[str, str]]) -> None:
        safe_write_file(self.file_path, [f"{sid},{family}" for sid, family in rows], header=HEADER)
