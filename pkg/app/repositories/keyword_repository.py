"""
Repository layer untuk file output keyword (TSV).
Format: sample_id<TAB>token,count‖token,count...
"""
import logging
from typing import Dict, List

from schemas.keyword import RankedKeywords
from utils.errors import SchemaError
from utils.file_lock import safe_read_lines, safe_write_file

logger = logging.getLogger(__name__)


class KeywordRepository:
    """Tulis dan baca hasil RankedKeywords."""

    def __init__(self, file_path: str):
        self.file_path = file_path

    def save(self, ranked: List[RankedKeywords], ascii_separator: bool = False) -> None:
        """Tulis semua baris sekaligus (atomic): tidak pernah ada output parsial."""
        safe_write_file(self.file_path, [rk.to_line(ascii_separator) for rk in ranked])
        logger.info("Output %d sampel ditulis ke %s", len(ranked), self.file_path)

    def get_all(self) -> List[RankedKeywords]:
        """
        Ambil semua hasil dari file.

        Raises:
            SchemaError: baris tidak valid (dengan nomor baris)
        """
        results: List[RankedKeywords] = []
        for line_no, line in safe_read_lines(self.file_path):
            try:
                results.append(RankedKeywords.from_line(line))
            except ValueError as e:
                raise SchemaError(f"Output tidak valid: {e}", line_no=line_no) from None
        return results

    def get_map(self) -> Dict[str, RankedKeywords]:
        return {rk.sample_id: rk for rk in self.get_all()}
