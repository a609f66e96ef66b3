"""
Repository layer untuk model embedding (model.txt).
Format file:
    header: <token_count> <dim>
    baris : token w_1..w_dim c_1..c_dim b b~
"""
import logging
from pathlib import Path
from typing import List

import numpy as np

from schemas.embedding import EmbeddingModel, Vocabulary
from utils.errors import SchemaError, StateVersionError
from utils.file_lock import safe_read_lines, safe_write_file

logger = logging.getLogger(__name__)


def _fmt(value: float) -> str:
    # repr float = representasi terpendek yang round-trip persis
    return repr(float(value))


class ModelRepository:
    """Simpan dan load EmbeddingModel sebagai tabel teks."""

    def __init__(self, file_path: str):
        self.file_path = file_path

    def exists(self) -> bool:
        return Path(self.file_path).exists()

    def save(self, model: EmbeddingModel) -> None:
        lines: List[str] = []
        for i, token in enumerate(model.vocabulary.tokens):
            values = [*model.W[i], *model.C[i], model.bw[i], model.bc[i]]
            lines.append(token + " " + " ".join(_fmt(v) for v in values))
        safe_write_file(self.file_path, lines, header=f"{model.vocabulary.size} {model.dim}")
        logger.info("Model disimpan: %d token, dim %d -> %s", model.vocabulary.size, model.dim, self.file_path)

    def load(self) -> EmbeddingModel:
        """
        Load model dari file.

        Raises:
            StateVersionError: file model tidak ada
            SchemaError: isi tabel tidak konsisten dengan header
        """
        rows = safe_read_lines(self.file_path)
        if not rows:
            raise StateVersionError(f"Model tidak ditemukan: {self.file_path}")

        header_no, header = rows[0]
        try:
            count, dim = (int(x) for x in header.split())
        except ValueError:
            raise SchemaError(f"Header model tidak valid: '{header}'", line_no=header_no) from None

        width = 2 * dim + 2
        tokens: List[str] = []
        table = np.zeros((count, width), dtype=np.float64)
        body = rows[1:]
        if len(body) != count:
            raise SchemaError(f"Header mencatat {count} token, file berisi {len(body)}", line_no=header_no)

        for i, (line_no, line) in enumerate(body):
            parts = line.split()
            if len(parts) != width + 1:
                raise SchemaError(f"Baris model harus berisi token + {width} angka", line_no=line_no)
            tokens.append(parts[0])
            try:
                table[i] = [float(x) for x in parts[1:]]
            except ValueError:
                raise SchemaError("Nilai model bukan angka", line_no=line_no) from None

        return EmbeddingModel(
            vocabulary=Vocabulary(tokens=tokens),
            W=table[:, :dim].copy(),
            C=table[:, dim:2 * dim].copy(),
            bw=table[:, 2 * dim].copy(),
            bc=table[:, 2 * dim + 1].copy(),
            dim=dim,
        )
