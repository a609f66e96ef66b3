"""
Pydantic models untuk skor TF-IDF dan hasil keyword per sampel.
"""
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, Field, model_validator

UNICODE_SEPARATOR = "‖"
ASCII_SEPARATOR = "||"


class TfidfIndex(BaseModel):
    """
    tf(i, j), idf(i), N dan doc_count(i) untuk seluruh corpus.
    Key luar `tf` dan `counts` adalah sample_id, key dalam adalah token.
    """
    n_samples: int = Field(0, ge=0)
    counts: Dict[str, Dict[str, int]] = Field(default_factory=dict)
    tf: Dict[str, Dict[str, float]] = Field(default_factory=dict)
    doc_count: Dict[str, int] = Field(default_factory=dict)
    idf: Dict[str, float] = Field(default_factory=dict)

    def tfidf(self, sample_id: str, token: str) -> float:
        return self.tf[sample_id][token] * self.idf[token]

    def scores(self, sample_id: str) -> Dict[str, float]:
        """Skor tf-idf semua token distinct di satu sampel."""
        return {token: tf * self.idf[token] for token, tf in self.tf.get(sample_id, {}).items()}


class RankedKeywords(BaseModel):
    """Daftar keyword terurut untuk satu sampel: (token, frekuensi)."""
    sample_id: str = Field(..., min_length=1)
    entries: List[Tuple[str, int]] = Field(default_factory=list)
    top_n: int = Field(5, ge=1)

    @model_validator(mode="after")
    def _check_entries(self) -> "RankedKeywords":
        tokens = [token for token, _ in self.entries]
        if len(set(tokens)) != len(tokens):
            raise ValueError(f"Token duplikat pada output sampel '{self.sample_id}'")
        if len(self.entries) > self.top_n:
            raise ValueError(f"Output {len(self.entries)} token melebihi top_n={self.top_n}")
        return self

    @property
    def tokens(self) -> List[str]:
        return [token for token, _ in self.entries]

    def formatted(self, ascii_separator: bool = False) -> str:
        """Render `token,count` dipisah U+2016 (atau `||`)."""
        separator = ASCII_SEPARATOR if ascii_separator else UNICODE_SEPARATOR
        return separator.join(f"{token},{count}" for token, count in self.entries)

    def to_line(self, ascii_separator: bool = False) -> str:
        """Convert ke satu baris TSV: sample_id<TAB>keywords."""
        return f"{self.sample_id}\t{self.formatted(ascii_separator)}"

    @classmethod
    def parse_entries(cls, formatted: str) -> List[Tuple[str, int]]:
        """Parse string `a,1‖b,2` (atau `a,1||b,2`) kembali ke entries."""
        formatted = formatted.strip()
        if not formatted:
            return []
        entries: List[Tuple[str, int]] = []
        for chunk in formatted.replace(ASCII_SEPARATOR, UNICODE_SEPARATOR).split(UNICODE_SEPARATOR):
            token, _, count = chunk.rpartition(",")
            if not token:
                raise ValueError(f"Entry keyword tidak valid: '{chunk}'")
            entries.append((token, int(count)))
        return entries

    @classmethod
    def from_line(cls, line: str, top_n: Optional[int] = None) -> "RankedKeywords":
        """
        Parse RankedKeywords dari satu baris TSV.

        Raises:
            ValueError: jika format baris tidak valid
        """
        sample_id, tab, formatted = line.rstrip("\r\n").partition("\t")
        if not tab:
            raise ValueError(f"Baris output tanpa TAB: '{line}'")
        entries = cls.parse_entries(formatted)
        return cls(sample_id=sample_id, entries=entries, top_n=top_n or max(1, len(entries)))
