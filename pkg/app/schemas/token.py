"""
Pydantic models untuk hasil tokenisasi dan token filter.
"""
import re
from collections import Counter
from enum import Enum
from typing import Dict, List, Set, Tuple

from pydantic import BaseModel, Field, field_validator

TOKEN_PATTERN = re.compile(r"^[a-z0-9]+$")


class Direction(str, Enum):
    FORWARD = "forward"
    REVERSE = "reverse"


class TokenSeq(BaseModel):
    """Urutan token lowercase dari satu label, kiri ke kanan."""
    tokens: List[str] = Field(default_factory=list)
    source_vendor: str = ""
    source_sample: str = ""

    @field_validator("tokens")
    @classmethod
    def _lowercase_alnum(cls, tokens: List[str]) -> List[str]:
        for token in tokens:
            if not TOKEN_PATTERN.match(token):
                raise ValueError(f"Token tidak valid: '{token}'")
        return tokens

    def __len__(self) -> int:
        return len(self.tokens)


class VendorPositionTable(BaseModel):
    """
    Multiset token per posisi untuk satu vendor.
    columns_fwd[0] = posisi 1 dari kiri, columns_rev[0] = posisi 1 dari kanan.
    """
    vendor: str
    columns_fwd: List[Dict[str, int]] = Field(default_factory=list)
    columns_rev: List[Dict[str, int]] = Field(default_factory=list)
    i_max: int = 0
    n_labels: int = Field(0, description="Jumlah label vendor yang punya minimal satu token")

    def add(self, seq: TokenSeq) -> None:
        """Masukkan satu TokenSeq ke kolom forward dan reverse."""
        length = len(seq.tokens)
        if length == 0:
            return
        while len(self.columns_fwd) < length:
            self.columns_fwd.append({})
            self.columns_rev.append({})
        for pos, token in enumerate(seq.tokens):
            fwd = self.columns_fwd[pos]
            fwd[token] = fwd.get(token, 0) + 1
            rev = self.columns_rev[length - 1 - pos]
            rev[token] = rev.get(token, 0) + 1
        self.i_max = max(self.i_max, length)
        self.n_labels += 1

    def total_tokens(self) -> int:
        return sum(sum(col.values()) for col in self.columns_fwd)

    def merge(self, other: "VendorPositionTable") -> "VendorPositionTable":
        """Gabungkan dua tabel vendor yang sama (reduce step)."""
        merged = VendorPositionTable(vendor=self.vendor)
        for source in (self, other):
            for attr in ("columns_fwd", "columns_rev"):
                target = getattr(merged, attr)
                for pos, column in enumerate(getattr(source, attr)):
                    while len(target) <= pos:
                        target.append({})
                    counter = Counter(target[pos])
                    counter.update(column)
                    target[pos] = dict(counter)
        merged.i_max = max(self.i_max, other.i_max)
        merged.n_labels = self.n_labels + other.n_labels
        return merged


class FilteredCorpus(BaseModel):
    """
    Token yang lolos filter per sampel.
    samples: sample_id -> [(vendor, TokenSeq)], urutan vendor sesuai report.
    """
    samples: Dict[str, List[Tuple[str, TokenSeq]]] = Field(default_factory=dict)
    kept_positions: Dict[str, Set[Tuple[Direction, int]]] = Field(default_factory=dict)

    def sample_ids(self) -> List[str]:
        return list(self.samples.keys())

    def sequence(self, sample_id: str) -> List[str]:
        """Context sequence satu sampel: token semua vendor digabung sesuai urutan report."""
        return [token for _, seq in self.samples.get(sample_id, []) for token in seq.tokens]

    def token_counts(self) -> Dict[str, Dict[str, int]]:
        """Frekuensi token per sampel (multiset label yang lolos filter)."""
        return {sid: dict(Counter(self.sequence(sid))) for sid in self.samples}
