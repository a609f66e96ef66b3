"""
Pydantic models untuk cluster token per sampel dan kamus kata standar.
"""
from pathlib import Path
from typing import FrozenSet, List, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator


def frequency_order(members: List[Tuple[str, int]]) -> List[Tuple[str, int]]:
    """Urutkan (token, frekuensi): frekuensi turun, lalu leksikografis."""
    return sorted(members, key=lambda m: (-m[1], m[0]))


class TokenCluster(BaseModel):
    members: List[Tuple[str, int]] = Field(default_factory=list)
    centroid: List[float] = Field(default_factory=list)

    @field_validator("members")
    @classmethod
    def _sorted_positive(cls, members: List[Tuple[str, int]]) -> List[Tuple[str, int]]:
        for token, freq in members:
            if freq < 1:
                raise ValueError(f"Frekuensi token '{token}' harus >= 1")
        return frequency_order(members)

    @property
    def tokens(self) -> List[str]:
        return [token for token, _ in self.members]

    def total_frequency(self) -> int:
        return sum(freq for _, freq in self.members)

    def __len__(self) -> int:
        return len(self.members)


class SampleClustering(BaseModel):
    sample_id: str
    clusters: List[TokenCluster] = Field(default_factory=list)

    def tokens(self) -> List[str]:
        return [token for cluster in self.clusters for token in cluster.tokens]

    def frequencies(self) -> dict:
        return {token: freq for cluster in self.clusters for token, freq in cluster.members}

    def cluster_of(self, token: str) -> int:
        for idx, cluster in enumerate(self.clusters):
            if token in cluster.tokens:
                return idx
        return -1


class Dictionary(BaseModel):
    """Kumpulan kata standar (lowercase) untuk memilih ejaan yang benar."""
    model_config = ConfigDict(frozen=True)

    words: FrozenSet[str] = Field(default_factory=frozenset)

    @field_validator("words")
    @classmethod
    def _lowercase(cls, words: FrozenSet[str]) -> FrozenSet[str]:
        return frozenset(w.strip().lower() for w in words if w.strip())

    def __contains__(self, word: str) -> bool:
        return word in self.words

    def __len__(self) -> int:
        return len(self.words)

    @classmethod
    def from_file(cls, path: str) -> "Dictionary":
        """Baca word list: satu kata per baris, baris '#' diabaikan."""
        words = []
        with open(Path(path), "r", encoding="utf-8") as f:
            for line in f:
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                words.append(line)
        return cls(words=frozenset(words))
