"""
Pydantic models untuk vocabulary, co-occurrence matrix, dan model embedding.
"""
from typing import Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, PrivateAttr, field_validator, model_validator

from utils.errors import UnknownTokenError


class Vocabulary(BaseModel):
    """Mapping token <-> id (dense, mulai dari 0)."""
    tokens: List[str] = Field(default_factory=list)
    _index: Dict[str, int] = PrivateAttr(default_factory=dict)

    @field_validator("tokens")
    @classmethod
    def _bijective(cls, tokens: List[str]) -> List[str]:
        if len(set(tokens)) != len(tokens):
            raise ValueError("Vocabulary berisi token duplikat")
        return tokens

    def model_post_init(self, __context) -> None:
        self._index = {token: i for i, token in enumerate(self.tokens)}

    @property
    def size(self) -> int:
        return len(self.tokens)

    def __len__(self) -> int:
        return len(self.tokens)

    def __contains__(self, token: str) -> bool:
        return token in self._index

    def id_of(self, token: str) -> int:
        try:
            return self._index[token]
        except KeyError:
            raise UnknownTokenError(token) from None

    def token_of(self, token_id: int) -> str:
        return self.tokens[token_id]


class CooccurrenceMatrix(BaseModel):
    """Sparse X_ij, simetris, tanpa diagonal."""
    vocabulary: Vocabulary = Field(default_factory=Vocabulary)
    entries: Dict[Tuple[int, int], float] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _no_diagonal(self) -> "CooccurrenceMatrix":
        for (i, j) in self.entries:
            if i == j:
                raise ValueError(f"Diagonal entry ({i},{i}) tidak boleh disimpan")
        return self

    def __len__(self) -> int:
        return len(self.entries)

    def get(self, i: int, j: int) -> float:
        return self.entries.get((i, j), 0.0)

    def to_arrays(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(rows, cols, values) terurut berdasarkan (i, j)."""
        keys = sorted(self.entries)
        rows = np.fromiter((k[0] for k in keys), dtype=np.int64, count=len(keys))
        cols = np.fromiter((k[1] for k in keys), dtype=np.int64, count=len(keys))
        values = np.fromiter((self.entries[k] for k in keys), dtype=np.float64, count=len(keys))
        return rows, cols, values


class EmbeddingModel(BaseModel):
    """
    Vektor GloVe: main vectors W (T_i), context vectors C (T~_j),
    bias main bw (b_i) dan bias context bc (b~_j).
    """
    model_config = ConfigDict(arbitrary_types_allowed=True)

    vocabulary: Vocabulary
    W: np.ndarray
    C: np.ndarray
    bw: np.ndarray
    bc: np.ndarray
    dim: int = Field(..., ge=1)
    initial_loss: Optional[float] = None
    final_loss: Optional[float] = None
    loss_history: List[float] = Field(default_factory=list)

    @model_validator(mode="after")
    def _shapes(self) -> "EmbeddingModel":
        n = self.vocabulary.size
        for name in ("W", "C"):
            arr = getattr(self, name)
            if arr.shape != (n, self.dim):
                raise ValueError(f"{name} shape {arr.shape} != ({n}, {self.dim})")
        for name in ("bw", "bc"):
            arr = getattr(self, name)
            if arr.shape != (n,):
                raise ValueError(f"{name} shape {arr.shape} != ({n},)")
        if not all(np.isfinite(getattr(self, name)).all() for name in ("W", "C", "bw", "bc")):
            raise ValueError("Model berisi nilai non-finite")
        return self

    def embedding(self, token: str) -> np.ndarray:
        """Embedding final = T_i + T~_i."""
        i = self.vocabulary.id_of(token)
        return self.W[i] + self.C[i]
