"""
Pydantic models untuk hasil evaluasi Top-N.
"""
from typing import Dict, List

from pydantic import BaseModel, Field, model_validator

MAX_TOP_N = 10


class EvalReport(BaseModel):
    """Akurasi Top-1..Top-10 terhadap ground truth."""
    accuracy: Dict[int, float] = Field(default_factory=dict)
    hits: Dict[int, int] = Field(default_factory=dict)
    evaluated: int = Field(0, ge=0)
    unevaluable: int = Field(0, ge=0, description="Sampel ground truth yang tidak ada di output")
    unevaluable_ids: List[str] = Field(default_factory=list)

    @model_validator(mode="after")
    def _monotone(self) -> "EvalReport":
        previous = 0.0
        for n in sorted(self.accuracy):
            if self.accuracy[n] < previous:
                raise ValueError(f"Akurasi Top-{n} turun dari Top-{n - 1}")
            previous = self.accuracy[n]
        return self

    def top(self, n: int) -> float:
        return self.accuracy.get(n, 0.0)


class SubsampleRow(BaseModel):
    fraction: float = Field(..., gt=0, le=1)
    samples: int = Field(..., ge=0)
    repeats: int = Field(..., ge=1)
    top1: List[float] = Field(default_factory=list)
    top3: List[float] = Field(default_factory=list)

    @staticmethod
    def _summary(values: List[float]) -> Dict[str, float]:
        if not values:
            return {"min": 0.0, "mean": 0.0, "max": 0.0}
        return {"min": min(values), "mean": sum(values) / len(values), "max": max(values)}

    def top1_summary(self) -> Dict[str, float]:
        return self._summary(self.top1)

    def top3_summary(self) -> Dict[str, float]:
        return self._summary(self.top3)


class SubsampleReport(BaseModel):
    """Sensitivitas akurasi terhadap jumlah sampel (subset acak per fraksi)."""
    rows: List[SubsampleRow] = Field(default_factory=list)
    reference: EvalReport = Field(default_factory=EvalReport)
