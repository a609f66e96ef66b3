"""
RunConfig: semua parameter pipeline dalam satu model.
Default mengikuti parameter eksperimen (sigma 0.3, window 40, dim 32,
100 epoch, bandwidth 2, delta 0.3).
"""
import hashlib
import json
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from pathlib import Path
from typing import Any, Dict, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from utils.errors import ConfigError

DEFAULT_DICTIONARY = str(Path(__file__).resolve().parent.parent / "data" / "dictionary.txt")

# Key yang mempengaruhi hasil model/output; dipakai untuk fingerprint state
ALGORITHM_KEYS = (
    "sigma_threshold", "min_vendor_labels", "window", "dim", "epochs", "x_max",
    "alpha", "lr", "batch_size", "bandwidth", "ms_max_iter", "delta_threshold",
    "top_n", "seed",
)


class RunConfig(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    # ===== tokenization =====
    sigma_threshold: float = Field(0.3, gt=0, le=1)
    min_vendor_labels: int = Field(5, ge=0)

    # ===== embedding =====
    window: int = Field(40, ge=1)
    dim: int = Field(32, ge=1)
    epochs: int = Field(100, ge=1)
    x_max: float = Field(100.0, gt=0)
    alpha: float = Field(0.75, gt=0)
    lr: float = Field(0.05, gt=0)
    batch_size: int = Field(512, ge=1)

    # ===== clustering =====
    bandwidth: float = Field(2.0, gt=0)
    ms_max_iter: int = Field(100, ge=1)
    delta_threshold: float = Field(0.3, gt=0, le=1)
    dictionary_path: str = DEFAULT_DICTIONARY

    # ===== ranking / output =====
    top_n: int = Field(5, ge=1)
    ascii_separator: bool = False

    # ===== run =====
    seed: int = Field(0, ge=0)
    threads: int = Field(1, ge=1)
    input_format: Literal["ndjson", "vt"] = "ndjson"
    reports_path: Optional[str] = None
    state_dir: Optional[str] = None
    output_path: Optional[str] = None

    @classmethod
    def build(cls, values: Dict[str, Any]) -> "RunConfig":
        """Validasi dict mentah, ValidationError diubah jadi ConfigError."""
        try:
            return cls.model_validate(values)
        except ValidationError as e:
            problems = "; ".join(
                f"{'.'.join(str(p) for p in err['loc']) or 'config'}: {err['msg']}" for err in e.errors()
            )
            raise ConfigError(f"Config tidak valid: {problems}") from None

    @classmethod
    def from_file(cls, path: str) -> "RunConfig":
        """
        Load config dari file TOML `key = value`.

        Raises:
            ConfigError: file tidak bisa dibaca, TOML rusak, key tidak dikenal, atau nilai di luar range
        """
        try:
            with open(path, "rb") as f:
                data = tomllib.load(f)
        except OSError as e:
            raise ConfigError(f"Tidak bisa membaca config '{path}': {e.strerror}") from None
        except tomllib.TOMLDecodeError as e:
            raise ConfigError(f"Config '{path}' bukan TOML valid: {e}") from None
        return cls.build(data)

    def with_overrides(self, **overrides: Any) -> "RunConfig":
        """Override dari flag CLI; nilai None berarti flag tidak diberikan."""
        values = self.model_dump()
        values.update({k: v for k, v in overrides.items() if v is not None})
        return self.build(values)

    def algorithm_params(self) -> Dict[str, Any]:
        return {key: getattr(self, key) for key in ALGORITHM_KEYS}

    def fingerprint(self) -> str:
        """Hash stabil dari parameter algoritma."""
        payload = json.dumps(self.algorithm_params(), sort_keys=True)
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()[:16]
