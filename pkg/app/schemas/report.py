"""
Pydantic models untuk AV report dan corpus sampel.
Satu AvReport = hasil deteksi semua vendor untuk satu sampel malware.
"""
import json
from datetime import datetime
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator

from utils.errors import ReportParseError, SchemaError


def reject_duplicate_keys(pairs: List[Tuple[str, object]]) -> Dict[str, object]:
    """object_pairs_hook: json.loads diam-diam menimpa key duplikat, di sini kita tolak."""
    result: Dict[str, object] = {}
    for key, value in pairs:
        if key in result:
            raise SchemaError(f"Duplicate key '{key}'")
        result[key] = value
    return result


class AvReport(BaseModel):
    """Label mentah per vendor untuk satu sampel, urutan vendor dipertahankan."""
    model_config = ConfigDict(frozen=True)

    sample_id: str = Field(..., min_length=1, description="MD5/SHA256 hex atau id opaque lain")
    detections: List[Tuple[str, str]] = Field(default_factory=list, description="(vendor, raw_label)")
    first_seen: Optional[str] = Field(None, description="Tanggal ISO-8601")

    @field_validator("detections")
    @classmethod
    def _unique_vendors(cls, detections: List[Tuple[str, str]]) -> List[Tuple[str, str]]:
        seen = set()
        for vendor, _ in detections:
            if vendor in seen:
                raise ValueError(f"Duplicate vendor '{vendor}'")
            seen.add(vendor)
        return detections

    @property
    def vendors(self) -> List[str]:
        return [vendor for vendor, _ in self.detections]

    def to_line(self) -> str:
        """Convert report ke satu baris NDJSON."""
        payload: Dict[str, object] = {"sample_id": self.sample_id}
        if self.first_seen is not None:
            payload["first_seen"] = self.first_seen
        payload["detections"] = {vendor: label for vendor, label in self.detections}
        return json.dumps(payload, ensure_ascii=False, separators=(",", ":"))

    @classmethod
    def from_line(cls, line: str, line_no: Optional[int] = None) -> "AvReport":
        """
        Parse report dari satu baris NDJSON.

        Raises:
            ReportParseError: JSON rusak (dengan byte offset)
            SchemaError: field wajib hilang, tipe salah, atau key duplikat
        """
        try:
            data = json.loads(line, object_pairs_hook=reject_duplicate_keys)
        except json.JSONDecodeError as e:
            offset = len(line[: e.pos].encode("utf-8"))
            raise ReportParseError(e.msg, offset=offset, line_no=line_no) from None
        except SchemaError as e:
            raise SchemaError(str(e), line_no=line_no) from None

        if not isinstance(data, dict):
            raise SchemaError("Report harus berupa JSON object", line_no=line_no)

        sample_id = data.get("sample_id")
        if sample_id is None:
            raise SchemaError("Missing field 'sample_id'", line_no=line_no)
        if not isinstance(sample_id, str) or not sample_id:
            raise SchemaError("Field 'sample_id' harus string tidak kosong", line_no=line_no)

        raw_detections = data.get("detections")
        if raw_detections is None:
            raise SchemaError("Missing field 'detections'", line_no=line_no)
        if not isinstance(raw_detections, dict):
            raise SchemaError("Field 'detections' harus object vendor -> label", line_no=line_no)

        detections: List[Tuple[str, str]] = []
        for vendor, label in raw_detections.items():
            if label is None:
                label = ""
            if not isinstance(label, str):
                raise SchemaError(f"Label vendor '{vendor}' harus string", line_no=line_no)
            detections.append((vendor, label))

        first_seen = data.get("first_seen")
        if first_seen is not None:
            if not isinstance(first_seen, str):
                raise SchemaError("Field 'first_seen' harus string ISO-8601", line_no=line_no)
            try:
                datetime.fromisoformat(first_seen)
            except ValueError:
                raise SchemaError(f"first_seen '{first_seen}' bukan ISO-8601", line_no=line_no) from None

        return cls(sample_id=sample_id, detections=detections, first_seen=first_seen)


class Corpus(BaseModel):
    """Kumpulan report append-only dengan nomor versi."""
    reports: List[AvReport] = Field(default_factory=list)
    version: int = Field(0, ge=0)

    @field_validator("reports")
    @classmethod
    def _unique_samples(cls, reports: List[AvReport]) -> List[AvReport]:
        seen = set()
        for report in reports:
            if report.sample_id in seen:
                raise ValueError(f"Duplicate sample_id '{report.sample_id}'")
            seen.add(report.sample_id)
        return reports

    def __len__(self) -> int:
        return len(self.reports)

    def sample_ids(self) -> List[str]:
        return [r.sample_id for r in self.reports]

    def get(self, sample_id: str) -> Optional[AvReport]:
        for report in self.reports:
            if report.sample_id == sample_id:
                return report
        return None


class CorpusState(BaseModel):
    """Isi version.json: sidecar versi untuk corpus.ndjson di state directory."""
    format: int = Field(1, ge=1)
    version: int = Field(0, ge=0)
    samples: int = Field(0, ge=0, description="Jumlah baris corpus.ndjson yang termasuk versi ini")
    model_version: int = Field(0, ge=0, description="Versi corpus saat model terakhir dilatih")
    fingerprint: Optional[str] = None
    updated_at: Optional[str] = None
