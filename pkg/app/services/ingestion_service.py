"""
Service layer untuk corpus ingestion.
Parse report (NDJSON atau file report VirusTotal offline) dan tambah ke corpus.
"""
import json
import logging
from concurrent.futures import ThreadPoolExecutor
from datetime import datetime, timezone
from typing import Callable, Iterable, List, Optional, Union

from repositories.report_repository import read_raw_lines
from schemas.report import AvReport, Corpus, reject_duplicate_keys
from utils.errors import DuplicateSampleError, ReportParseError, SchemaError

logger = logging.getLogger(__name__)

# Kategori v3 yang dianggap "ada verdict"
_V3_DETECTED = {"malicious", "suspicious"}


def _decode(raw: Union[bytes, str], line_no: Optional[int]) -> str:
    if isinstance(raw, str):
        return raw
    try:
        return raw.decode("utf-8")
    except UnicodeDecodeError as e:
        raise ReportParseError("invalid UTF-8", offset=e.start, line_no=line_no) from None


def parse_report(raw: Union[bytes, str], line_no: Optional[int] = None) -> AvReport:
    """
    Parse satu report NDJSON.

    Args:
        raw: bytes UTF-8 (atau str) berisi satu JSON object
        line_no: nomor baris di file input, untuk pesan error

    Raises:
        ReportParseError: UTF-8 atau JSON rusak (dengan byte offset)
        SchemaError: field wajib hilang, sample_id kosong, vendor duplikat
    """
    return AvReport.from_line(_decode(raw, line_no), line_no=line_no)


def _printable(label: str) -> str:
    return "".join(ch for ch in label if ch.isprintable())


def _first_seen_from(value: object) -> Optional[str]:
    """first_seen v2 berupa string tanggal, v3 berupa unix timestamp."""
    if value is None:
        return None
    if isinstance(value, (int, float)):
        return datetime.fromtimestamp(value, tz=timezone.utc).date().isoformat()
    if isinstance(value, str):
        try:
            return datetime.fromisoformat(value).date().isoformat()
        except ValueError:
            return None
    return None


def _scan_entry(vendor: str, result: object, line_no: Optional[int]) -> dict:
    if result is None:
        return {}
    if not isinstance(result, dict):
        raise SchemaError(f"Hasil scan vendor '{vendor}' harus object", line_no=line_no)
    return result


def _detected_label(vendor: str, label: object, detected: bool, line_no: Optional[int]) -> str:
    if not detected or label is None:
        return ""
    if not isinstance(label, str):
        raise SchemaError(f"Label vendor '{vendor}' harus string", line_no=line_no)
    return _printable(label)


def parse_virustotal_report(raw: Union[bytes, str], line_no: Optional[int] = None) -> AvReport:
    """
    Parse report VirusTotal offline (bentuk v2 `scans` atau v3 `data.attributes`).
    Vendor tanpa deteksi menghasilkan label kosong.

    Raises:
        ReportParseError: UTF-8 atau JSON rusak
        SchemaError: hasil scan/id sampel hilang atau label bukan string
    """
    text = _decode(raw, line_no)
    try:
        data = json.loads(text, object_pairs_hook=reject_duplicate_keys)
    except json.JSONDecodeError as e:
        raise ReportParseError(e.msg, offset=len(text[: e.pos].encode("utf-8")), line_no=line_no) from None
    except SchemaError as e:
        raise SchemaError(str(e), line_no=line_no) from None
    if not isinstance(data, dict):
        raise SchemaError("Report harus berupa JSON object", line_no=line_no)

    detections = []
    if isinstance(data.get("data"), dict):
        # ===== v3 =====
        node = data["data"]
        attributes = node.get("attributes") or {}
        results = attributes.get("last_analysis_results")
        if not isinstance(results, dict):
            raise SchemaError("Missing field 'last_analysis_results'", line_no=line_no)
        for vendor, result in results.items():
            result = _scan_entry(vendor, result, line_no)
            detected = result.get("category") in _V3_DETECTED
            detections.append((vendor, _detected_label(vendor, result.get("result"), detected, line_no)))
        sample_id = attributes.get("sha256") or attributes.get("md5") or node.get("id")
        first_seen = _first_seen_from(attributes.get("first_submission_date"))
    else:
        # ===== v2 =====
        scans = data.get("scans")
        if not isinstance(scans, dict):
            raise SchemaError("Missing field 'scans'", line_no=line_no)
        for vendor, result in scans.items():
            result = _scan_entry(vendor, result, line_no)
            detected = bool(result.get("detected"))
            detections.append((vendor, _detected_label(vendor, result.get("result"), detected, line_no)))
        sample_id = data.get("sha256") or data.get("md5")
        first_seen = _first_seen_from(data.get("first_seen"))

    if not sample_id or not isinstance(sample_id, str):
        raise SchemaError("Missing field 'sha256'/'md5'", line_no=line_no)
    return AvReport(sample_id=sample_id, detections=detections, first_seen=first_seen)


PARSERS = {
    "ndjson": parse_report,
    "vt": parse_virustotal_report,
}


def add_reports(corpus: Corpus, reports: Iterable[AvReport], skip_duplicates: bool = False) -> Corpus:
    """
    Tambah report ke corpus (append-only, corpus lama tidak diubah).

    Args:
        corpus: corpus saat ini
        reports: report baru
        skip_duplicates: True = sample_id duplikat dilewati, False = ditolak

    Returns:
        Corpus baru; version +1 jika ada report yang ditambahkan

    Raises:
        DuplicateSampleError: sample_id sudah ada (mode default)
    """
    seen = set(corpus.sample_ids())
    added: List[AvReport] = []
    duplicates: List[str] = []
    for report in reports:
        if report.sample_id in seen:
            duplicates.append(report.sample_id)
            continue
        seen.add(report.sample_id)
        added.append(report)

    if duplicates and not skip_duplicates:
        raise DuplicateSampleError(duplicates)
    if duplicates:
        logger.info("Skip %d report duplikat", len(duplicates))

    version = corpus.version + 1 if added else corpus.version
    return Corpus(reports=[*corpus.reports, *added], version=version)


class IngestionService:
    """Baca file report menjadi list AvReport."""

    def __init__(self, input_format: str = "ndjson", threads: int = 1):
        self.parser: Callable[..., AvReport] = PARSERS[input_format]
        self.threads = threads

    def read_reports(self, file_path: str) -> List[AvReport]:
        """
        Parse semua baris file input. Error pertama (urutan file) yang dilaporkan.

        Raises:
            ConfigError: file tidak ada
            ReportParseError / SchemaError: baris rusak, dengan nomor baris
        """
        lines = list(read_raw_lines(file_path))
        if not lines:
            logger.warning("File report kosong: %s", file_path)
            return []

        def parse(item):
            line_no, raw = item
            return self.parser(raw, line_no=line_no)

        if self.threads > 1:
            with ThreadPoolExecutor(max_workers=self.threads) as pool:
                reports = list(pool.map(parse, lines))
        else:
            reports = [parse(item) for item in lines]

        logger.info("Parsed %d report dari %s", len(reports), file_path)
        return reports
