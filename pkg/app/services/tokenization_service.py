"""
Service layer untuk tokenisasi label dan filter token berbasis unique index.

Unique index untuk satu vendor dan satu kolom posisi:
    sigma = (jumlah token yang muncul tepat sekali di kolom) / (jumlah token di kolom)
Kolom dengan sigma tinggi berisi nomor seri / varian yang tidak bermakna.
"""
import logging
import re
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, List, Optional, Set, Tuple

from schemas.report import AvReport, Corpus
from schemas.token import Direction, FilteredCorpus, TokenSeq, VendorPositionTable
from utils.errors import DomainError, UndefinedColumnError

logger = logging.getLogger(__name__)

SEPARATOR_PATTERN = re.compile(r"[^A-Za-z0-9]+")


def tokenize_label(raw_label: str, vendor: str = "", sample_id: str = "") -> TokenSeq:
    """
    Split label di setiap karakter di luar [A-Za-z0-9], lalu lowercase.

    Example:
        "Win32/Flystudio.worm.Gen" -> [win32, flystudio, worm, gen]
    """
    tokens = [part.lower() for part in SEPARATOR_PATTERN.split(raw_label) if part]
    return TokenSeq(tokens=tokens, source_vendor=vendor, source_sample=sample_id)


def _tables_for(reports: List[AvReport]) -> Dict[str, VendorPositionTable]:
    tables: Dict[str, VendorPositionTable] = {}
    for report in reports:
        for vendor, label in report.detections:
            seq = tokenize_label(label, vendor, report.sample_id)
            if not seq.tokens:
                continue
            table = tables.get(vendor)
            if table is None:
                table = tables[vendor] = VendorPositionTable(vendor=vendor)
            table.add(seq)
    return tables


def build_position_tables(corpus: Corpus, threads: int = 1) -> Dict[str, VendorPositionTable]:
    """
    Bangun VendorPositionTable semua vendor.
    Report diproses urut sample_id; dengan threads > 1 corpus dibagi per chunk lalu di-merge.
    """
    reports = sorted(corpus.reports, key=lambda r: r.sample_id)
    if threads <= 1 or len(reports) < 2 * threads:
        return _tables_for(reports)

    size = -(-len(reports) // threads)
    chunks = [reports[i:i + size] for i in range(0, len(reports), size)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        partials = list(pool.map(_tables_for, chunks))

    merged: Dict[str, VendorPositionTable] = {}
    for partial in partials:
        for vendor, table in partial.items():
            merged[vendor] = merged[vendor].merge(table) if vendor in merged else table
    return merged


def unique_index(table: VendorPositionTable, i: int, direction: Direction) -> float:
    """
    Hitung sigma untuk kolom ke-i (1-based) dari kiri (forward) atau dari kanan (reverse).

    Raises:
        UndefinedColumnError: kolom kosong (sigma tidak terdefinisi)
    """
    columns = table.columns_fwd if Direction(direction) == Direction.FORWARD else table.columns_rev
    if i < 1 or i > len(columns):
        raise UndefinedColumnError(f"Vendor '{table.vendor}' tidak punya kolom {direction} ke-{i}")
    column = columns[i - 1]
    total = sum(column.values())
    if total == 0:
        raise UndefinedColumnError(f"Kolom {direction} ke-{i} vendor '{table.vendor}' kosong")
    unique = sum(1 for count in column.values() if count == 1)
    return unique / total


def scan_positions(table: VendorPositionTable, direction: Direction,
                   sigma_threshold: float) -> Tuple[List[int], List[float]]:
    """
    Scan kolom mulai posisi 1; kolom disimpan selama sigma < threshold,
    berhenti di kolom pertama dengan sigma >= threshold.

    Returns:
        (posisi yang disimpan, sigma setiap kolom yang dievaluasi)
    """
    kept: List[int] = []
    sigmas: List[float] = []
    for i in range(1, table.i_max + 1):
        sigma = unique_index(table, i, direction)
        sigmas.append(sigma)
        if sigma >= sigma_threshold:
            break
        kept.append(i)
    return kept, sigmas


class TokenFilterService:
    """Filter token per vendor dengan dua scan (forward dan reverse)."""

    def __init__(self, sigma_threshold: float = 0.3, min_vendor_labels: int = 5, threads: int = 1):
        if not 0 < sigma_threshold <= 1:
            raise DomainError(f"sigma_threshold harus di (0, 1], dapat {sigma_threshold}")
        self.sigma_threshold = sigma_threshold
        self.min_vendor_labels = min_vendor_labels
        self.threads = threads

    def kept_positions(self, table: VendorPositionTable) -> Set[Tuple[Direction, int]]:
        """Gabungan posisi yang lolos scan forward dan scan reverse."""
        if table.n_labels < self.min_vendor_labels:
            # Vendor dengan sedikit label tidak difilter
            return {(d, i) for d in Direction for i in range(1, table.i_max + 1)}

        kept: Set[Tuple[Direction, int]] = set()
        for direction in Direction:
            positions, sigmas = scan_positions(table, direction, self.sigma_threshold)
            kept.update((direction, i) for i in positions)
            logger.debug("sigma %s %s: %s kept=%s", table.vendor, direction.value,
                         [round(s, 3) for s in sigmas], positions)
        return kept

    def filter_tokens(self, corpus: Corpus,
                      tables: Optional[Dict[str, VendorPositionTable]] = None) -> FilteredCorpus:
        """
        Jalankan filter pada seluruh corpus.

        Returns:
            FilteredCorpus: token yang lolos per sampel, urutan report dan vendor dipertahankan
        """
        if tables is None:
            tables = build_position_tables(corpus, self.threads)
        kept = {vendor: self.kept_positions(table) for vendor, table in sorted(tables.items())}

        samples: Dict[str, List[Tuple[str, TokenSeq]]] = {}
        total_in = total_out = 0
        for report in corpus.reports:
            per_vendor: List[Tuple[str, TokenSeq]] = []
            for vendor, label in report.detections:
                seq = tokenize_label(label, vendor, report.sample_id)
                positions = kept.get(vendor, set())
                length = len(seq.tokens)
                survivors = [
                    token for pos, token in enumerate(seq.tokens)
                    if (Direction.FORWARD, pos + 1) in positions or (Direction.REVERSE, length - pos) in positions
                ]
                total_in += length
                total_out += len(survivors)
                per_vendor.append((vendor, TokenSeq(tokens=survivors, source_vendor=vendor,
                                                    source_sample=report.sample_id)))
            samples[report.sample_id] = per_vendor

        logger.info("Filter: %d vendor, %d -> %d token (sigma < %.2f)",
                    len(tables), total_in, total_out, self.sigma_threshold)
        return FilteredCorpus(samples=samples, kept_positions=kept)
