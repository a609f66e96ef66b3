"""
Fixture bersama untuk seluruh test.
`pythonpath = app` di pytest.ini membuat import `schemas.*`, `services.*` dst. langsung jalan.
"""
from pathlib import Path
from typing import Callable, List

import pytest

from repositories.report_repository import write_report_file
from schemas.cluster import Dictionary
from schemas.config import DEFAULT_DICTIONARY
from schemas.report import AvReport

# Sepuluh vendor dengan format label masing-masing. {letter}, {digit}, {serial}
# berbeda di setiap sampel sehingga kolomnya dibuang token filter.
RUNNING_EXAMPLE_TEMPLATES = [
    ("AhnLab-V3", "Win32/{family}.worm.Gen"),
    ("CAT-QuickHeal", "Win32.Worm.{family}.{letter}.{digit}"),
    ("BitDefender", "Gen:Variant.{family}.{serial}"),
    ("Emsisoft", "Trojan-Dropper.Win32.{family}"),
    ("Kaspersky", "Worm.Win32.{family}.{serial}"),
    ("Microsoft", "Worm:Win32/{family}.{letter}"),
    ("Symantec", "W32.Worm.{family}"),
    ("Avast", "Win32:{family}-{serial} [Wrm]"),
    ("McAfee", "Generic.{family}.{serial}"),
    ("Sophos", "W32/{family}-{letter}"),
]

RUNNING_EXAMPLE_ID = "f1a9e5c0d7b3"


def running_example_reports() -> List[AvReport]:
    """
    Sampel Flystudio (dilabeli 10 vendor) ditambah 9 sampel latar Delf dari vendor yang sama.
    Dengan satu sampel saja idf setiap token = log(1/2) < 0, jadi corpus butuh sampel latar.
    """
    reports = []
    for i in range(10):
        family = "Flystudio" if i == 0 else "Delf"
        sample_id = RUNNING_EXAMPLE_ID if i == 0 else f"bg{i:02d}"
        fields = {
            "family": family,
            "letter": "ABCDEFGHIJ"[i],
            "digit": str((i + 5) % 10),
            "serial": f"{7301 + 37 * i}",
        }
        detections = [(vendor, template.format(**fields)) for vendor, template in RUNNING_EXAMPLE_TEMPLATES]
        reports.append(AvReport(sample_id=sample_id, detections=detections))
    return reports


def nuj_reports() -> List[AvReport]:
    """Satu vendor, sepuluh label `Win32.Worm.Nuj.<huruf>.<angka>`; sampel n0 = Win32.Worm.Nuj.A.5."""
    return [
        AvReport(sample_id=f"n{i}", detections=[("CAT-QuickHeal", f"Win32.Worm.Nuj.{'ABCDEFGHIJ'[i]}.{(i + 5) % 10}")])
        for i in range(10)
    ]


@pytest.fixture
def running_example() -> List[AvReport]:
    return running_example_reports()


@pytest.fixture
def dictionary() -> Dictionary:
    return Dictionary.from_file(DEFAULT_DICTIONARY)


@pytest.fixture
def write_reports(tmp_path: Path) -> Callable[..., str]:
    """Tulis list AvReport ke file NDJSON di tmp_path, kembalikan path-nya."""

    def _write(reports: List[AvReport], name: str = "reports.ndjson") -> str:
        path = tmp_path / name
        write_report_file(str(path), reports)
        return str(path)

    return _write


@pytest.fixture
def fast_config(tmp_path: Path) -> str:
    """Config TOML kecil supaya test end-to-end cepat."""
    path = tmp_path / "fast.toml"
    path.write_text("dim = 8\nepochs = 20\nseed = 7\n", encoding="utf-8")
    return str(path)
