"""
Generator corpus sintetis dengan ground truth yang diketahui.

Setiap vendor punya template label tetap:
    <prefix> [platform] [behavior] <FAMILY> <serial>
Kolom family berisi token family sampel (kadang salah eja), atau kata generic
untuk vendor yang "noisy". Serial unik per label sehingga kolom terakhir
selalu punya unique index tinggi.
"""
import logging
import math
from typing import List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, Field, ValidationError

from schemas.report import AvReport
from services.clustering_service import correction_delta
from utils.errors import ConfigError, InvariantViolation

logger = logging.getLogger(__name__)

CONSONANTS = "bcdfghjklmnprstvz"
VOWELS = "aeiou"
LETTERS = "abcdefghijklmnopqrstuvwxyz"
SEPARATORS = (".", "/", ":", "-", "!", "_")

PLATFORMS = ("win32", "android", "linux", "msil", "macos", "html", "java", "script")
BEHAVIORS = ("trojan", "worm", "backdoor", "downloader", "adware", "ransom")
PREFIXES = ("heur", "malware", "virus", "riskware", "detected", "infected", "unsafe", "threat")
GENERIC_WORDS = (
    "generic", "agent", "kryptik", "variant", "behavior", "cloud", "packed", "obfuscated",
    "dropper", "injector", "stealer", "crypter", "hacktool", "program", "application", "static",
    "dynamic", "machine", "learning", "reputation", "suspicious", "malicious", "heuristic",
    "confidence", "score", "sample", "potential", "unwanted", "monitor", "exploit",
)

# token sampel yang berbeda harus punya delta >= ini supaya tidak ikut dikoreksi
MIN_DELTA = 0.3
MAX_ATTEMPTS = 10000


def separated(words: Sequence[str], min_delta: float = MIN_DELTA) -> List[str]:
    """Ambil kata secara greedy sehingga setiap pasangan punya delta >= min_delta."""
    kept: List[str] = []
    for word in words:
        if word not in kept and all(correction_delta(word, k) >= min_delta for k in kept):
            kept.append(word)
    return kept


class SynthParams(BaseModel):
    families: int = Field(20, ge=1)
    samples: int = Field(500, ge=1)
    vendors: int = Field(30, ge=1)
    noise: float = Field(0.3, ge=0, le=1)
    misspell: float = Field(0.1, ge=0, le=1)
    seed: int = Field(0, ge=0)

    @classmethod
    def build(cls, **values) -> "SynthParams":
        try:
            return cls(**values)
        except ValidationError as e:
            raise ConfigError(f"Parameter synth tidak valid: {e.errors()[0]['loc'][0]}: {e.errors()[0]['msg']}") from None


class VendorTemplate(BaseModel):
    name: str
    prefix: str
    has_platform: bool = False
    has_behavior: bool = False
    separators: List[str] = Field(default_factory=list)

    def render(self, word: str, platform: str, behavior: str, serial: str) -> str:
        parts = [self.prefix.capitalize()]
        if self.has_platform:
            parts.append(platform.capitalize())
        if self.has_behavior:
            parts.append(behavior.capitalize())
        parts.extend([word.capitalize(), serial])
        label = parts[0]
        for sep, part in zip(self.separators, parts[1:]):
            label += sep + part
        return label


class SyntheticCorpus(BaseModel):
    reports: List[AvReport] = Field(default_factory=list)
    truth: List[Tuple[str, str]] = Field(default_factory=list)
    families: List[str] = Field(default_factory=list)


class ExpansionScenario(BaseModel):
    base_reports: List[AvReport] = Field(default_factory=list)
    extra_reports: List[AvReport] = Field(default_factory=list)
    truth: List[Tuple[str, str]] = Field(default_factory=list)
    planted_sample_id: str
    planted_family: str


class SynthService:
    """Generator deterministik: seed yang sama menghasilkan corpus yang sama persis."""

    def __init__(self, seed: int = 0):
        self.rng = np.random.default_rng(seed)
        pool = separated([*PLATFORMS, *BEHAVIORS, *PREFIXES, *GENERIC_WORDS])
        self.platforms = [w for w in PLATFORMS if w in pool]
        self.behaviors = [w for w in BEHAVIORS if w in pool]
        self.prefixes = [w for w in PREFIXES if w in pool]
        self.generic = [w for w in GENERIC_WORDS if w in pool]
        self.reserved = pool
        self._used_ids: set = set()

    # ============ Building blocks ============

    def _pick(self, items: Sequence[str]) -> str:
        return items[int(self.rng.integers(len(items)))]

    def _word(self, low: int, high: int) -> str:
        target = int(self.rng.integers(low, high + 1))
        word = ""
        while len(word) < target:
            word += self._pick(CONSONANTS) + self._pick(VOWELS)
        return word[:target]

    def _far_from(self, word: str, others: Sequence[str]) -> bool:
        return all(word != o and correction_delta(word, o) >= MIN_DELTA for o in others)

    def _families(self, count: int) -> List[str]:
        families: List[str] = []
        for _ in range(MAX_ATTEMPTS):
            if len(families) == count:
                return families
            word = self._word(7, 9)
            if self._far_from(word, self.reserved) and self._far_from(word, families):
                families.append(word)
        if len(families) == count:
            return families
        raise InvariantViolation(f"Tidak bisa membuat {count} nama family yang saling berjauhan")

    def _misspell(self, family: str) -> str:
        """Substitusi satu huruf; varian tetap jauh dari token non-family."""
        for _ in range(50):
            pos = int(self.rng.integers(len(family)))
            letter = self._pick(LETTERS)
            if letter == family[pos]:
                continue
            variant = family[:pos] + letter + family[pos + 1:]
            if self._far_from(variant, self.reserved):
                return variant
        return family

    def _serial(self) -> str:
        return self.rng.bytes(4).hex()

    def _sample_id(self) -> str:
        while True:
            sid = self.rng.bytes(16).hex()
            if sid not in self._used_ids:
                self._used_ids.add(sid)
                return sid

    def _templates(self, count: int) -> List[VendorTemplate]:
        templates = []
        for v in range(count):
            has_platform = bool(self.rng.random() < 0.4)
            has_behavior = bool(self.rng.random() < 0.4)
            n_parts = 3 + has_platform + has_behavior
            templates.append(VendorTemplate(
                name=f"Engine{v + 1:02d}",
                prefix=self._pick(self.prefixes),
                has_platform=has_platform,
                has_behavior=has_behavior,
                separators=[self._pick(SEPARATORS) for _ in range(n_parts - 1)],
            ))
        return templates

    # ============ Generators ============

    def generate(self, params: SynthParams) -> SyntheticCorpus:
        """
        Generate corpus sesuai params.
        Minimal 60% vendor setiap sampel memberi label yang memuat family.
        """
        V = params.vendors
        families = self._families(params.families)
        platform_of = {f: self._pick(self.platforms) for f in families}
        behavior_of = {f: self._pick(self.behaviors) for f in families}
        templates = self._templates(V)
        n_family = min(V, max(math.ceil(0.6 * V), V - round(params.noise * V)))

        reports: List[AvReport] = []
        truth: List[Tuple[str, str]] = []
        for _ in range(params.samples):
            sid = self._sample_id()
            family = self._pick(families)
            family_vendors = set(self.rng.permutation(V)[:n_family].tolist())
            detections = []
            for v, template in enumerate(templates):
                if v in family_vendors:
                    word = family
                    if params.misspell > 0 and self.rng.random() < params.misspell:
                        word = self._misspell(family)
                elif self.rng.random() < 0.5:
                    detections.append((template.name, ""))
                    continue
                else:
                    word = self._pick(self.generic)
                label = template.render(word, platform_of[family], behavior_of[family], self._serial())
                detections.append((template.name, label))
            reports.append(AvReport(sample_id=sid, detections=detections))
            truth.append((sid, family.capitalize()))

        logger.info("Synth: %d sampel, %d family, %d vendor (%d memberi family)",
                    len(reports), len(families), V, n_family)
        return SyntheticCorpus(reports=reports, truth=truth, families=families)

    def expansion(self, vendors: int = 30, base_samples: int = 50, extra_samples: int = 200,
                  base_families: int = 4, context_vendors: int = 3) -> ExpansionScenario:
        """
        Skenario update: sampel P hanya dilabeli `context_vendors` vendor dengan family F.
        Di corpus dasar kolom family vendor tersebut berisi nama varian unik per sampel
        sehingga kolom itu dibuang filter dan P tidak punya token F. Batch tambahan
        memberi F oleh semua vendor, sehingga kolom itu lolos filter setelah update.
        """
        if not 1 <= context_vendors < vendors:
            raise ConfigError("context_vendors harus di [1, vendors)")
        families = self._families(base_families + 1)
        planted, others = families[0], families[1:]
        platform_of = {f: self._pick(self.platforms) for f in families}
        behavior_of = {f: self._pick(self.behaviors) for f in families}
        templates = self._templates(vendors)
        special_prefix = self._pick(self.prefixes)
        for template in templates[:context_vendors]:
            template.prefix = special_prefix
            template.has_platform = template.has_behavior = False
            template.separators = ["/", "."]

        truth: List[Tuple[str, str]] = []

        def labelled(family: str, special_word: Optional[str]) -> AvReport:
            sid = self._sample_id()
            detections = []
            for v, template in enumerate(templates):
                word = special_word if v < context_vendors and special_word else family
                label = template.render(word, platform_of[family], behavior_of[family], self._serial())
                detections.append((template.name, label))
            truth.append((sid, family.capitalize()))
            return AvReport(sample_id=sid, detections=detections)

        base: List[AvReport] = []
        planted_id = self._sample_id()
        for i in range(base_samples - 1):
            junk = self._word(6, 6) + str(i)
            base.append(labelled(self._pick(others), junk))
        planted_detections = [
            (t.name, t.render(planted, "", "", self._serial()) if v < context_vendors else "")
            for v, t in enumerate(templates)
        ]
        base.insert(len(base) // 2, AvReport(sample_id=planted_id, detections=planted_detections))
        truth.append((planted_id, planted.capitalize()))

        extra = [labelled(planted, None) for _ in range(extra_samples)]
        return ExpansionScenario(base_reports=base, extra_reports=extra, truth=truth,
                                 planted_sample_id=planted_id, planted_family=planted)


def synth_corpus(params: SynthParams) -> SyntheticCorpus:
    return SynthService(params.seed).generate(params)


def synth_expansion(seed: int = 0, **kwargs) -> ExpansionScenario:
    return SynthService(seed).expansion(**kwargs)
