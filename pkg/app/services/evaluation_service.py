"""
Service layer untuk evaluasi Top-N terhadap ground truth
dan eksperimen sensitivitas jumlah sampel.
"""
import logging
from typing import Iterable, List, Mapping, Optional, Sequence, Union

import numpy as np

from repositories.groundtruth_repository import GroundTruthRepository
from repositories.keyword_repository import KeywordRepository
from schemas.config import RunConfig
from schemas.evaluation import MAX_TOP_N, EvalReport, SubsampleReport, SubsampleRow
from schemas.keyword import RankedKeywords
from schemas.report import Corpus
from services.pipeline_service import MiningService
from utils.errors import ConfigError

logger = logging.getLogger(__name__)

DEFAULT_FRACTIONS = (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9)


def evaluate(outputs: Union[Mapping[str, Sequence[str]], Iterable[RankedKeywords]],
             truth: Mapping[str, str], max_n: int = MAX_TOP_N) -> EvalReport:
    """
    Hitung akurasi Top-1..Top-max_n.
    Hit jika family ground truth sama persis (case-insensitive) dengan salah satu
    dari N token pertama output. Sampel ground truth tanpa output dihitung unevaluable.
    """
    if not isinstance(outputs, Mapping):
        outputs = {rk.sample_id: rk.tokens for rk in outputs}

    hits = {n: 0 for n in range(1, max_n + 1)}
    evaluated = 0
    missing: List[str] = []
    for sample_id, family in truth.items():
        tokens = outputs.get(sample_id)
        if tokens is None:
            missing.append(sample_id)
            continue
        evaluated += 1
        lowered = [t.lower() for t in tokens]
        family = family.lower()
        if family in lowered:
            rank = lowered.index(family) + 1
            for n in range(rank, max_n + 1):
                hits[n] += 1

    accuracy = {n: (hits[n] / evaluated if evaluated else 0.0) for n in hits}
    if missing:
        logger.warning("%d sampel ground truth tidak ada di output", len(missing))
    return EvalReport(accuracy=accuracy, hits=hits, evaluated=evaluated,
                      unevaluable=len(missing), unevaluable_ids=missing)


def format_table(report: EvalReport) -> str:
    """Tabel satu baris Top-1..Top-10."""
    ns = sorted(report.accuracy)
    header = " | ".join(f"Top-{n:<2}" for n in ns)
    values = " | ".join(f"{report.accuracy[n]:.3f} " for n in ns)
    lines = [header, "-" * len(header), values, "",
             f"evaluated: {report.evaluated}   unevaluable: {report.unevaluable}"]
    return "\n".join(lines)


def format_subsample_table(report: SubsampleReport) -> str:
    lines = [f"{'fraction':>8} {'samples':>7} | {'top1 min':>8} {'mean':>6} {'max':>6} | "
             f"{'top3 min':>8} {'mean':>6} {'max':>6}"]
    for row in report.rows:
        t1, t3 = row.top1_summary(), row.top3_summary()
        lines.append(f"{row.fraction:>8.1f} {row.samples:>7} | {t1['min']:>8.3f} {t1['mean']:>6.3f} "
                     f"{t1['max']:>6.3f} | {t3['min']:>8.3f} {t3['mean']:>6.3f} {t3['max']:>6.3f}")
    ref = report.reference
    lines.append(f"{'1.0':>8} {ref.evaluated:>7} | {'':>8} {ref.top(1):>6.3f} {'':>6} | "
                 f"{'':>8} {ref.top(3):>6.3f} {'':>6}")
    return "\n".join(lines)


class EvaluationService:
    """Evaluasi file output terhadap file ground truth."""

    def __init__(self, outputs_path: str, groundtruth_path: str):
        self.keyword_repo = KeywordRepository(outputs_path)
        self.groundtruth_repo = GroundTruthRepository(groundtruth_path)

    def run(self, max_n: int = MAX_TOP_N) -> EvalReport:
        truth = self.groundtruth_repo.load()
        outputs = self.keyword_repo.get_all()
        report = evaluate(outputs, truth, max_n)
        logger.info("Eval: %d sampel, Top-1 %.3f, Top-3 %.3f", report.evaluated, report.top(1), report.top(3))
        return report


def run_subsample(config: RunConfig, corpus: Corpus, truth: Mapping[str, str],
                  fractions: Optional[Sequence[float]] = None, repeats: int = 10,
                  seed: Optional[int] = None) -> SubsampleReport:
    """
    Untuk setiap fraksi f dan setiap ulangan: ambil round(f * M) sampel acak tanpa
    pengembalian, jalankan pipeline penuh pada subset saja, evaluasi Top-1/Top-3.

    Raises:
        ConfigError: fraksi di luar (0, 1] atau repeats < 1
    """
    fractions = list(fractions or DEFAULT_FRACTIONS)
    for f in fractions:
        if not 0 < f <= 1:
            raise ConfigError(f"Fraksi harus di (0, 1], dapat {f}")
    if repeats < 1:
        raise ConfigError("repeats harus >= 1")
    if len(corpus) == 0:
        raise ConfigError("Corpus kosong, tidak ada yang bisa di-subsample")

    service = MiningService(config)
    rng = np.random.default_rng(config.seed if seed is None else seed)
    total = len(corpus)

    rows: List[SubsampleRow] = []
    for fraction in fractions:
        size = max(1, round(fraction * total))
        row = SubsampleRow(fraction=fraction, samples=size, repeats=repeats)
        for repeat in range(repeats):
            picked = sorted(rng.choice(total, size=size, replace=False).tolist())
            subset = Corpus(reports=[corpus.reports[i] for i in picked], version=corpus.version)
            result = service.run(subset)
            sub_truth = {sid: truth[sid] for sid in subset.sample_ids() if sid in truth}
            report = evaluate(result.ranked, sub_truth, max_n=3)
            row.top1.append(report.top(1))
            row.top3.append(report.top(3))
            logger.info("Subsample f=%.1f #%d: top1 %.3f top3 %.3f", fraction, repeat + 1,
                        report.top(1), report.top(3))
        rows.append(row)

    reference = evaluate(service.run(corpus).ranked, truth)
    return SubsampleReport(rows=rows, reference=reference)
