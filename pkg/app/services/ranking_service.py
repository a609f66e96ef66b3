"""
Service layer untuk skor TF-IDF dan rerank keyword per sampel.

    tf(i, j)  = count(i, j) / |tokens sampel j|
    idf(i)    = log(N / (1 + doc_count(i)))      (natural log, boleh negatif)
    tfidf     = tf * idf
"""
import logging
import math
from typing import Dict, List, Mapping, Sequence, Union

from schemas.cluster import SampleClustering
from schemas.keyword import RankedKeywords, TfidfIndex
from schemas.token import FilteredCorpus
from utils.errors import DomainError

logger = logging.getLogger(__name__)


def compute_tfidf(source: Union[FilteredCorpus, Mapping[str, Mapping[str, int]]]) -> TfidfIndex:
    """
    Bangun TfidfIndex dari multiset token per sampel (setelah koreksi).

    Args:
        source: FilteredCorpus, atau mapping sample_id -> {token: count}

    Raises:
        DomainError: corpus kosong
    """
    counts = source.token_counts() if isinstance(source, FilteredCorpus) else source
    if not counts:
        raise DomainError("compute_tfidf butuh corpus tidak kosong")

    n_samples = len(counts)
    doc_count: Dict[str, int] = {}
    clean: Dict[str, Dict[str, int]] = {}
    tf: Dict[str, Dict[str, float]] = {}
    for sid in sorted(counts):
        sample = {token: int(c) for token, c in counts[sid].items() if c > 0}
        clean[sid] = sample
        total = sum(sample.values())
        tf[sid] = {token: c / total for token, c in sample.items()} if total else {}
        for token in sample:
            doc_count[token] = doc_count.get(token, 0) + 1

    idf = {token: math.log(n_samples / (1 + df)) for token, df in doc_count.items()}
    logger.info("TF-IDF: %d sampel, %d token distinct", n_samples, len(idf))
    return TfidfIndex(n_samples=n_samples, counts=clean, tf=tf, doc_count=doc_count, idf=idf)


def tfidf_order(index: TfidfIndex, sample_id: str) -> List[str]:
    """Token distinct sampel, tfidf turun; tie: frekuensi lebih tinggi, lalu leksikografis."""
    scores = index.scores(sample_id)
    freqs = index.counts.get(sample_id, {})
    return sorted(scores, key=lambda t: (-scores[t], -freqs[t], t))


def rerank_tokens(clusters: Sequence[Sequence[str]], order: Sequence[str], top_n: int) -> List[str]:
    """
    Rerank murni di level token.

    Args:
        clusters: token per cluster, masing-masing sudah urut frekuensi
        order: token sampel urut tfidf (order[0] = TFIDF[1])
        top_n: jumlah keyword maksimum

    Returns:
        list token hasil rerank
    """
    if not order:
        return []
    if top_n < 1:
        raise DomainError("top_n harus >= 1")

    # cluster yang memuat token dengan tfidf tertinggi
    best = next((list(cl) for cl in clusters if order[0] in cl), [order[0]])

    if len(best) >= top_n:
        result = best[:top_n]
        if len(order) > 1 and order[1] not in best:
            result[top_n - 1] = order[1]
        return result

    result = list(best)
    for token in order:
        if len(result) >= top_n:
            break
        if token not in result:
            result.append(token)
    return result


def rerank(clustering: SampleClustering, order: Sequence[str], top_n: int = 5) -> RankedKeywords:
    """Rerank satu sampel dan tempelkan frekuensi token dari clustering."""
    freqs = clustering.frequencies()
    tokens = rerank_tokens([cl.tokens for cl in clustering.clusters], order, top_n)
    return RankedKeywords(
        sample_id=clustering.sample_id,
        entries=[(token, freqs[token]) for token in tokens],
        top_n=top_n,
    )


def format_output(rk: RankedKeywords, ascii_separator: bool = False) -> str:
    """`token,count` digabung dengan U+2016 (atau `||` jika ascii_separator)."""
    return rk.formatted(ascii_separator)
