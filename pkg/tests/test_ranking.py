import math
import random
from itertools import permutations

import pytest

from schemas.cluster import SampleClustering, TokenCluster
from schemas.keyword import RankedKeywords
from services.ranking_service import compute_tfidf, format_output, rerank, rerank_tokens, tfidf_order
from utils.errors import DomainError


# ============ TF-IDF ============

def test_tf_example():
    index = compute_tfidf({"s": {"delf": 3, "trojan": 9}})
    assert index.tf["s"]["delf"] == pytest.approx(0.25)
    assert sum(index.tf["s"].values()) == pytest.approx(1.0)


def test_idf_examples():
    counts = {f"s{k}": ({"nuj": 1, "x": 1} if k < 4 else {"x": 1}) for k in range(10)}
    index = compute_tfidf(counts)
    assert index.idf["nuj"] == pytest.approx(math.log(2))
    assert index.idf["nuj"] == pytest.approx(0.6931, abs=1e-4)

    ubiquitous = compute_tfidf({f"s{k}": {"win32": 2} for k in range(9)})
    assert ubiquitous.idf["win32"] == pytest.approx(-0.1054, abs=1e-4)


def test_tfidf_requires_samples():
    with pytest.raises(DomainError):
        compute_tfidf({})


def test_sample_without_tokens_has_no_scores():
    index = compute_tfidf({"a": {"delf": 1}, "b": {}})
    assert index.scores("b") == {}
    assert tfidf_order(index, "b") == []


def _oracle_tfidf(counts):
    n = len(counts)
    result = {}
    for sid, sample in counts.items():
        total = sum(sample.values())
        for token, count in sample.items():
            df = 0
            for other in counts.values():
                if other.get(token, 0) > 0:
                    df += 1
            result[(sid, token)] = (count / total) * math.log(n / (1 + df))
    return result


@pytest.mark.parametrize("seed", range(50))
def test_tfidf_matches_nested_loops(seed):
    rng = random.Random(seed)
    vocab = ["trojan", "delf", "win32", "worm", "nuj", "gen", "agent", "adware"]
    counts = {}
    for k in range(rng.randint(1, 20)):
        tokens = rng.sample(vocab, rng.randint(1, len(vocab)))
        counts[f"s{k:02d}"] = {t: rng.randint(1, 12) for t in tokens}
    index = compute_tfidf(counts)
    for (sid, token), expected in _oracle_tfidf(counts).items():
        assert abs(index.tfidf(sid, token) - expected) <= 1e-9


def test_tfidf_order_tie_break():
    # N = 2, setiap token di satu sampel: idf = log(1) = 0, semua skor sama
    index = compute_tfidf({"s": {"b": 1, "a": 1, "c": 3}, "t": {"z": 1}})
    assert tfidf_order(index, "s") == ["c", "a", "b"]


def test_scaling_counts_keeps_order():
    rng = random.Random(1)
    counts = {f"s{k}": {t: rng.randint(1, 9) for t in rng.sample("abcdefg", 4)} for k in range(6)}
    scaled = {sid: {t: 3 * c for t, c in sample.items()} for sid, sample in counts.items()}
    base, bigger = compute_tfidf(counts), compute_tfidf(scaled)
    for sid in counts:
        assert tfidf_order(base, sid) == tfidf_order(bigger, sid)


# ============ rerank ============

@pytest.mark.parametrize("clusters, order, top_n, expected", [
    ([["a", "b", "c", "d"]], ["a", "c", "b", "d"], 3, ["a", "b", "c"]),
    ([["a", "b", "c", "d"], ["e"]], ["a", "e", "b", "c", "d"], 3, ["a", "b", "e"]),
    ([["a"], ["b", "c"]], ["a", "b", "c"], 3, ["a", "b", "c"]),
    ([["a"]], [], 5, []),
])
def test_rerank_examples(clusters, order, top_n, expected):
    assert rerank_tokens(clusters, order, top_n) == expected


def _reference(clusters, order, top_n):
    """Algoritme rerank ditulis ulang baris per baris, indeks 1-based."""
    if not order:
        return []
    best_id = 0
    for k in range(1, len(clusters) + 1):
        if order[0] in clusters[k - 1]:
            best_id = k
    best = clusters[best_id - 1]
    result = []
    if len(best) >= top_n:
        for i in range(1, top_n + 1):
            result.append(best[i - 1])
        if len(order) >= 2 and order[1] not in best:
            result[top_n - 1] = order[1]
    else:
        for token in best:
            result.append(token)
        i = 1
        while len(result) < top_n and i <= len(order):
            if order[i - 1] not in result:
                result.append(order[i - 1])
            i += 1
    return result


def _partitions(items, max_blocks):
    if not items:
        yield []
        return
    head, rest = items[0], items[1:]
    for partition in _partitions(rest, max_blocks):
        for k in range(len(partition)):
            yield partition[:k] + [[head] + partition[k]] + partition[k + 1:]
        if len(partition) < max_blocks:
            yield partition + [[head]]


def _configurations():
    for n in range(1, 6):
        tokens = [f"t{k}" for k in range(n)]
        # urutan frekuensi di dalam cluster: semua permutasi untuk n <= 4
        freq_orders = list(permutations(tokens)) if n <= 4 else [tuple(tokens)]
        for partition in _partitions(tokens, 3):
            for freq_order in freq_orders:
                rank = {t: i for i, t in enumerate(freq_order)}
                clusters = [sorted(block, key=rank.get) for block in partition]
                for order in permutations(tokens):
                    yield clusters, list(order)


def test_rerank_matches_reference_exhaustively():
    checked = 0
    for clusters, order in _configurations():
        for top_n in range(1, 6):
            got = rerank_tokens(clusters, order, top_n)
            assert got == _reference(clusters, order, top_n), (clusters, order, top_n)
            assert len(got) == min(top_n, len(order))
            assert len(set(got)) == len(got)
            best = next(cl for cl in clusters if order[0] in cl)
            if best[0] == order[0] and (top_n > 1 or len(order) == 1 or order[1] in best):
                assert got[0] == order[0]
            if len(best) < top_n:
                assert order[0] in got
            checked += 1
    assert checked > 50000


def test_rerank_attaches_frequencies():
    clustering = SampleClustering(sample_id="s", clusters=[
        TokenCluster(members=[("flystudio", 10), ("worm", 5)]),
        TokenCluster(members=[("win32", 8)]),
    ])
    ranked = rerank(clustering, ["flystudio", "win32", "worm"], top_n=5)
    assert ranked.entries == [("flystudio", 10), ("worm", 5), ("win32", 8)]


def test_rerank_rejects_bad_top_n():
    with pytest.raises(DomainError):
        rerank_tokens([["a"]], ["a"], 0)


# ============ output format ============

@pytest.mark.parametrize("entries, expected", [
    ([("hidelink", 12), ("seohide", 3), ("trojan", 11)], "hidelink,12‖seohide,3‖trojan,11"),
    ([], ""),
    ([("a", 1)], "a,1"),
])
def test_format_output(entries, expected):
    rk = RankedKeywords(sample_id="s", entries=entries, top_n=5)
    assert format_output(rk) == expected
    assert format_output(rk, ascii_separator=True) == expected.replace("‖", "||")


@pytest.mark.parametrize("line", ["s\thidelink,12‖seohide,3", "s\thidelink,12||seohide,3"])
def test_output_line_parses_both_separators(line):
    rk = RankedKeywords.from_line(line)
    assert rk.sample_id == "s"
    assert rk.entries == [("hidelink", 12), ("seohide", 3)]


def test_ranked_keywords_invariants():
    with pytest.raises(ValueError):
        RankedKeywords(sample_id="s", entries=[("a", 1), ("a", 2)], top_n=5)
    with pytest.raises(ValueError):
        RankedKeywords(sample_id="s", entries=[("a", 1), ("b", 2)], top_n=1)
    with pytest.raises(ValueError):
        RankedKeywords.from_line("no-tab-here")
