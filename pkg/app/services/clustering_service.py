"""
Service layer untuk Mean Shift per sampel dan koreksi ejaan token di dalam cluster.
"""
import logging
from typing import Dict, List, Mapping, Optional, Sequence

import Levenshtein
import numpy as np

from schemas.cluster import Dictionary, SampleClustering, TokenCluster
from schemas.embedding import EmbeddingModel
from utils.errors import DomainError

logger = logging.getLogger(__name__)


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            # root = index terkecil supaya hasil tidak tergantung urutan union
            self.parent[max(ra, rb)] = min(ra, rb)

    def groups(self) -> List[List[int]]:
        groups: Dict[int, List[int]] = {}
        for i in range(len(self.parent)):
            groups.setdefault(self.find(i), []).append(i)
        return list(groups.values())


# ============ Mean Shift ============

def mean_shift(points: Sequence[Sequence[float]], bandwidth: float = 2.0, max_iter: int = 100) -> List[int]:
    """
    Mean Shift dengan flat kernel; setiap titik menjadi seed.

    Args:
        points: list vektor (atau skalar untuk data 1-D)
        bandwidth: radius kernel
        max_iter: batas iterasi per seed

    Returns:
        label cluster per titik (urutan input), 0 = cluster terbesar

    Raises:
        DomainError: input kosong, bandwidth <= 0, atau max_iter < 1
    """
    X = np.asarray(points, dtype=np.float64)
    if X.ndim == 1:
        X = X[:, None]
    if X.shape[0] == 0:
        raise DomainError("mean_shift butuh minimal satu titik")
    if bandwidth <= 0 or max_iter < 1:
        raise DomainError("bandwidth harus > 0 dan max_iter >= 1")

    # urutan kanonik: hasil tidak tergantung urutan input
    order = np.lexsort(X.T[::-1])
    pts = X[order]
    n = pts.shape[0]
    radius_sq = bandwidth * bandwidth
    tol = 1e-3 * bandwidth

    modes = pts.copy()
    active = np.ones(n, dtype=bool)
    for _ in range(max_iter):
        idx = np.flatnonzero(active)
        if idx.size == 0:
            break
        current = modes[idx]
        dist_sq = ((current[:, None, :] - pts[None, :, :]) ** 2).sum(axis=2)
        within = dist_sq <= radius_sq
        counts = within.sum(axis=1)
        moved = np.where(counts[:, None] > 0, (within @ pts) / np.maximum(counts, 1)[:, None], current)
        shift = np.linalg.norm(moved - current, axis=1)
        modes[idx] = moved
        active[idx[shift < tol]] = False

    # merge mode yang jaraknya < bandwidth/2
    uf = _UnionFind(n)
    merge_sq = (bandwidth / 2.0) ** 2
    mode_dist_sq = ((modes[:, None, :] - modes[None, :, :]) ** 2).sum(axis=2)
    for a, b in zip(*np.nonzero(np.triu(mode_dist_sq < merge_sq, k=1))):
        uf.union(int(a), int(b))

    groups = uf.groups()
    centers = [modes[g].mean(axis=0) for g in groups]
    ranked = sorted(range(len(groups)), key=lambda k: (-len(groups[k]), tuple(centers[k])))

    sorted_labels = np.empty(n, dtype=np.int64)
    for label, k in enumerate(ranked):
        sorted_labels[groups[k]] = label

    labels = np.empty(n, dtype=np.int64)
    labels[order] = sorted_labels
    return labels.tolist()


def cluster_sample(token_counts: Mapping[str, int], model: Optional[EmbeddingModel],
                   bandwidth: float = 2.0, max_iter: int = 100, sample_id: str = "") -> SampleClustering:
    """
    Cluster token distinct satu sampel berdasarkan vektornya.
    Tanpa model (tidak ada yang bisa dilatih) setiap token menjadi cluster sendiri.

    Raises:
        UnknownTokenError: token tidak ada di model (model stale)
    """
    tokens = sorted(t for t, c in token_counts.items() if c > 0)
    if not tokens:
        return SampleClustering(sample_id=sample_id, clusters=[])

    if model is None:
        clusters = [TokenCluster(members=[(t, token_counts[t])]) for t in tokens]
        clusters.sort(key=lambda cl: (-cl.members[0][1], cl.members[0][0]))
        return SampleClustering(sample_id=sample_id, clusters=clusters)

    vectors = np.stack([model.embedding(t) for t in tokens])
    labels = mean_shift(vectors, bandwidth, max_iter)

    clusters: List[TokenCluster] = []
    for label in range(max(labels) + 1):
        member_idx = [k for k, lab in enumerate(labels) if lab == label]
        clusters.append(TokenCluster(
            members=[(tokens[k], token_counts[tokens[k]]) for k in member_idx],
            centroid=vectors[member_idx].mean(axis=0).tolist(),
        ))
    return SampleClustering(sample_id=sample_id, clusters=clusters)


# ============ Token correction ============

def correction_delta(t1: str, t2: str) -> float:
    """
    delta = (Levenshtein(t1, t2) - |len(t1) - len(t2)|) / max(len(t1), len(t2))

    Raises:
        DomainError: salah satu token kosong
    """
    if not t1 or not t2:
        raise DomainError("correction_delta butuh token tidak kosong")
    edit = Levenshtein.distance(t1, t2)
    return (edit - abs(len(t1) - len(t2))) / max(len(t1), len(t2))


def _survivor(members: List[tuple], dictionary: Dictionary) -> str:
    in_dict = [m for m in members if m[0] in dictionary]
    if len(in_dict) == 1:
        return in_dict[0][0]
    pool = in_dict if len(in_dict) >= 2 else members
    return min(pool, key=lambda m: (-m[1], m[0]))[0]


def correct_cluster(cluster: TokenCluster, dictionary: Dictionary, delta_threshold: float = 0.3) -> TokenCluster:
    """
    Gabungkan varian ejaan (delta < threshold) di dalam satu cluster.
    Semua pasangan yang memenuhi di-union; ejaan yang bertahan:
    kata kamus (jika tepat satu), lalu frekuensi tertinggi, lalu leksikografis.
    """
    members = cluster.members
    if len(members) < 2:
        return cluster

    uf = _UnionFind(len(members))
    for i in range(len(members)):
        for j in range(i + 1, len(members)):
            if correction_delta(members[i][0], members[j][0]) < delta_threshold:
                uf.union(i, j)

    merged = []
    for group in uf.groups():
        group_members = [members[k] for k in group]
        survivor = _survivor(group_members, dictionary)
        if len(group_members) > 1:
            logger.debug("Koreksi %s -> %s", [m[0] for m in group_members], survivor)
        merged.append((survivor, sum(m[1] for m in group_members)))
    return TokenCluster(members=merged, centroid=cluster.centroid)


class ClusteringService:
    """Cluster + koreksi untuk satu sampel dengan parameter dari config."""

    def __init__(self, dictionary: Dictionary, bandwidth: float = 2.0, max_iter: int = 100,
                 delta_threshold: float = 0.3):
        self.dictionary = dictionary
        self.bandwidth = bandwidth
        self.max_iter = max_iter
        self.delta_threshold = delta_threshold

    def process(self, sample_id: str, token_counts: Mapping[str, int],
                model: Optional[EmbeddingModel]) -> SampleClustering:
        clustering = cluster_sample(token_counts, model, self.bandwidth, self.max_iter, sample_id)
        corrected = [correct_cluster(cl, self.dictionary, self.delta_threshold) for cl in clustering.clusters]
        return SampleClustering(sample_id=sample_id, clusters=corrected)
