from .ingestion_service import IngestionService, add_reports, parse_report, parse_virustotal_report
from .tokenization_service import TokenFilterService, tokenize_label, unique_index
from .embedding_service import GloveTrainer, build_cooccurrence, glove_loss, token_vector, train_glove
from .clustering_service import ClusteringService, cluster_sample, correct_cluster, correction_delta, mean_shift
from .ranking_service import compute_tfidf, format_output, rerank
from .pipeline_service import MiningService
from .evaluation_service import EvaluationService, evaluate, run_subsample
from .synth_service import SynthService, synth_corpus, synth_expansion

__all__ = [
    "IngestionService",
    "add_reports",
    "parse_report",
    "parse_virustotal_report",
    "TokenFilterService",
    "tokenize_label",
    "unique_index",
    "GloveTrainer",
    "build_cooccurrence",
    "glove_loss",
    "token_vector",
    "train_glove",
    "ClusteringService",
    "cluster_sample",
    "correct_cluster",
    "correction_delta",
    "mean_shift",
    "compute_tfidf",
    "format_output",
    "rerank",
    "MiningService",
    "EvaluationService",
    "evaluate",
    "run_subsample",
    "SynthService",
    "synth_corpus",
    "synth_expansion",
]
