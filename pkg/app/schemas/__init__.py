from .report import AvReport, Corpus, CorpusState
from .token import Direction, TokenSeq, VendorPositionTable, FilteredCorpus
from .embedding import Vocabulary, CooccurrenceMatrix, EmbeddingModel
from .cluster import TokenCluster, SampleClustering, Dictionary
from .keyword import TfidfIndex, RankedKeywords
from .config import RunConfig
from .evaluation import EvalReport, SubsampleReport, SubsampleRow

__all__ = [
    "AvReport",
    "Corpus",
    "CorpusState",
    "Direction",
    "TokenSeq",
    "VendorPositionTable",
    "FilteredCorpus",
    "Vocabulary",
    "CooccurrenceMatrix",
    "EmbeddingModel",
    "TokenCluster",
    "SampleClustering",
    "Dictionary",
    "TfidfIndex",
    "RankedKeywords",
    "RunConfig",
    "EvalReport",
    "SubsampleReport",
    "SubsampleRow",
]
