from .report_repository import CorpusRepository, read_raw_lines, write_report_file
from .model_repository import ModelRepository
from .keyword_repository import KeywordRepository
from .groundtruth_repository import GroundTruthRepository

__all__ = [
    "CorpusRepository",
    "read_raw_lines",
    "write_report_file",
    "ModelRepository",
    "KeywordRepository",
    "GroundTruthRepository",
]
