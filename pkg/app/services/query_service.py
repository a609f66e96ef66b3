"""
Service layer read-only untuk API: membaca state hasil mining terakhir.
"""
from pathlib import Path
from typing import Dict, List, Optional

from repositories.keyword_repository import KeywordRepository
from repositories.model_repository import ModelRepository
from repositories.report_repository import CorpusRepository
from schemas.keyword import RankedKeywords
from services.pipeline_service import KEYWORDS_FILE, MODEL_FILE


class KeywordQueryService:
    """
    Service untuk query hasil mining dari state directory.
    Data dibaca ulang setiap request supaya update dari CLI langsung terlihat.
    """

    def __init__(self, state_dir: str):
        self.state_dir = Path(state_dir)
        self.corpus_repo = CorpusRepository(state_dir)
        self.keyword_repo = KeywordRepository(str(self.state_dir / KEYWORDS_FILE))
        self.model_repo = ModelRepository(str(self.state_dir / MODEL_FILE))

    def files(self) -> Dict[str, bool]:
        return {
            "version.json": self.corpus_repo.exists(),
            KEYWORDS_FILE: Path(self.keyword_repo.file_path).exists(),
            MODEL_FILE: self.model_repo.exists(),
        }

    def stats(self) -> Dict[str, object]:
        """
        Ringkasan state.

        Raises:
            StateVersionError: state belum ada
        """
        state = self.corpus_repo.read_state()
        vocabulary_size = 0
        if self.model_repo.exists():
            vocabulary_size = self.model_repo.load().vocabulary.size
        return {
            "corpus_version": state.version,
            "model_version": state.model_version,
            "samples": state.samples,
            "vocabulary_size": vocabulary_size,
            "fingerprint": state.fingerprint,
        }

    def list_keywords(self, limit: int = 50, offset: int = 0) -> List[RankedKeywords]:
        return self.keyword_repo.get_all()[offset:offset + limit]

    def get_keywords(self, sample_id: str) -> Optional[RankedKeywords]:
        return self.keyword_repo.get_map().get(sample_id)
