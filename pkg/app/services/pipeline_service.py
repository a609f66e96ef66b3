"""
Orkestrasi pipeline: ingest -> filter -> embed -> cluster -> rank -> write.
Setiap stage dibungkus supaya error menyebut nama stage yang gagal.
"""
import logging
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager
from pathlib import Path
from typing import Dict, Iterator, List, Optional

from pydantic import BaseModel, ConfigDict, Field

from repositories.keyword_repository import KeywordRepository
from repositories.model_repository import ModelRepository
from repositories.report_repository import CorpusRepository
from schemas.cluster import Dictionary, SampleClustering
from schemas.config import RunConfig
from schemas.embedding import EmbeddingModel
from schemas.keyword import RankedKeywords, TfidfIndex
from schemas.report import AvReport, Corpus
from schemas.token import FilteredCorpus
from services.clustering_service import ClusteringService
from services.embedding_service import GloveTrainer, build_cooccurrence, empty_model
from services.ingestion_service import IngestionService, add_reports
from services.ranking_service import compute_tfidf, rerank, tfidf_order
from services.tokenization_service import TokenFilterService
from utils.errors import ConfigError, StageError, StorageError

logger = logging.getLogger(__name__)

MODEL_FILE = "model.txt"
KEYWORDS_FILE = "keywords.tsv"


@contextmanager
def stage(name: str) -> Iterator[None]:
    """Bungkus exception apa pun dari stage menjadi StageError(name, cause)."""
    logger.info("[%s] mulai", name)
    try:
        yield
    except StageError:
        raise
    except OSError as e:
        raise StageError(name, StorageError(str(e))) from e
    except Exception as e:
        raise StageError(name, e) from e


class PipelineResult(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    corpus: Corpus
    filtered: Optional[FilteredCorpus] = None
    model: Optional[EmbeddingModel] = None
    clusterings: Dict[str, SampleClustering] = Field(default_factory=dict)
    tfidf: Optional[TfidfIndex] = None
    ranked: List[RankedKeywords] = Field(default_factory=list)


class MiningService:
    """
    Service untuk menjalankan pipeline lengkap berdasarkan RunConfig.
    """

    def __init__(self, config: RunConfig, dictionary: Optional[Dictionary] = None):
        self.config = config
        self._dictionary = dictionary

    @property
    def dictionary(self) -> Dictionary:
        if self._dictionary is None:
            path = self.config.dictionary_path
            if not Path(path).is_file():
                raise ConfigError(f"Dictionary tidak ditemukan: {path}")
            self._dictionary = Dictionary.from_file(path)
            if len(self._dictionary) == 0:
                raise ConfigError(f"Dictionary kosong: {path}")
        return self._dictionary

    # ============ Stages ============

    def read_reports(self, reports_path: str) -> List[AvReport]:
        with stage("ingest"):
            service = IngestionService(self.config.input_format, self.config.threads)
            return service.read_reports(reports_path)

    def run(self, corpus: Corpus) -> PipelineResult:
        """
        Jalankan filter/embed/cluster/rank di memori untuk satu corpus.
        Tidak menulis file apa pun.
        """
        cfg = self.config
        result = PipelineResult(corpus=corpus)
        if len(corpus) == 0:
            logger.warning("Corpus kosong, tidak ada keyword yang dihasilkan")
            return result

        with stage("filter"):
            filter_service = TokenFilterService(cfg.sigma_threshold, cfg.min_vendor_labels, cfg.threads)
            result.filtered = filter_service.filter_tokens(corpus)

        with stage("embed"):
            vocabulary, matrix = build_cooccurrence(result.filtered, cfg.window)
            if len(matrix) == 0:
                logger.warning("Tidak ada pasangan co-occurrence, training dilewati")
                result.model = None
            else:
                trainer = GloveTrainer(dim=cfg.dim, epochs=cfg.epochs, seed=cfg.seed, x_max=cfg.x_max,
                                       alpha=cfg.alpha, lr=cfg.lr, batch_size=cfg.batch_size)
                result.model = trainer.train(matrix)

        with stage("cluster"):
            clustering_service = ClusteringService(self.dictionary, cfg.bandwidth, cfg.ms_max_iter,
                                                   cfg.delta_threshold)
            sample_ids = corpus.sample_ids()

            def process(sid: str) -> SampleClustering:
                counts = Counter(result.filtered.sequence(sid))
                return clustering_service.process(sid, counts, result.model)

            if cfg.threads > 1:
                with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
                    clusterings = list(pool.map(process, sample_ids))
            else:
                clusterings = [process(sid) for sid in sample_ids]
            result.clusterings = {c.sample_id: c for c in clusterings}
            logger.info("Cluster: %d sampel, %d cluster", len(clusterings),
                        sum(len(c.clusters) for c in clusterings))

        with stage("rank"):
            corrected = {sid: c.frequencies() for sid, c in result.clusterings.items()}
            result.tfidf = compute_tfidf(corrected)
            ranked = []
            for sid in corpus.sample_ids():
                order = tfidf_order(result.tfidf, sid)
                ranked.append(rerank(result.clusterings[sid], order, cfg.top_n))
            result.ranked = ranked

        return result

    def write(self, result: PipelineResult, state_dir: Optional[str], output_path: Optional[str],
              new_reports: Optional[List[AvReport]] = None) -> None:
        """
        Persist model + corpus, lalu output. File --out ditulis paling akhir,
        setelah semua file state sukses.
        new_reports != None berarti update (append), selain itu corpus ditulis ulang.
        """
        cfg = self.config
        with stage("write"):
            if state_dir:
                self._write_state(result, state_dir, new_reports)
            if output_path:
                KeywordRepository(output_path).save(result.ranked, cfg.ascii_separator)

    def _write_state(self, result: PipelineResult, state_dir: str, new_reports: Optional[List[AvReport]]) -> None:
        cfg = self.config
        state = Path(state_dir)
        model = result.model or empty_model(cfg.dim)
        ModelRepository(str(state / MODEL_FILE)).save(model)
        KeywordRepository(str(state / KEYWORDS_FILE)).save(result.ranked, cfg.ascii_separator)
        corpus_repo = CorpusRepository(state_dir)
        if new_reports is None:
            corpus_repo.save(result.corpus)
        else:
            corpus_repo.append(new_reports, result.corpus.version)
        corpus_repo.record_model(result.corpus.version, cfg.fingerprint())

    # ============ Commands ============

    def mine(self, reports_path: str, state_dir: Optional[str] = None, output_path: Optional[str] = None,
             skip_duplicates: bool = False) -> PipelineResult:
        """Pipeline penuh dari file report; output ditulis hanya jika semua stage sukses."""
        with stage("ingest"):
            if state_dir and CorpusRepository(state_dir).exists():
                raise ConfigError(f"State sudah ada di {state_dir}; pakai 'update' untuk menambah report")
        reports = self.read_reports(reports_path)
        with stage("ingest"):
            corpus = add_reports(Corpus(), reports, skip_duplicates=skip_duplicates)
        result = self.run(corpus)
        self.write(result, state_dir, output_path)
        return result

    def update(self, state_dir: str, reports_path: str, output_path: Optional[str] = None,
               skip_duplicates: bool = False) -> PipelineResult:
        """
        Tambah report ke state yang ada lalu latih ulang penuh atas corpus gabungan.

        Raises:
            StageError: state tidak kompatibel, duplikat, atau error stage lain
        """
        with stage("ingest"):
            corpus_repo = CorpusRepository(state_dir)
            corpus_repo.check_compatible(self.config.fingerprint())
            corpus = corpus_repo.load()
        reports = self.read_reports(reports_path)
        with stage("ingest"):
            merged = add_reports(corpus, reports, skip_duplicates=skip_duplicates)
            known = set(corpus.sample_ids())
            added = [r for r in merged.reports if r.sample_id not in known]
        logger.info("Update: corpus v%d -> v%d (+%d sampel)", corpus.version, merged.version, len(added))
        result = self.run(merged)
        self.write(result, state_dir, output_path, new_reports=added)
        return result
