"""
Service layer untuk co-occurrence matrix dan training vektor GloVe.

Objective:
    J = sum_{(i,j)} f(X_ij) * (T_i . T~_j + b_i + b~_j - log X_ij)^2
    f(x) = (x / x_max)^alpha jika x < x_max, selain itu 1
"""
import logging
from collections import defaultdict
from typing import Dict, Optional, Tuple

import numpy as np

from schemas.embedding import CooccurrenceMatrix, EmbeddingModel, Vocabulary
from schemas.token import FilteredCorpus
from utils.errors import DomainError, InvariantViolation, NothingToTrainError

logger = logging.getLogger(__name__)

ADAGRAD_EPS = 1e-8


def build_cooccurrence(fc: FilteredCorpus, window: int = 40) -> Tuple[Vocabulary, CooccurrenceMatrix]:
    """
    Hitung X_ij dengan bobot 1/jarak untuk pasangan token berbeda dalam `window` posisi.
    Context sequence = token semua vendor satu sampel, tidak pernah lintas sampel.

    Returns:
        (Vocabulary berisi semua token yang lolos filter, CooccurrenceMatrix simetris)
    """
    if window < 1:
        raise DomainError(f"window harus >= 1, dapat {window}")

    sample_ids = sorted(fc.samples)
    sequences = [fc.sequence(sid) for sid in sample_ids]
    vocabulary = Vocabulary(tokens=sorted({token for seq in sequences for token in seq}))

    entries: Dict[Tuple[int, int], float] = defaultdict(float)
    for seq in sequences:
        ids = [vocabulary.id_of(token) for token in seq]
        length = len(ids)
        for p in range(length):
            a = ids[p]
            for q in range(p + 1, min(length, p + window + 1)):
                b = ids[q]
                if a == b:
                    continue
                weight = 1.0 / (q - p)
                entries[(a, b)] += weight
                entries[(b, a)] += weight

    matrix = CooccurrenceMatrix(vocabulary=vocabulary, entries=dict(entries))
    logger.info("Co-occurrence: vocabulary %d token, %d entry (window %d)", vocabulary.size, len(matrix), window)
    return vocabulary, matrix


def glove_weight(x: np.ndarray, x_max: float = 100.0, alpha: float = 0.75) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    return np.where(x < x_max, (x / x_max) ** alpha, 1.0)


def _entry_arrays(X: CooccurrenceMatrix) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    rows, cols, values = X.to_arrays()
    if values.size and (values <= 0).any():
        raise DomainError("X_ij <= 0: log tidak terdefinisi")
    return rows, cols, values


def _residuals(model: EmbeddingModel, rows: np.ndarray, cols: np.ndarray, log_x: np.ndarray) -> np.ndarray:
    return (np.einsum("ij,ij->i", model.W[rows], model.C[cols])
            + model.bw[rows] + model.bc[cols] - log_x)


def glove_loss(model: EmbeddingModel, X: CooccurrenceMatrix,
               x_max: float = 100.0, alpha: float = 0.75) -> float:
    """
    Hitung J untuk model terhadap X.

    Raises:
        DomainError: ada entry X_ij <= 0
    """
    rows, cols, values = _entry_arrays(X)
    if values.size == 0:
        return 0.0
    diff = _residuals(model, rows, cols, np.log(values))
    return float(np.sum(glove_weight(values, x_max, alpha) * diff * diff))


def glove_gradients(model: EmbeddingModel, X: CooccurrenceMatrix,
                    x_max: float = 100.0, alpha: float = 0.75) -> Dict[str, np.ndarray]:
    """Gradient analitik dJ/dW, dJ/dC, dJ/dbw, dJ/dbc (bentuk sama dengan parameter)."""
    rows, cols, values = _entry_arrays(X)
    grads = {
        "W": np.zeros_like(model.W),
        "C": np.zeros_like(model.C),
        "bw": np.zeros_like(model.bw),
        "bc": np.zeros_like(model.bc),
    }
    if values.size == 0:
        return grads
    g = 2.0 * glove_weight(values, x_max, alpha) * _residuals(model, rows, cols, np.log(values))
    np.add.at(grads["W"], rows, g[:, None] * model.C[cols])
    np.add.at(grads["C"], cols, g[:, None] * model.W[rows])
    np.add.at(grads["bw"], rows, g)
    np.add.at(grads["bc"], cols, g)
    return grads


class GloveTrainer:
    """
    Mini-batch AdaGrad atas entry X yang diacak ulang setiap epoch.
    Deterministik untuk seed yang sama.
    """

    def __init__(self, dim: int = 32, epochs: int = 100, seed: int = 0, x_max: float = 100.0,
                 alpha: float = 0.75, lr: float = 0.05, batch_size: int = 512):
        if dim < 1 or epochs < 1 or batch_size < 1:
            raise DomainError("dim, epochs, dan batch_size harus >= 1")
        self.dim = dim
        self.epochs = epochs
        self.seed = seed
        self.x_max = x_max
        self.alpha = alpha
        self.lr = lr
        self.batch_size = batch_size

    def initial_model(self, vocabulary: Vocabulary, rng: np.random.Generator) -> EmbeddingModel:
        n, scale = vocabulary.size, 0.5 / self.dim
        return EmbeddingModel(
            vocabulary=vocabulary,
            W=rng.uniform(-scale, scale, size=(n, self.dim)),
            C=rng.uniform(-scale, scale, size=(n, self.dim)),
            bw=rng.uniform(-scale, scale, size=n),
            bc=rng.uniform(-scale, scale, size=n),
            dim=self.dim,
        )

    def _adagrad_step(self, param: np.ndarray, gradsq: np.ndarray, index: np.ndarray, grad: np.ndarray) -> None:
        # gradient per entry dijumlahkan per baris dulu, lalu satu update per baris unik
        acc = np.zeros((param.shape[0],) + param.shape[1:], dtype=np.float64)
        np.add.at(acc, index, grad)
        touched = np.unique(index)
        step = acc[touched]
        gradsq[touched] += step * step
        param[touched] -= self.lr * step / (np.sqrt(gradsq[touched]) + ADAGRAD_EPS)

    def train(self, X: CooccurrenceMatrix) -> EmbeddingModel:
        """
        Latih model dari X.

        Raises:
            NothingToTrainError: X kosong
            InvariantViolation: parameter menjadi non-finite
        """
        if len(X) == 0:
            raise NothingToTrainError("nothing to train: co-occurrence matrix kosong")

        rows, cols, values = _entry_arrays(X)
        log_x = np.log(values)
        weights = glove_weight(values, self.x_max, self.alpha)

        rng = np.random.default_rng(self.seed)
        model = self.initial_model(X.vocabulary, rng)
        W, C, bw, bc = model.W, model.C, model.bw, model.bc
        gsq = {name: np.zeros_like(arr) for name, arr in (("W", W), ("C", C), ("bw", bw), ("bc", bc))}

        def loss() -> float:
            diff = _residuals(model, rows, cols, log_x)
            return float(np.sum(weights * diff * diff))

        initial_loss = loss()
        history = []
        n_entries = values.size
        for epoch in range(1, self.epochs + 1):
            order = rng.permutation(n_entries)
            for start in range(0, n_entries, self.batch_size):
                batch = order[start:start + self.batch_size]
                r, c = rows[batch], cols[batch]
                diff = np.einsum("ij,ij->i", W[r], C[c]) + bw[r] + bc[c] - log_x[batch]
                g = 2.0 * weights[batch] * diff
                grad_w = g[:, None] * C[c]
                grad_c = g[:, None] * W[r]
                self._adagrad_step(W, gsq["W"], r, grad_w)
                self._adagrad_step(C, gsq["C"], c, grad_c)
                self._adagrad_step(bw, gsq["bw"], r, g)
                self._adagrad_step(bc, gsq["bc"], c, g)
            history.append(loss())
            logger.debug("epoch %d/%d loss=%.6f", epoch, self.epochs, history[-1])

        if not all(np.isfinite(arr).all() for arr in (W, C, bw, bc)):
            raise InvariantViolation("Training menghasilkan nilai non-finite")

        logger.info("GloVe: %d token, %d entry, loss %.4f -> %.4f",
                    X.vocabulary.size, n_entries, initial_loss, history[-1])
        return model.model_copy(update={
            "initial_loss": initial_loss,
            "final_loss": history[-1],
            "loss_history": history,
        })


def train_glove(X: CooccurrenceMatrix, dim: int = 32, epochs: int = 100, seed: int = 0,
                x_max: float = 100.0, alpha: float = 0.75, lr: float = 0.05,
                batch_size: int = 512) -> EmbeddingModel:
    """Shortcut fungsi untuk GloveTrainer(...).train(X)."""
    trainer = GloveTrainer(dim=dim, epochs=epochs, seed=seed, x_max=x_max,
                           alpha=alpha, lr=lr, batch_size=batch_size)
    return trainer.train(X)


def token_vector(model: EmbeddingModel, token: str) -> np.ndarray:
    """
    Embedding final token = T_i + T~_i.

    Raises:
        UnknownTokenError: token tidak ada di vocabulary
    """
    return model.embedding(token)


def empty_model(dim: int, vocabulary: Optional[Vocabulary] = None) -> EmbeddingModel:
    """Model tanpa training (dipakai saat corpus tidak punya pasangan co-occurrence)."""
    vocabulary = vocabulary or Vocabulary()
    n = vocabulary.size
    return EmbeddingModel(
        vocabulary=vocabulary,
        W=np.zeros((n, dim)), C=np.zeros((n, dim)), bw=np.zeros(n), bc=np.zeros(n), dim=dim,
    )
