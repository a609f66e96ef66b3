import math
from itertools import combinations

import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from schemas.embedding import CooccurrenceMatrix, EmbeddingModel, Vocabulary
from schemas.token import FilteredCorpus, TokenSeq
from services.embedding_service import (
    GloveTrainer,
    build_cooccurrence,
    empty_model,
    glove_gradients,
    glove_loss,
    token_vector,
    train_glove,
)
from utils.errors import DomainError, NothingToTrainError, UnknownTokenError


def _fc(*sequences):
    """FilteredCorpus dengan satu vendor per sampel."""
    return FilteredCorpus(samples={
        f"s{k}": [("V", TokenSeq(tokens=list(seq)))] for k, seq in enumerate(sequences)
    })


def _entry(vocab, X, a, b):
    return X.get(vocab.id_of(a), vocab.id_of(b))


@pytest.mark.parametrize("sequence, expected", [
    (["a", "b"], 1.0),
    (["a", "x", "b"], 0.5),
    (["a", "a", "b"], 1.5),
])
def test_cooccurrence_examples(sequence, expected):
    vocab, X = build_cooccurrence(_fc(sequence), window=40)
    assert _entry(vocab, X, "a", "b") == pytest.approx(expected)
    assert _entry(vocab, X, "b", "a") == pytest.approx(expected)
    assert (vocab.id_of("a"), vocab.id_of("a")) not in X.entries


def test_cooccurrence_window_and_sample_boundary():
    vocab, X = build_cooccurrence(_fc(["a", "x", "y", "b"], ["c"]), window=2)
    assert _entry(vocab, X, "a", "b") == 0.0
    assert _entry(vocab, X, "a", "y") == pytest.approx(0.5)
    assert "c" in vocab
    assert all(vocab.id_of("c") not in key for key in X.entries)


def test_cooccurrence_spans_vendors_within_sample():
    fc = FilteredCorpus(samples={"s": [("A", TokenSeq(tokens=["a"])), ("B", TokenSeq(tokens=["b"]))]})
    vocab, X = build_cooccurrence(fc, window=40)
    assert _entry(vocab, X, "a", "b") == pytest.approx(1.0)


def test_cooccurrence_brute_force_and_symmetry():
    rng = np.random.default_rng(5)
    sequences = [[str(t) for t in rng.choice(list("abcdef"), size=rng.integers(1, 30))] for _ in range(8)]
    vocab, X = build_cooccurrence(_fc(*sequences), window=5)

    expected = {}
    for seq in sequences:
        for p, q in combinations(range(len(seq)), 2):
            if q - p <= 5 and seq[p] != seq[q]:
                for i, j in ((seq[p], seq[q]), (seq[q], seq[p])):
                    expected[(i, j)] = expected.get((i, j), 0.0) + 1.0 / (q - p)

    got = {(vocab.token_of(i), vocab.token_of(j)): v for (i, j), v in X.entries.items()}
    assert got.keys() == expected.keys()
    for key, value in expected.items():
        assert got[key] == pytest.approx(value)
        assert X.entries[(vocab.id_of(key[0]), vocab.id_of(key[1]))] == X.entries[
            (vocab.id_of(key[1]), vocab.id_of(key[0]))]


def test_empty_corpus_gives_empty_matrix():
    vocab, X = build_cooccurrence(FilteredCorpus(), window=40)
    assert vocab.size == 0
    assert len(X) == 0


def test_window_must_be_positive():
    with pytest.raises(DomainError):
        build_cooccurrence(_fc(["a", "b"]), window=0)


# ============ loss & gradient ============

def _zero_model(tokens, dim=3):
    n = len(tokens)
    return EmbeddingModel(vocabulary=Vocabulary(tokens=tokens), W=np.zeros((n, dim)), C=np.zeros((n, dim)),
                          bw=np.zeros(n), bc=np.zeros(n), dim=dim)


def test_loss_single_pair_of_one_is_zero():
    X = CooccurrenceMatrix(vocabulary=Vocabulary(tokens=["a", "b"]), entries={(0, 1): 1.0})
    assert glove_loss(_zero_model(["a", "b"]), X) == 0.0


def test_loss_single_pair_of_e():
    X = CooccurrenceMatrix(vocabulary=Vocabulary(tokens=["a", "b"]), entries={(0, 1): math.e})
    loss = glove_loss(_zero_model(["a", "b"]), X, x_max=100, alpha=0.75)
    assert loss == pytest.approx((math.e / 100) ** 0.75 * 1.0 ** 2)
    assert loss == pytest.approx(0.0672, abs=1e-3)


def test_loss_perfect_fit_is_zero():
    vocab = Vocabulary(tokens=["a", "b"])
    X = CooccurrenceMatrix(vocabulary=vocab, entries={(0, 1): 4.0, (1, 0): 4.0})
    model = _zero_model(["a", "b"], dim=1)
    model.bw[:] = math.log(4.0) / 2
    model.bc[:] = math.log(4.0) / 2
    assert glove_loss(model, X) == pytest.approx(0.0, abs=1e-15)


def test_loss_rejects_non_positive_entry():
    X = CooccurrenceMatrix(vocabulary=Vocabulary(tokens=["a", "b"]), entries={(0, 1): 0.0})
    with pytest.raises(DomainError):
        glove_loss(_zero_model(["a", "b"]), X)


def test_gradient_matches_finite_differences():
    rng = np.random.default_rng(11)
    tokens = ["t0", "t1", "t2", "t3", "t4"]
    entries = {}
    for i, j in combinations(range(5), 2):
        value = float(rng.uniform(0.5, 150.0))
        entries[(i, j)] = entries[(j, i)] = value
    X = CooccurrenceMatrix(vocabulary=Vocabulary(tokens=tokens), entries=entries)
    model = EmbeddingModel(vocabulary=X.vocabulary, W=rng.normal(size=(5, 3)), C=rng.normal(size=(5, 3)),
                           bw=rng.normal(size=5), bc=rng.normal(size=5), dim=3)
    grads = glove_gradients(model, X)

    eps = 1e-6
    for name in ("W", "C", "bw", "bc"):
        param = getattr(model, name)
        numeric = np.zeros_like(param)
        for idx in np.ndindex(param.shape):
            original = param[idx]
            param[idx] = original + eps
            up = glove_loss(model, X)
            param[idx] = original - eps
            down = glove_loss(model, X)
            param[idx] = original
            numeric[idx] = (up - down) / (2 * eps)
        assert_allclose(grads[name], numeric, rtol=1e-4, atol=1e-6)


# ============ training ============

def _pair_matrix(value=10.0):
    return CooccurrenceMatrix(vocabulary=Vocabulary(tokens=["a", "b"]),
                              entries={(0, 1): value, (1, 0): value})


def test_single_pair_converges():
    model = train_glove(_pair_matrix(10.0), dim=4, epochs=500, seed=0)
    assert model.final_loss < 1e-3
    assert model.final_loss <= model.initial_loss


def test_training_records_history():
    _, X = build_cooccurrence(_fc(["a", "b", "c", "a"], ["b", "c", "d"], ["a", "d"]), window=40)
    model = train_glove(X, dim=4, epochs=30, seed=1)
    assert len(model.loss_history) == 30
    assert model.loss_history[-1] <= model.loss_history[0]
    assert model.final_loss == model.loss_history[-1]


def test_training_is_deterministic():
    _, X = build_cooccurrence(_fc(["a", "b", "c", "a"], ["b", "c", "d"]), window=40)
    first = train_glove(X, dim=5, epochs=10, seed=3)
    second = train_glove(X, dim=5, epochs=10, seed=3)
    assert_array_equal(token_vector(first, "a"), token_vector(second, "a"))
    assert_array_equal(first.bc, second.bc)
    other = train_glove(X, dim=5, epochs=10, seed=4)
    assert not np.array_equal(first.W, other.W)


def test_identical_rows_give_close_vectors():
    rng = np.random.default_rng(2)
    context = [f"t{k}" for k in range(10)]
    tokens = ["a", "b"] + context
    vocab = Vocabulary(tokens=tokens)
    entries = {}
    for k, ctx in enumerate(context):
        value = float(rng.uniform(1.0, 30.0))
        for name in ("a", "b"):
            entries[(vocab.id_of(name), vocab.id_of(ctx))] = value
            entries[(vocab.id_of(ctx), vocab.id_of(name))] = value
    for i, j in combinations(range(2, len(tokens)), 2):
        if rng.random() < 0.5:
            value = float(rng.uniform(1.0, 30.0))
            entries[(i, j)] = entries[(j, i)] = value
    X = CooccurrenceMatrix(vocabulary=vocab, entries=entries)
    model = train_glove(X, dim=4, epochs=300, seed=0)

    def cosine(u, v):
        return float(u @ v / (np.linalg.norm(u) * np.linalg.norm(v)))

    vectors = {t: token_vector(model, t) for t in tokens}
    random_pairs = [cosine(vectors[x], vectors[y]) for x, y in combinations(context, 2)]
    assert cosine(vectors["a"], vectors["b"]) > float(np.median(random_pairs))


def test_training_needs_entries():
    with pytest.raises(NothingToTrainError):
        GloveTrainer(dim=4, epochs=1).train(CooccurrenceMatrix())


def test_token_vector_shape_and_unknown_token():
    model = train_glove(_pair_matrix(), dim=6, epochs=5)
    vector = token_vector(model, "a")
    assert vector.shape == (6,)
    assert np.isfinite(vector).all()
    assert_array_equal(vector, model.W[0] + model.C[0])
    with pytest.raises(UnknownTokenError):
        token_vector(model, "zzz")
    with pytest.raises(LookupError):
        token_vector(model, "zzz")


def test_empty_model_shapes():
    model = empty_model(3, Vocabulary(tokens=["x"]))
    assert model.W.shape == (1, 3)
    assert_array_equal(token_vector(model, "x"), np.zeros(3))


def test_model_rejects_bad_shapes():
    with pytest.raises(ValueError):
        EmbeddingModel(vocabulary=Vocabulary(tokens=["a"]), W=np.zeros((2, 3)), C=np.zeros((1, 3)),
                       bw=np.zeros(1), bc=np.zeros(1), dim=3)
