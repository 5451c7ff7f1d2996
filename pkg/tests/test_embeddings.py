import numpy as np
import pytest

from forumintel.embeddings import (
    SkipGramEmbedder,
    embed_document,
    pair_loss_and_grads,
    train_embeddings,
)
from forumintel.errors import InsufficientCorpus


def _toy_corpus(n_sentences=120, seed=4):
    """Two interchangeable animal words sharing contexts; two tech words in
    disjoint contexts."""
    rng = np.random.default_rng(seed)
    sentences = []
    for _ in range(n_sentences):
        animal = "gato" if rng.random() < 0.5 else "cachorro"
        sentences.append(["meu", animal, "dorme", "muito", "casa"])
        sentences.append(["rede", "http", "servidor", "porta", "senha"])
    return sentences


def test_gradient_check_against_central_differences():
    rng = np.random.default_rng(0)
    dim = 7
    v_c = rng.normal(size=dim) * 0.5
    u_o = rng.normal(size=dim) * 0.5
    u_neg = rng.normal(size=(5, dim)) * 0.5

    loss, g_v, g_ctx, g_negs = pair_loss_and_grads(v_c, u_o, u_neg)
    eps = 1e-6

    def numeric(wiggle):
        plus, minus = wiggle(eps), wiggle(-eps)
        return (plus - minus) / (2 * eps)

    for i in range(dim):
        def loss_at(delta, i=i):
            shifted = v_c.copy()
            shifted[i] += delta
            return pair_loss_and_grads(shifted, u_o, u_neg)[0]
        num = numeric(loss_at)
        assert abs(num - g_v[i]) <= 1e-4 * max(1.0, abs(num))

    for i in range(dim):
        def loss_at(delta, i=i):
            shifted = u_o.copy()
            shifted[i] += delta
            return pair_loss_and_grads(v_c, shifted, u_neg)[0]
        num = numeric(loss_at)
        assert abs(num - g_ctx[i]) <= 1e-4 * max(1.0, abs(num))

    for k in range(u_neg.shape[0]):
        for i in range(dim):
            def loss_at(delta, k=k, i=i):
                shifted = u_neg.copy()
                shifted[k, i] += delta
                return pair_loss_and_grads(v_c, u_o, shifted)[0]
            num = numeric(loss_at)
            assert abs(num - g_negs[k, i]) <= 1e-4 * max(1.0, abs(num))


def test_shared_contexts_give_higher_similarity():
    model = train_embeddings(_toy_corpus(), dimension=16, window=2, negatives=5,
                             epochs=10, seed=1)
    assert model.similarity("gato", "cachorro") > model.similarity("gato", "senha")


def test_zero_dimension_rejected():
    with pytest.raises(ValueError):
        train_embeddings([["a", "b"]], dimension=0)


def test_empty_corpus_rejected():
    with pytest.raises(InsufficientCorpus):
        train_embeddings([])
    with pytest.raises(InsufficientCorpus):
        train_embeddings([[], []])


def test_same_seed_identical_vectors():
    docs = _toy_corpus(n_sentences=10)
    m1 = train_embeddings(docs, dimension=8, epochs=2, seed=77)
    m2 = train_embeddings(docs, dimension=8, epochs=2, seed=77)
    np.testing.assert_array_equal(m1.input_vectors, m2.input_vectors)
    np.testing.assert_array_equal(m1.output_vectors, m2.output_vectors)


def test_different_seed_differs():
    docs = _toy_corpus(n_sentences=10)
    m1 = train_embeddings(docs, dimension=8, epochs=2, seed=1)
    m2 = train_embeddings(docs, dimension=8, epochs=2, seed=2)
    assert not np.allclose(m1.input_vectors, m2.input_vectors)


def test_embed_single_token_equals_its_vector():
    model = train_embeddings(_toy_corpus(n_sentences=5), dimension=8, epochs=1, seed=3)
    np.testing.assert_array_equal(embed_document(["gato"], model), model.vector("gato"))


def test_embed_oov_is_zero():
    model = train_embeddings(_toy_corpus(n_sentences=5), dimension=8, epochs=1, seed=3)
    assert not embed_document(["palavrainventada"], model).any()


def test_embed_mean_arithmetic():
    model = train_embeddings(_toy_corpus(n_sentences=5), dimension=8, epochs=1, seed=3)
    t, u = model.vector("gato"), model.vector("casa")
    expected = (2 * t + u) / 3
    np.testing.assert_allclose(embed_document(["gato", "gato", "casa"], model), expected)


def test_transform_pools_rows():
    docs = _toy_corpus(n_sentences=5)
    embedder = SkipGramEmbedder(dimension=8, epochs=1, seed=3).fit(docs)
    pooled = embedder.transform([["gato"], ["palavrainventada"]])
    assert pooled.shape == (2, 8)
    np.testing.assert_array_equal(pooled[0], embedder.model_.vector("gato"))
    assert not pooled[1].any()


def test_model_dict_roundtrip():
    from forumintel.embeddings import EmbeddingModel
    model = train_embeddings(_toy_corpus(n_sentences=5), dimension=4, epochs=1, seed=3)
    back = EmbeddingModel.from_dict(model.to_dict())
    np.testing.assert_array_equal(back.input_vectors, model.input_vectors)
    assert back.vocab == model.vocab
