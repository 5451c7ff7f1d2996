"""Skip-gram word embeddings with negative sampling, trained from scratch.

One stochastic-gradient pass per (center, context) pair: the positive pair is
pushed together, `negatives` noise words sampled from the unigram^0.75
distribution are pushed apart. Training is single-threaded and fully seeded,
so a given corpus and seed always produce the same vectors.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from .errors import InsufficientCorpus


def _sigmoid(x):
    return 1.0 / (1.0 + np.exp(-x))


def pair_loss_and_grads(v_center, u_context, u_negatives):
    """Negative-sampling loss for one training pair, with analytic gradients.

    loss = -log sigma(u_o . v_c) - sum_k log sigma(-u_k . v_c)

    Returns (loss, grad_v_center, grad_u_context, grad_u_negatives); the same
    expressions drive the training updates, so a finite-difference check on
    this function validates the optimizer's gradients.
    """
    pos_score = _sigmoid(u_context @ v_center)
    neg_scores = _sigmoid(u_negatives @ v_center)

    loss = -np.log(pos_score + 1e-12) - np.sum(np.log(1.0 - neg_scores + 1e-12))

    grad_v = (pos_score - 1.0) * u_context + neg_scores @ u_negatives
    grad_context = (pos_score - 1.0) * v_center
    grad_negatives = np.outer(neg_scores, v_center)
    return loss, grad_v, grad_context, grad_negatives


@dataclass
class EmbeddingModel:
    dimension: int
    vocab: list[str]
    input_vectors: np.ndarray      # V x d, the vectors used downstream
    output_vectors: np.ndarray     # V x d context-side vectors
    window: int
    negatives: int
    index: dict[str, int] = field(default_factory=dict)

    def __post_init__(self):
        if not self.index:
            self.index = {w: i for i, w in enumerate(self.vocab)}

    def vector(self, word: str) -> np.ndarray:
        return self.input_vectors[self.index[word]]

    def similarity(self, a: str, b: str) -> float:
        va, vb = self.vector(a), self.vector(b)
        denom = np.linalg.norm(va) * np.linalg.norm(vb)
        return float(va @ vb / denom) if denom > 0 else 0.0

    def to_dict(self) -> dict:
        return {
            "dimension": self.dimension,
            "vocab": self.vocab,
            "input_vectors": self.input_vectors.tolist(),
            "output_vectors": self.output_vectors.tolist(),
            "window": self.window,
            "negatives": self.negatives,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "EmbeddingModel":
        return cls(
            dimension=d["dimension"],
            vocab=list(d["vocab"]),
            input_vectors=np.asarray(d["input_vectors"]),
            output_vectors=np.asarray(d["output_vectors"]),
            window=d["window"],
            negatives=d["negatives"],
        )


class SkipGramEmbedder(BaseEstimator, TransformerMixin):
    """Corpus-trained skip-gram model; transform() mean-pools per document."""

    def __init__(self, dimension=100, window=5, negatives=5, epochs=5,
                 learning_rate=0.025, min_count=1, seed=0):
        self.dimension = dimension
        self.window = window
        self.negatives = negatives
        self.epochs = epochs
        self.learning_rate = learning_rate
        self.min_count = min_count
        self.seed = seed

    def fit(self, docs, y=None):
        if self.dimension < 1:
            raise ValueError("embedding dimension must be >= 1")
        if self.window < 1 or self.negatives < 0 or self.epochs < 1:
            raise ValueError("window/negatives/epochs out of range")

        counts: dict[str, int] = {}
        for tokens in docs:
            for tok in tokens:
                counts[tok] = counts.get(tok, 0) + 1
        vocab = sorted(w for w, c in counts.items() if c >= self.min_count)
        if not vocab:
            raise InsufficientCorpus("no tokens to train embeddings on")
        index = {w: i for i, w in enumerate(vocab)}
        encoded = [[index[t] for t in tokens if t in index] for tokens in docs]
        encoded = [doc for doc in encoded if len(doc) >= 2]
        if not encoded:
            raise InsufficientCorpus("every document is shorter than two in-vocab tokens")

        rng = np.random.default_rng(self.seed)
        dim = self.dimension
        vec_in = (rng.random((len(vocab), dim)) - 0.5) / dim
        vec_out = np.zeros((len(vocab), dim))

        # noise distribution: unigram counts raised to 3/4
        freq = np.array([counts[w] for w in vocab], dtype=float) ** 0.75
        noise_cdf = np.cumsum(freq / freq.sum())

        total_positions = self.epochs * sum(len(doc) for doc in encoded)
        processed = 0
        for _epoch in range(self.epochs):
            for doc in encoded:
                n = len(doc)
                for pos in range(n):
                    lr = self.learning_rate * max(1e-4, 1.0 - processed / total_positions)
                    processed += 1
                    center = doc[pos]
                    reach = int(rng.integers(1, self.window + 1))
                    for ctx_pos in range(max(0, pos - reach), min(n, pos + reach + 1)):
                        if ctx_pos == pos:
                            continue
                        context = doc[ctx_pos]
                        negs = np.searchsorted(noise_cdf, rng.random(self.negatives))
                        negs = negs[negs != context]
                        _, g_v, g_ctx, g_negs = pair_loss_and_grads(
                            vec_in[center], vec_out[context], vec_out[negs]
                        )
                        vec_in[center] -= lr * g_v
                        vec_out[context] -= lr * g_ctx
                        # accumulate: a small vocab can repeat a negative index
                        np.subtract.at(vec_out, negs, lr * g_negs)

        self.model_ = EmbeddingModel(
            dimension=dim, vocab=vocab, input_vectors=vec_in,
            output_vectors=vec_out, window=self.window, negatives=self.negatives,
        )
        return self

    def transform(self, docs) -> np.ndarray:
        return np.vstack([embed_document(tokens, self.model_) for tokens in docs])


def train_embeddings(docs, dimension=100, window=5, negatives=5, epochs=5,
                     learning_rate=0.025, min_count=1, seed=0) -> EmbeddingModel:
    embedder = SkipGramEmbedder(
        dimension=dimension, window=window, negatives=negatives, epochs=epochs,
        learning_rate=learning_rate, min_count=min_count, seed=seed,
    )
    return embedder.fit(docs).model_


def embed_document(tokens, model: EmbeddingModel) -> np.ndarray:
    """Arithmetic mean of the input vectors of in-vocabulary tokens."""
    rows = [model.index[t] for t in tokens if t in model.index]
    if not rows:
        return np.zeros(model.dimension)
    return model.input_vectors[rows].mean(axis=0)
