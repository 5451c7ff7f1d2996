"""The n-gram text representations: TF and TF-IDF, unigram or bigram.

TF-IDF uses tf * (ln(N/df) + 1) followed by L2 row normalization; rows with
no in-vocabulary terms stay zero. Term indices are assigned in lexicographic
order so a vocabulary built from the same documents is always identical.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
import scipy.sparse as sp
from sklearn.base import BaseEstimator, TransformerMixin

from .errors import EmptyVocabulary

TF = "tf"
TFIDF = "tfidf"
EMBEDDING_MEAN = "embedding_mean"

REPRESENTATIONS = ("tf_unigram", "tf_bigram", "tfidf_unigram", "tfidf_bigram", "word2vec")


def ngrams(tokens: Sequence[str], order: int) -> list[str]:
    """Adjacent n-grams; bigrams join the two tokens with an underscore."""
    if order == 1:
        return list(tokens)
    if order == 2:
        return [f"{a}_{b}" for a, b in zip(tokens, tokens[1:])]
    raise ValueError(f"unsupported ngram order {order}")


@dataclass
class Vocabulary:
    ngram_order: int
    terms: dict[str, int]          # term -> dense column index, lexicographic
    doc_freq: dict[str, int]
    corpus_size: int

    def __len__(self) -> int:
        return len(self.terms)

    def idf(self, term: str) -> float:
        return math.log(self.corpus_size / self.doc_freq[term]) + 1.0

    def content_hash(self) -> str:
        payload = json.dumps(
            [self.ngram_order, sorted(self.terms, key=self.terms.get)],
            ensure_ascii=False,
        )
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()[:16]

    def to_dict(self) -> dict:
        return {
            "ngram_order": self.ngram_order,
            "terms": sorted(self.terms, key=self.terms.get),
            "doc_freq": self.doc_freq,
            "corpus_size": self.corpus_size,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Vocabulary":
        return cls(
            ngram_order=d["ngram_order"],
            terms={t: i for i, t in enumerate(d["terms"])},
            doc_freq=dict(d["doc_freq"]),
            corpus_size=d["corpus_size"],
        )


def build_vocabulary(docs: Sequence[Sequence[str]], order: int = 1, min_df: int = 1) -> Vocabulary:
    if not docs:
        raise EmptyVocabulary("no documents")
    doc_freq: dict[str, int] = {}
    for tokens in docs:
        for term in set(ngrams(tokens, order)):
            doc_freq[term] = doc_freq.get(term, 0) + 1
    kept = sorted(t for t, df in doc_freq.items() if df >= min_df)
    if not kept:
        raise EmptyVocabulary(f"no term reaches min_df={min_df}")
    return Vocabulary(
        ngram_order=order,
        terms={t: i for i, t in enumerate(kept)},
        doc_freq={t: doc_freq[t] for t in kept},
        corpus_size=len(docs),
    )


@dataclass
class FeatureMatrix:
    matrix: object                 # csr_matrix or dense ndarray
    scheme: str
    vocabulary: Vocabulary | None = None
    post_ids: list[int] | None = None

    @property
    def rows(self) -> int:
        return self.matrix.shape[0]

    @property
    def cols(self) -> int:
        return self.matrix.shape[1]


class NgramVectorizer(BaseEstimator, TransformerMixin):
    """Bag-of-ngrams vectorizer with raw-count or TF-IDF weighting.

    fit() learns the vocabulary and document frequencies; transform() maps any
    token lists onto that vocabulary, ignoring out-of-vocabulary terms.
    """

    def __init__(self, ngram_order: int = 1, min_df: int = 1, weighting: str = TF):
        self.ngram_order = ngram_order
        self.min_df = min_df
        self.weighting = weighting

    def fit(self, docs, y=None):
        if self.weighting not in (TF, TFIDF):
            raise ValueError(f"unknown weighting {self.weighting!r}")
        self.vocabulary_ = build_vocabulary(docs, self.ngram_order, self.min_df)
        return self

    def transform(self, docs) -> sp.csr_matrix:
        vocab = self.vocabulary_
        idf_by_col = None
        if self.weighting == TFIDF:
            idf_by_col = np.empty(len(vocab))
            for term, col in vocab.terms.items():
                idf_by_col[col] = vocab.idf(term)
        indptr = [0]
        indices: list[int] = []
        data: list[float] = []
        for tokens in docs:
            counts: dict[int, float] = {}
            for term in ngrams(tokens, self.ngram_order):
                col = vocab.terms.get(term)
                if col is not None:
                    counts[col] = counts.get(col, 0.0) + 1.0
            if idf_by_col is not None:
                counts = {c: v * idf_by_col[c] for c, v in counts.items()}
                norm = math.sqrt(sum(v * v for v in counts.values()))
                if norm > 0:
                    counts = {c: v / norm for c, v in counts.items()}
            for col in sorted(counts):
                indices.append(col)
                data.append(counts[col])
            indptr.append(len(indices))
        return sp.csr_matrix(
            (np.asarray(data), np.asarray(indices, dtype=np.int64), np.asarray(indptr)),
            shape=(len(indptr) - 1, len(vocab)),
        )


def tf_vectorize(docs, vocab: Vocabulary) -> FeatureMatrix:
    vec = NgramVectorizer(ngram_order=vocab.ngram_order, weighting=TF)
    vec.vocabulary_ = vocab
    return FeatureMatrix(matrix=vec.transform(docs), scheme=TF, vocabulary=vocab)


def tfidf_vectorize(docs, vocab: Vocabulary) -> FeatureMatrix:
    vec = NgramVectorizer(ngram_order=vocab.ngram_order, weighting=TFIDF)
    vec.vocabulary_ = vocab
    return FeatureMatrix(matrix=vec.transform(docs), scheme=TFIDF, vocabulary=vocab)
