"""Topic modeling by collapsed Gibbs sampling.

Used in two places: mining new stopwords during preprocessing, and comparing
topic structure between the labeled corpus and a freshly classified one as a
label-free sanity check on the classifier.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from sklearn.base import BaseEstimator

from .errors import DegenerateK, EmptyCorpus, MismatchedN
from .labeling import NOT_RELEVANT, RELEVANT


@dataclass
class LdaConfig:
    n_topics: int
    alpha: float | None = None     # None -> 50 / n_topics
    beta: float = 0.01
    iterations: int = 1000
    seed: int = 0

    def __post_init__(self):
        if self.n_topics < 1:
            raise ValueError("n_topics must be >= 1")
        if self.alpha is None:
            self.alpha = 50.0 / self.n_topics
        if self.alpha <= 0 or self.beta <= 0:
            raise ValueError("alpha and beta must be positive")


class GibbsLda(BaseEstimator):
    """Collapsed Gibbs sampler for latent Dirichlet allocation.

    The conditional for token w in document d is proportional to
    (n_wk + beta) / (n_k + V*beta) * (n_dk + alpha), computed with the token's
    own assignment removed. One chain is strictly sequential and seeded.
    """

    def __init__(self, n_topics=10, alpha=None, beta=0.01, iterations=1000, seed=0):
        self.n_topics = n_topics
        self.alpha = alpha
        self.beta = beta
        self.iterations = iterations
        self.seed = seed

    def fit(self, docs, y=None):
        config = LdaConfig(self.n_topics, self.alpha, self.beta, self.iterations, self.seed)
        docs = [list(d) for d in docs]  # empty docs stay: theta keeps row alignment
        total_tokens = sum(len(d) for d in docs)
        if total_tokens == 0:
            raise EmptyCorpus("no tokens to model")
        if config.n_topics > total_tokens:
            raise DegenerateK(f"{config.n_topics} topics for {total_tokens} tokens")

        vocab = sorted({t for d in docs for t in d})
        index = {w: i for i, w in enumerate(vocab)}
        encoded = [[index[t] for t in d] for d in docs]

        K, V, D = config.n_topics, len(vocab), len(docs)
        alpha, beta = config.alpha, config.beta
        v_beta = V * beta

        n_wk = [[0] * K for _ in range(V)]
        n_dk = [[0] * K for _ in range(D)]
        n_k = [0] * K
        rng = random.Random(config.seed)

        assignments = []
        for d, doc in enumerate(encoded):
            z_doc = []
            for w in doc:
                k = rng.randrange(K)
                z_doc.append(k)
                n_wk[w][k] += 1
                n_dk[d][k] += 1
                n_k[k] += 1
            assignments.append(z_doc)

        probs = [0.0] * K
        for _sweep in range(config.iterations):
            for d, doc in enumerate(encoded):
                z_doc = assignments[d]
                counts_d = n_dk[d]
                for pos, w in enumerate(doc):
                    k = z_doc[pos]
                    counts_w = n_wk[w]
                    counts_w[k] -= 1
                    counts_d[k] -= 1
                    n_k[k] -= 1

                    total = 0.0
                    for j in range(K):
                        p = (counts_w[j] + beta) / (n_k[j] + v_beta) * (counts_d[j] + alpha)
                        total += p
                        probs[j] = total
                    target = rng.random() * total
                    k = 0
                    while probs[k] < target:
                        k += 1

                    z_doc[pos] = k
                    counts_w[k] += 1
                    counts_d[k] += 1
                    n_k[k] += 1
            if sum(n_k) != total_tokens:
                raise RuntimeError("topic count conservation violated")

        n_wk_arr = np.array(n_wk, dtype=float)
        n_dk_arr = np.array(n_dk, dtype=float)
        self.phi_ = ((n_wk_arr + beta) / (np.array(n_k, dtype=float) + v_beta)).T
        self.theta_ = (n_dk_arr + alpha) / (n_dk_arr.sum(axis=1, keepdims=True) + K * alpha)
        self.vocabulary_ = vocab
        self.assignments_ = assignments
        self.config_ = config
        return self

    def conditional(self, doc_topic_counts, word_topic_counts, topic_totals):
        """Unnormalized Gibbs conditional from explicit counts (for checking)."""
        config = self.config_
        v_beta = len(self.vocabulary_) * config.beta
        return np.array([
            (word_topic_counts[k] + config.beta) / (topic_totals[k] + v_beta)
            * (doc_topic_counts[k] + config.alpha)
            for k in range(config.n_topics)
        ])

    def to_dict(self) -> dict:
        return {
            "vocabulary": self.vocabulary_,
            "phi": self.phi_.tolist(),
            "theta": self.theta_.tolist(),
            "assignments": self.assignments_,
            "n_topics": self.config_.n_topics,
            "alpha": self.config_.alpha,
            "beta": self.config_.beta,
            "iterations": self.config_.iterations,
            "seed": self.config_.seed,
        }


def fit_lda(docs, config: LdaConfig) -> GibbsLda:
    model = GibbsLda(n_topics=config.n_topics, alpha=config.alpha, beta=config.beta,
                     iterations=config.iterations, seed=config.seed)
    return model.fit(docs)


def top_words(model: GibbsLda, topic: int, n: int) -> list[tuple[str, float]]:
    """The n highest-probability words of one topic; ties break alphabetically."""
    if not 0 <= topic < model.phi_.shape[0]:
        raise IndexError(f"topic {topic} out of range")
    row = model.phi_[topic]
    ranked = sorted(zip(model.vocabulary_, row), key=lambda wp: (-wp[1], wp[0]))
    return [(w, float(p)) for w, p in ranked[:n]]


@dataclass
class TopicSummary:
    name: str
    n_topics: int
    top_n: int
    topics: list[list[tuple[str, float]]] = field(default_factory=list)

    def word_sets(self) -> list[set[str]]:
        return [{w for w, _ in topic} for topic in self.topics]

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "n_topics": self.n_topics,
            "top_n": self.top_n,
            "topics": [[[w, p] for w, p in topic] for topic in self.topics],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "TopicSummary":
        return cls(
            name=d["name"],
            n_topics=d["n_topics"],
            top_n=d["top_n"],
            topics=[[(w, p) for w, p in topic] for topic in d["topics"]],
        )


def summarize(model: GibbsLda, name: str, top_n: int = 10) -> TopicSummary:
    return TopicSummary(
        name=name,
        n_topics=model.config_.n_topics,
        top_n=top_n,
        topics=[top_words(model, k, top_n) for k in range(model.config_.n_topics)],
    )


# The four standard runs: 20 topics over everything, 10 over everything,
# and 10 over each class separately.
SUITE_RUNS = (
    ("all_k20", None, 20),
    ("all_k10", None, 10),
    ("not_relevant_k10", NOT_RELEVANT, 10),
    ("relevant_k10", RELEVANT, 10),
)


@dataclass
class SuiteOutcome:
    name: str
    summary: TopicSummary | None = None
    error: str = ""


def run_topic_suite(docs, labels, iterations=1000, seed=0, top_n=10) -> list[SuiteOutcome]:
    """Topic runs over a labeled or classified corpus.

    ``labels`` are Relevant/NotRelevant strings aligned with ``docs``. A run
    whose class subset is empty reports the error instead of aborting the
    other runs.
    """
    outcomes = []
    for name, label_filter, k in SUITE_RUNS:
        if label_filter is None:
            subset = list(docs)
        else:
            subset = [d for d, lbl in zip(docs, labels) if lbl == label_filter]
        try:
            model = fit_lda(subset, LdaConfig(n_topics=k, iterations=iterations, seed=seed))
            outcomes.append(SuiteOutcome(name=name, summary=summarize(model, name, top_n)))
        except (EmptyCorpus, DegenerateK) as exc:
            outcomes.append(SuiteOutcome(name=name, error=f"{type(exc).__name__}: {exc}"))
    return outcomes


@dataclass
class SimilarityReport:
    matrix: list[list[float]]
    best_pairs: list[tuple[int, int, float]]   # (topic in a, best topic in b, score)
    mean_best: float


def compare_topics(a: TopicSummary, b: TopicSummary) -> SimilarityReport:
    """Jaccard similarity between the top-N word sets of two summaries."""
    if a.top_n != b.top_n:
        raise MismatchedN(f"cannot compare top-{a.top_n} against top-{b.top_n}")
    sets_a, sets_b = a.word_sets(), b.word_sets()
    matrix = []
    for sa in sets_a:
        row = []
        for sb in sets_b:
            union = len(sa | sb)
            row.append(len(sa & sb) / union if union else 0.0)
        matrix.append(row)
    best_pairs = []
    for i, row in enumerate(matrix):
        j = int(np.argmax(row))
        best_pairs.append((i, j, row[j]))
    mean_best = float(np.mean([score for _, _, score in best_pairs])) if best_pairs else 0.0
    return SimilarityReport(matrix=matrix, best_pairs=best_pairs, mean_best=mean_best)


def write_summary_table(summary: TopicSummary, path: str | Path) -> None:
    """Tabular export: topic id, rank, word, probability."""
    lines = ["topic\trank\tword\tprobability"]
    for k, topic in enumerate(summary.topics):
        for rank, (word, prob) in enumerate(topic, start=1):
            lines.append(f"{k}\t{rank}\t{word}\t{prob:.6f}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_suite(outcomes: list[SuiteOutcome], path: str | Path) -> None:
    payload = [
        {"name": o.name, "error": o.error,
         "summary": o.summary.to_dict() if o.summary else None}
        for o in outcomes
    ]
    Path(path).write_text(json.dumps(payload, ensure_ascii=False, sort_keys=True),
                          encoding="utf-8")


def read_suite(path: str | Path) -> list[SuiteOutcome]:
    payload = json.loads(Path(path).read_text(encoding="utf-8"))
    return [
        SuiteOutcome(
            name=entry["name"],
            error=entry.get("error", ""),
            summary=TopicSummary.from_dict(entry["summary"]) if entry.get("summary") else None,
        )
        for entry in payload
    ]
