"""Train/test splitting, the probability thresholds, and model selection.

Binary rule: probability >= 0.5 is Relevant. Bands: below 0.3 is Low, the
closed interval [0.3, 0.7] is Medium, above 0.7 is High. Both boundaries are
inclusive exactly as stated.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import DegenerateSplit, DimensionMismatch, VocabularyMismatch
from .labeling import NOT_RELEVANT, RELEVANT, LabeledDataset
from .learners import LEARNER_CLASSES, LEARNER_KINDS

LOW = "Low"
MEDIUM = "Medium"
HIGH = "High"

MODEL_FORMAT_VERSION = 1


@dataclass
class SplitConfig:
    train_fraction: float = 0.8
    seed: int = 0
    stratified: bool = True

    def __post_init__(self):
        if not 0.0 < self.train_fraction < 1.0:
            raise ValueError(f"train_fraction must be in (0, 1), got {self.train_fraction}")


def split_indices(labels, config: SplitConfig) -> tuple[np.ndarray, np.ndarray]:
    """Deterministic index split; stratified keeps per-class test counts
    within one sample of (1 - train_fraction) * class_count."""
    labels = np.asarray(labels)
    n = len(labels)
    rng = np.random.default_rng(config.seed)
    test_parts = []
    if config.stratified:
        for value in np.unique(labels):
            rows = np.flatnonzero(labels == value)
            if len(rows) == 0:
                continue
            n_test = int(round((1.0 - config.train_fraction) * len(rows)))
            shuffled = rng.permutation(rows)
            test_parts.append(shuffled[:n_test])
    else:
        n_test = n - int(np.floor(config.train_fraction * n))
        test_parts.append(rng.permutation(n)[:n_test])
    test_idx = np.sort(np.concatenate(test_parts)) if test_parts else np.empty(0, dtype=int)
    mask = np.zeros(n, dtype=bool)
    mask[test_idx] = True
    train_idx = np.flatnonzero(~mask)
    if len(train_idx) == 0 or len(test_idx) == 0:
        raise DegenerateSplit(f"split of {n} samples leaves one side empty")
    return train_idx, test_idx


def split(dataset: LabeledDataset, config: SplitConfig) -> tuple[LabeledDataset, LabeledDataset]:
    binary = [1 if lbl == RELEVANT else 0 for lbl in dataset.labels()]
    train_idx, test_idx = split_indices(binary, config)
    train = LabeledDataset("Custom", [dataset.records[i] for i in train_idx])
    test = LabeledDataset("Custom", [dataset.records[i] for i in test_idx])
    return train, test


# -- thresholds ---------------------------------------------------------------

def classify_binary(p: float) -> str:
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability {p} outside [0, 1]")
    return RELEVANT if p >= 0.5 else NOT_RELEVANT


def classify_band(p: float) -> str:
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability {p} outside [0, 1]")
    if p < 0.3:
        return LOW
    if p <= 0.7:
        return MEDIUM
    return HIGH


@dataclass
class Prediction:
    post_id: int
    probability: float

    @property
    def binary_label(self) -> str:
        return classify_binary(self.probability)

    @property
    def band(self) -> str:
        return classify_band(self.probability)

    def to_dict(self) -> dict:
        return {
            "id": self.post_id,
            "probability": self.probability,
            "binary": self.binary_label,
            "band": self.band,
        }


# -- training -----------------------------------------------------------------

@dataclass
class TrainedModel:
    kind: str
    estimator: object
    feature_count: int
    hyperparameters: dict = field(default_factory=dict)
    vocab_hash: str = ""
    seed: int = 0
    representation: str = ""
    vocabulary: object = None      # Vocabulary for the n-gram schemes
    embedding: object = None       # EmbeddingModel for word2vec


def train(features, labels, kind: str, hyperparameters: dict | None = None,
          seed: int = 0, vocab_hash: str = "", representation: str = "") -> TrainedModel:
    """Fit one learner on a feature matrix.

    ``features`` may be a FeatureMatrix or a raw (sparse/dense) matrix;
    ``labels`` may be Relevant/NotRelevant strings or a 0/1 array.
    """
    matrix = getattr(features, "matrix", features)
    if vocab_hash == "" and getattr(features, "vocabulary", None) is not None:
        vocab_hash = features.vocabulary.content_hash()
    y = np.asarray([
        1 if lbl == RELEVANT else 0 if lbl == NOT_RELEVANT else int(lbl)
        for lbl in labels
    ])
    if kind not in LEARNER_KINDS:
        raise ValueError(f"unknown learner kind {kind!r}; expected one of {LEARNER_KINDS}")
    params = dict(hyperparameters or {})
    estimator = LEARNER_CLASSES[kind](seed=seed, **params)
    estimator.fit(matrix, y)
    return TrainedModel(
        kind=kind,
        estimator=estimator,
        feature_count=matrix.shape[1],
        hyperparameters=params,
        vocab_hash=vocab_hash,
        seed=seed,
        representation=representation,
    )


def predict_proba(model: TrainedModel, rows) -> np.ndarray:
    matrix = getattr(rows, "matrix", rows)
    if matrix.ndim == 1:
        matrix = matrix.reshape(1, -1)
    if matrix.shape[1] != model.feature_count:
        raise DimensionMismatch(
            f"model expects {model.feature_count} features, got {matrix.shape[1]}"
        )
    return np.asarray(model.estimator.predict_proba(matrix))


# -- model artifacts ----------------------------------------------------------

def save_model(model: TrainedModel, path: str | Path, vocabulary=None,
               embedding=None) -> None:
    """Write a self-describing artifact; the vocabulary (or embedding model)
    rides along so the model can score fresh corpora on its own."""
    vocabulary = vocabulary if vocabulary is not None else model.vocabulary
    embedding = embedding if embedding is not None else model.embedding
    artifact = {
        "format_version": MODEL_FORMAT_VERSION,
        "kind": model.kind,
        "hyperparameters": model.hyperparameters,
        "feature_count": model.feature_count,
        "vocab_hash": model.vocab_hash,
        "seed": model.seed,
        "representation": model.representation,
        "parameters": model.estimator.to_dict(),
    }
    if vocabulary is not None:
        artifact["vocabulary"] = vocabulary.to_dict()
    if embedding is not None:
        artifact["embedding"] = embedding.to_dict()
    Path(path).write_text(json.dumps(artifact, sort_keys=True), encoding="utf-8")


def load_model(path: str | Path, expect_vocab_hash: str | None = None) -> TrainedModel:
    from .embeddings import EmbeddingModel
    from .vectorize import Vocabulary

    artifact = json.loads(Path(path).read_text(encoding="utf-8"))
    if artifact.get("format_version") != MODEL_FORMAT_VERSION:
        raise ValueError(f"unsupported model format in {path}")
    if expect_vocab_hash is not None and artifact["vocab_hash"] != expect_vocab_hash:
        raise VocabularyMismatch(
            f"model was trained against vocabulary {artifact['vocab_hash']}, "
            f"current vocabulary is {expect_vocab_hash}"
        )
    kind = artifact["kind"]
    estimator = LEARNER_CLASSES[kind](**artifact["hyperparameters"])
    estimator.load_dict(artifact["parameters"])
    return TrainedModel(
        kind=kind,
        estimator=estimator,
        feature_count=artifact["feature_count"],
        hyperparameters=artifact["hyperparameters"],
        vocab_hash=artifact["vocab_hash"],
        seed=artifact["seed"],
        representation=artifact.get("representation", ""),
        vocabulary=Vocabulary.from_dict(artifact["vocabulary"])
        if "vocabulary" in artifact else None,
        embedding=EmbeddingModel.from_dict(artifact["embedding"])
        if "embedding" in artifact else None,
    )


# -- model selection ------------------------------------------------------------

@dataclass
class GridResult:
    representation: str
    learner: str
    precision: float
    recall: float
    f1: float
    accuracy: float

    def to_dict(self) -> dict:
        return {
            "representation": self.representation,
            "learner": self.learner,
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
            "accuracy": self.accuracy,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "GridResult":
        return cls(d["representation"], d["learner"], d["precision"],
                   d["recall"], d["f1"], d["accuracy"])


def select_models(grid: list[GridResult], floor: float = 0.6) -> list[GridResult]:
    """Keep combinations whose precision, recall AND f1 exceed the floor."""
    return [
        row for row in grid
        if row.precision > floor and row.recall > floor and row.f1 > floor
    ]
