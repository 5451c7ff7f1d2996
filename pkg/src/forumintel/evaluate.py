"""Metrics, confusion matrices, relevance-share and word-frequency reports.

Relevant is the positive class everywhere. Degenerate denominators yield 0
with a warning flag instead of raising, so a grid sweep over weak models
never aborts.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .classify import HIGH, LOW, MEDIUM, Prediction
from .errors import EmptyInput, LengthMismatch
from .labeling import NOT_RELEVANT, RELEVANT


@dataclass
class ConfusionMatrix:
    tp: int = 0
    fp: int = 0
    fn: int = 0
    tn: int = 0

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.fn + self.tn

    def to_dict(self) -> dict:
        return {"tp": self.tp, "fp": self.fp, "fn": self.fn, "tn": self.tn}


def confusion(predictions, truth) -> ConfusionMatrix:
    """Count agreement between aligned binary label sequences."""
    predictions = list(predictions)
    truth = list(truth)
    if len(predictions) != len(truth):
        raise LengthMismatch(f"{len(predictions)} predictions vs {len(truth)} truths")
    cm = ConfusionMatrix()
    for pred, true in zip(predictions, truth):
        if true == RELEVANT:
            if pred == RELEVANT:
                cm.tp += 1
            else:
                cm.fn += 1
        else:
            if pred == RELEVANT:
                cm.fp += 1
            else:
                cm.tn += 1
    return cm


@dataclass
class MetricsReport:
    precision: float
    recall: float
    f1: float
    accuracy: float
    per_class: dict = field(default_factory=dict)
    degenerate: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
            "accuracy": self.accuracy,
            "per_class": self.per_class,
            "degenerate": self.degenerate,
        }


def _prf(tp, fp, fn, degenerate, tag):
    if tp + fp == 0:
        degenerate.append(f"{tag}:precision")
        precision = 0.0
    else:
        precision = tp / (tp + fp)
    if tp + fn == 0:
        degenerate.append(f"{tag}:recall")
        recall = 0.0
    else:
        recall = tp / (tp + fn)
    f1 = 2 * precision * recall / (precision + recall) if precision + recall > 0 else 0.0
    return precision, recall, f1


def evaluate(cm: ConfusionMatrix) -> MetricsReport:
    if cm.total == 0:
        raise EmptyInput("confusion matrix has zero samples")
    degenerate: list[str] = []
    precision, recall, f1 = _prf(cm.tp, cm.fp, cm.fn, degenerate, RELEVANT)
    # NotRelevant treated as positive for the per-class breakdown
    neg_p, neg_r, neg_f1 = _prf(cm.tn, cm.fn, cm.fp, degenerate, NOT_RELEVANT)
    accuracy = (cm.tp + cm.tn) / cm.total
    return MetricsReport(
        precision=precision,
        recall=recall,
        f1=f1,
        accuracy=accuracy,
        per_class={
            RELEVANT: {"precision": precision, "recall": recall, "f1": f1},
            NOT_RELEVANT: {"precision": neg_p, "recall": neg_r, "f1": neg_f1},
        },
        degenerate=degenerate,
    )


@dataclass
class ShareReport:
    total: int
    binary_counts: dict
    binary_percent: dict       # one decimal place
    band_counts: dict
    band_percent: dict

    def to_dict(self) -> dict:
        return {
            "total": self.total,
            "binary_counts": self.binary_counts,
            "binary_percent": self.binary_percent,
            "band_counts": self.band_counts,
            "band_percent": self.band_percent,
        }


def relevance_shares(predictions: list[Prediction]) -> ShareReport:
    if not predictions:
        raise EmptyInput("no predictions to summarize")
    total = len(predictions)
    binary_counts = {RELEVANT: 0, NOT_RELEVANT: 0}
    band_counts = {LOW: 0, MEDIUM: 0, HIGH: 0}
    for pred in predictions:
        binary_counts[pred.binary_label] += 1
        band_counts[pred.band] += 1
    pct = lambda c: round(100.0 * c / total, 1)
    return ShareReport(
        total=total,
        binary_counts=binary_counts,
        binary_percent={k: pct(v) for k, v in binary_counts.items()},
        band_counts=band_counts,
        band_percent={k: pct(v) for k, v in band_counts.items()},
    )


@dataclass
class FrequencyReport:
    per_class: dict[str, list[tuple[str, int]]]

    def to_dict(self) -> dict:
        return {cls: [[w, c] for w, c in ranking] for cls, ranking in self.per_class.items()}


def top_frequent_words(docs_by_class: dict[str, list[list[str]]], n: int = 100) -> FrequencyReport:
    """Per-class absolute word frequencies: descending count, ties alphabetical."""
    per_class = {}
    for cls, docs in docs_by_class.items():
        counts: dict[str, int] = {}
        for tokens in docs:
            for tok in tokens:
                counts[tok] = counts.get(tok, 0) + 1
        ranked = sorted(counts.items(), key=lambda wc: (-wc[1], wc[0]))
        per_class[cls] = ranked[:n]
    return FrequencyReport(per_class=per_class)


def write_metrics(report: MetricsReport, cm: ConfusionMatrix, path: str | Path,
                  meta: dict | None = None) -> None:
    payload = {"metrics": report.to_dict(), "confusion": cm.to_dict(), **(meta or {})}
    Path(path).write_text(json.dumps(payload, sort_keys=True), encoding="utf-8")


def write_frequency_table(report: FrequencyReport, path: str | Path) -> None:
    lines = ["class\trank\tword\tcount"]
    for cls in sorted(report.per_class):
        for rank, (word, count) in enumerate(report.per_class[cls], start=1):
            lines.append(f"{cls}\t{rank}\t{word}\t{count}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
