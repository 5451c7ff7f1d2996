"""Shared input validation and serialization plumbing for the learners."""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp

from ..errors import DimensionMismatch, SingleClassInput


def check_training_inputs(X, y):
    """Validate (X, y): matching row counts and exactly two classes (0/1)."""
    y = np.asarray(y)
    if y.ndim != 1:
        raise ValueError("labels must be a 1-d array")
    n = X.shape[0]
    if n != y.shape[0]:
        raise DimensionMismatch(f"{n} feature rows vs {y.shape[0]} labels")
    classes = np.unique(y)
    if classes.size < 2:
        raise SingleClassInput("training data contains a single class")
    if not np.array_equal(classes, [0, 1]):
        raise ValueError(f"labels must be 0/1, got {classes}")
    return y.astype(np.int64)


def check_feature_width(X, expected: int):
    if X.ndim == 1:
        X = X.reshape(1, -1)
    if X.shape[1] != expected:
        raise DimensionMismatch(f"expected {expected} features, got {X.shape[1]}")
    return X


def as_dense(X) -> np.ndarray:
    if sp.issparse(X):
        return np.asarray(X.todense(), dtype=np.float64)
    arr = np.asarray(X, dtype=np.float64)
    return arr.reshape(1, -1) if arr.ndim == 1 else arr


def sigmoid(z):
    z = np.clip(z, -500, 500)
    return 1.0 / (1.0 + np.exp(-z))
