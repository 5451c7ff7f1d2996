"""Bagged decision-tree ensemble with per-node feature subsampling.

Each tree trains on a bootstrap sample drawn from a tree-indexed seed, so the
forest is deterministic regardless of build order. The ensemble probability
is the fraction of trees voting for the positive class.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin

from .base import as_dense, check_feature_width, check_training_inputs


def _gini_best_split(values, labels, min_leaf):
    """Best threshold for one feature by Gini impurity decrease.

    Returns (gain, threshold) or None. Thresholds are midpoints between
    distinct consecutive sorted values.
    """
    order = np.argsort(values, kind="stable")
    v = values[order]
    y = labels[order]
    n = len(y)
    total_pos = y.sum()

    left_pos = np.cumsum(y)[:-1]
    left_n = np.arange(1, n)
    right_pos = total_pos - left_pos
    right_n = n - left_n

    valid = (v[1:] != v[:-1]) & (left_n >= min_leaf) & (right_n >= min_leaf)
    if not valid.any():
        return None

    def gini(pos, count):
        p = pos / count
        return 1.0 - p * p - (1.0 - p) ** 2

    parent = gini(total_pos, n)
    children = (left_n * gini(left_pos, left_n) + right_n * gini(right_pos, right_n)) / n
    gains = np.where(valid, parent - children, -np.inf)
    best = int(np.argmax(gains))
    if gains[best] <= 1e-12:
        return None
    threshold = (v[best] + v[best + 1]) / 2.0
    return float(gains[best]), threshold


class _TreeNode:
    __slots__ = ("feature", "threshold", "left", "right", "vote")

    def __init__(self, feature=-1, threshold=0.0, left=None, right=None, vote=0):
        self.feature = feature
        self.threshold = threshold
        self.left = left
        self.right = right
        self.vote = vote

    def is_leaf(self):
        return self.feature < 0

    def to_dict(self):
        if self.is_leaf():
            return {"vote": self.vote}
        return {
            "feature": self.feature,
            "threshold": self.threshold,
            "left": self.left.to_dict(),
            "right": self.right.to_dict(),
        }

    @classmethod
    def from_dict(cls, d):
        if "vote" in d:
            return cls(vote=d["vote"])
        return cls(
            feature=d["feature"], threshold=d["threshold"],
            left=cls.from_dict(d["left"]), right=cls.from_dict(d["right"]),
        )


def _grow_tree(X, y, rows, depth, max_depth, min_leaf, n_candidates, rng):
    labels = y[rows]
    pos = labels.sum()
    if depth >= max_depth or pos == 0 or pos == len(rows) or len(rows) < 2 * min_leaf:
        return _TreeNode(vote=int(pos * 2 >= len(rows)))

    features = rng.choice(X.shape[1], size=n_candidates, replace=False)
    features.sort()
    best = None
    for f in features:
        split = _gini_best_split(X[rows, f], labels, min_leaf)
        if split is not None and (best is None or split[0] > best[0]):
            best = (split[0], int(f), split[1])
    if best is None:
        return _TreeNode(vote=int(pos * 2 >= len(rows)))

    _, feature, threshold = best
    mask = X[rows, feature] < threshold
    left = _grow_tree(X, y, rows[mask], depth + 1, max_depth, min_leaf, n_candidates, rng)
    right = _grow_tree(X, y, rows[~mask], depth + 1, max_depth, min_leaf, n_candidates, rng)
    return _TreeNode(feature=feature, threshold=threshold, left=left, right=right)


def _tree_votes(node, X):
    votes = np.empty(X.shape[0], dtype=np.int64)
    stack = [(node, np.arange(X.shape[0]))]
    while stack:
        current, rows = stack.pop()
        if rows.size == 0:
            continue
        if current.is_leaf():
            votes[rows] = current.vote
            continue
        mask = X[rows, current.feature] < current.threshold
        stack.append((current.left, rows[mask]))
        stack.append((current.right, rows[~mask]))
    return votes


class BaggedForest(BaseEstimator, ClassifierMixin):
    def __init__(self, n_trees=200, max_depth=12, min_leaf=1, max_features="sqrt", seed=0):
        self.n_trees = n_trees
        self.max_depth = max_depth
        self.min_leaf = min_leaf
        self.max_features = max_features
        self.seed = seed

    def _n_candidates(self, n_features):
        if self.max_features == "sqrt":
            return max(1, int(np.sqrt(n_features)))
        return min(int(self.max_features), n_features)

    def fit(self, X, y):
        y = check_training_inputs(X, y)
        dense = as_dense(X)
        n, n_features = dense.shape
        n_candidates = self._n_candidates(n_features)
        self.trees_ = []
        for t in range(self.n_trees):
            rng = np.random.default_rng([self.seed, t])
            rows = rng.integers(0, n, size=n)  # bootstrap, duplicates weight samples
            tree = _grow_tree(dense, y, rows, 0, self.max_depth,
                              self.min_leaf, n_candidates, rng)
            self.trees_.append(tree)
        self.n_features_in_ = n_features
        return self

    def predict_proba(self, X):
        dense = as_dense(check_feature_width(as_dense(X), self.n_features_in_))
        votes = np.zeros(dense.shape[0])
        for tree in self.trees_:
            votes += _tree_votes(tree, dense)
        return votes / len(self.trees_)

    def predict(self, X):
        return (self.predict_proba(X) >= 0.5).astype(int)

    def to_dict(self) -> dict:
        return {
            "trees": [t.to_dict() for t in self.trees_],
            "n_features": self.n_features_in_,
        }

    def load_dict(self, d: dict):
        self.trees_ = [_TreeNode.from_dict(t) for t in d["trees"]]
        self.n_features_in_ = d["n_features"]
        return self
