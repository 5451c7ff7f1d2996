"""Gradient-boosted regression trees on logistic loss with histogram splits.

Features are pre-binned into at most ``n_bins`` quantile bins; split search
scans bin histograms of gradient/hessian sums instead of sorted raw values.
Sparse inputs keep an implicit zero bin, so histogram building touches only
the stored nonzeros and the zero-bin statistics are derived per node.
"""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp
from sklearn.base import BaseEstimator, ClassifierMixin

from .base import check_feature_width, check_training_inputs, sigmoid


def _interior_edges(uniques: np.ndarray, n_cuts: int) -> np.ndarray:
    """Midpoint edges between distinct values, at most n_cuts of them."""
    if len(uniques) <= 1 or n_cuts <= 0:
        return np.empty(0)
    if len(uniques) - 1 <= n_cuts:
        return (uniques[:-1] + uniques[1:]) / 2.0
    pos = np.unique((np.arange(1, n_cuts + 1) * len(uniques)) // (n_cuts + 1))
    pos = pos[(pos >= 1) & (pos <= len(uniques) - 1)]
    return (uniques[pos - 1] + uniques[pos]) / 2.0


class _BinnedData:
    """Feature matrix after quantile binning.

    For sparse input, bin 0 is reserved for the implicit zeros and every
    stored nonzero lands in bins >= 1; for dense input all values are binned
    explicitly. ``edges[f]`` maps back to raw thresholds: a row goes left on
    ``value < edges[f][split_bin]``.
    """

    def __init__(self, n, n_features, edges, sparse, csc=None, binned_nonzeros=None,
                 dense_bins=None):
        self.n = n
        self.n_features = n_features
        self.edges = edges
        self.sparse = sparse
        self.csc = csc
        self.binned_nonzeros = binned_nonzeros
        self.dense_bins = dense_bins

    @classmethod
    def build(cls, X, n_bins: int) -> "_BinnedData":
        if sp.issparse(X):
            csc = X.tocsc()
            if csc.nnz and csc.data.min() < 0:
                raise ValueError("sparse features must be non-negative")
            edges = []
            binned = np.zeros(csc.nnz, dtype=np.uint8)
            for f in range(csc.shape[1]):
                lo, hi = csc.indptr[f], csc.indptr[f + 1]
                vals = csc.data[lo:hi]
                if len(vals) == 0:
                    edges.append(np.empty(0))
                    continue
                uniques = np.unique(vals)
                # one boundary below the smallest nonzero separates the zero bin
                feature_edges = np.concatenate(
                    [[uniques[0] / 2.0], _interior_edges(uniques, n_bins - 2)]
                )
                edges.append(feature_edges)
                binned[lo:hi] = np.searchsorted(feature_edges, vals, side="right")
            return cls(csc.shape[0], csc.shape[1], edges, True, csc=csc,
                       binned_nonzeros=binned)

        dense = np.asarray(X, dtype=np.float64)
        edges = []
        bins = np.zeros(dense.shape, dtype=np.uint8)
        for f in range(dense.shape[1]):
            uniques = np.unique(dense[:, f])
            feature_edges = _interior_edges(uniques, n_bins - 1)
            edges.append(feature_edges)
            bins[:, f] = np.searchsorted(feature_edges, dense[:, f], side="right")
        binned = cls(dense.shape[0], dense.shape[1], edges, False, dense_bins=bins)
        binned.dense_raw = dense
        return binned

    def feature_nonzeros(self, f):
        lo, hi = self.csc.indptr[f], self.csc.indptr[f + 1]
        return self.csc.indices[lo:hi], self.binned_nonzeros[lo:hi]

    def column_bins(self, f) -> np.ndarray:
        """Bin of every row for feature f (dense vector)."""
        if not self.sparse:
            return self.dense_bins[:, f]
        col = np.zeros(self.n, dtype=np.uint8)
        rows, bins = self.feature_nonzeros(f)
        col[rows] = bins
        return col

    def raw_column(self, f) -> np.ndarray:
        """Raw values of feature f for every row."""
        if not self.sparse:
            return self.dense_raw[:, f]
        col = np.zeros(self.n)
        lo, hi = self.csc.indptr[f], self.csc.indptr[f + 1]
        col[self.csc.indices[lo:hi]] = self.csc.data[lo:hi]
        return col


def _split_gain(gl, hl, g, h, l2):
    gr, hr = g - gl, h - hl
    return 0.5 * (gl * gl / (hl + l2) + gr * gr / (hr + l2) - g * g / (h + l2))


class _Tree:
    """Flat node list; node 0 is the root."""

    def __init__(self, nodes):
        self.nodes = nodes

    def predict(self, get_column, n_rows):
        """Vectorized traversal; get_column(f) returns raw values for all rows."""
        out = np.empty(n_rows)
        stack = [(0, np.arange(n_rows))]
        while stack:
            node_id, rows = stack.pop()
            if rows.size == 0:
                continue
            node = self.nodes[node_id]
            if "value" in node:
                out[rows] = node["value"]
                continue
            col = get_column(node["feature"])
            mask = col[rows] < node["threshold"]
            stack.append((node["left"], rows[mask]))
            stack.append((node["right"], rows[~mask]))
        return out

    def to_list(self):
        return self.nodes

    @classmethod
    def from_list(cls, nodes):
        return cls(nodes)


def _grow_tree(data: _BinnedData, g, h, node_slot, learning_rate, max_depth,
               n_bins, min_leaf, l2):
    """Level-wise growth over the pre-binned matrix.

    ``node_slot`` maps each row to its active node slot (dense per level) or
    -1 once the row reaches a finalized leaf.
    """
    nodes = [{}]  # root placeholder
    node_slot[:] = 0
    active = [0]  # active slots at the current level -> index into node list

    def leaf_value(total_g, total_h):
        return float(-total_g / (total_h + l2) * learning_rate)

    for depth in range(max_depth + 1):
        n_active = len(active)
        if n_active == 0:
            break
        in_play = node_slot >= 0
        slot_g = np.bincount(node_slot[in_play], weights=g[in_play], minlength=n_active)
        slot_h = np.bincount(node_slot[in_play], weights=h[in_play], minlength=n_active)
        slot_c = np.bincount(node_slot[in_play], minlength=n_active)

        best_gain = np.zeros(n_active)
        best_feature = np.full(n_active, -1)
        best_bin = np.zeros(n_active, dtype=np.int64)

        if depth < max_depth:
            for f in range(data.n_features):
                if data.sparse:
                    rows_f, bins_f = data.feature_nonzeros(f)
                    slots = node_slot[rows_f]
                    valid = slots >= 0
                    key = slots[valid] * n_bins + bins_f[valid]
                    rows_valid = rows_f[valid]
                    # bincount yields int64 on empty weighted input; force float
                    hist_g = np.bincount(key, weights=g[rows_valid],
                                         minlength=n_active * n_bins).astype(np.float64)
                    hist_h = np.bincount(key, weights=h[rows_valid],
                                         minlength=n_active * n_bins).astype(np.float64)
                    hist_c = np.bincount(key, minlength=n_active * n_bins)
                    hist_g = hist_g.reshape(n_active, n_bins)
                    hist_h = hist_h.reshape(n_active, n_bins)
                    hist_c = hist_c.reshape(n_active, n_bins)
                    # implicit zeros complete the first bin
                    hist_g[:, 0] += slot_g - hist_g.sum(axis=1)
                    hist_h[:, 0] += slot_h - hist_h.sum(axis=1)
                    hist_c[:, 0] += slot_c - hist_c.sum(axis=1)
                else:
                    valid = node_slot >= 0
                    key = node_slot[valid] * n_bins + data.dense_bins[valid, f]
                    hist_g = np.bincount(key, weights=g[valid],
                                         minlength=n_active * n_bins
                                         ).astype(np.float64).reshape(n_active, n_bins)
                    hist_h = np.bincount(key, weights=h[valid],
                                         minlength=n_active * n_bins
                                         ).astype(np.float64).reshape(n_active, n_bins)
                    hist_c = np.bincount(key, minlength=n_active * n_bins).reshape(n_active, n_bins)

                gl = np.cumsum(hist_g, axis=1)[:, :-1]
                hl = np.cumsum(hist_h, axis=1)[:, :-1]
                cl = np.cumsum(hist_c, axis=1)[:, :-1]
                gains = _split_gain(gl, hl, slot_g[:, None], slot_h[:, None], l2)
                ok = (cl >= min_leaf) & ((slot_c[:, None] - cl) >= min_leaf)
                gains = np.where(ok, gains, -np.inf)
                cand_bin = np.argmax(gains, axis=1)
                cand_gain = gains[np.arange(n_active), cand_bin]
                better = cand_gain > best_gain + 1e-12
                best_gain[better] = cand_gain[better]
                best_feature[better] = f
                best_bin[better] = cand_bin[better]

        # materialize: split where a positive-gain split exists, else leaf
        new_active = []
        slot_remap = np.full(n_active, -1, dtype=np.int64)
        split_slots = []
        for s in range(n_active):
            node_id = active[s]
            if best_feature[s] < 0 or depth >= max_depth:
                nodes[node_id].clear()
                nodes[node_id]["value"] = leaf_value(slot_g[s], slot_h[s])
                continue
            f, b = int(best_feature[s]), int(best_bin[s])
            left_id, right_id = len(nodes), len(nodes) + 1
            nodes[node_id].clear()
            nodes[node_id].update({
                "feature": f,
                "threshold": float(data.edges[f][b]),
                "left": left_id,
                "right": right_id,
            })
            nodes.append({})
            nodes.append({})
            slot_remap[s] = len(new_active)
            new_active.extend([left_id, right_id])
            split_slots.append((s, f, b))

        if not split_slots:
            break

        # reassign rows to child slots (left = 2k, right = 2k + 1)
        old_slot = node_slot.copy()
        node_slot[:] = -1
        for s, f, b in split_slots:
            rows = np.where(old_slot == s)[0]
            col = data.column_bins(f)
            left_mask = col[rows] <= b
            base = slot_remap[s]
            node_slot[rows[left_mask]] = base
            node_slot[rows[~left_mask]] = base + 1
        active = new_active

    return _Tree(nodes)


class HistogramGbdt(BaseEstimator, ClassifierMixin):
    """One boosting implementation standing in for the gradient-boosting
    family: additive regression trees on logistic loss, Newton leaf values."""

    def __init__(self, n_rounds=200, learning_rate=0.1, max_depth=6, n_bins=32,
                 min_samples_leaf=5, l2=1.0, seed=0):
        self.n_rounds = n_rounds
        self.learning_rate = learning_rate
        self.max_depth = max_depth
        self.n_bins = n_bins
        self.min_samples_leaf = min_samples_leaf
        self.l2 = l2
        self.seed = seed

    def fit(self, X, y):
        if not 2 <= self.n_bins <= 256:  # bins are stored as uint8
            raise ValueError(f"n_bins must be in [2, 256], got {self.n_bins}")
        if self.n_rounds < 0 or self.max_depth < 1 or self.min_samples_leaf < 1:
            raise ValueError("n_rounds/max_depth/min_samples_leaf out of range")
        y = check_training_inputs(X, y)
        data = _BinnedData.build(X, self.n_bins)
        n = data.n
        prior = float(y.mean())
        self.base_score_ = float(np.log(prior / (1.0 - prior)))
        scores = np.full(n, self.base_score_)
        self.trees_ = []
        self.train_loss_ = [self._logloss(scores, y)]
        node_slot = np.zeros(n, dtype=np.int64)
        for _ in range(self.n_rounds):
            p = sigmoid(scores)
            g = p - y
            h = p * (1.0 - p)
            tree = _grow_tree(data, g, h, node_slot, self.learning_rate,
                              self.max_depth, self.n_bins, self.min_samples_leaf,
                              self.l2)
            scores += tree.predict(data.raw_column, n)
            self.trees_.append(tree)
            self.train_loss_.append(self._logloss(scores, y))
        self.n_features_in_ = data.n_features
        return self

    @staticmethod
    def _logloss(scores, y):
        p = sigmoid(scores)
        eps = 1e-12
        return float(-np.mean(y * np.log(p + eps) + (1 - y) * np.log(1 - p + eps)))

    def predict_scores(self, X):
        X = check_feature_width(X, self.n_features_in_)
        if sp.issparse(X):
            csc = X.tocsc()

            def get_column(f):
                col = np.zeros(csc.shape[0])
                lo, hi = csc.indptr[f], csc.indptr[f + 1]
                col[csc.indices[lo:hi]] = csc.data[lo:hi]
                return col
        else:
            dense = np.asarray(X, dtype=np.float64)

            def get_column(f):
                return dense[:, f]

        scores = np.full(X.shape[0], self.base_score_)
        for tree in self.trees_:
            scores += tree.predict(get_column, X.shape[0])
        return scores

    def predict_proba(self, X):
        return sigmoid(self.predict_scores(X))

    def predict(self, X):
        return (self.predict_proba(X) >= 0.5).astype(int)

    def to_dict(self) -> dict:
        return {
            "base_score": self.base_score_,
            "trees": [t.to_list() for t in self.trees_],
            "n_features": self.n_features_in_,
        }

    def load_dict(self, d: dict):
        self.base_score_ = d["base_score"]
        self.trees_ = [_Tree.from_list(t) for t in d["trees"]]
        self.n_features_in_ = d["n_features"]
        return self
