"""Linear learners: a Pegasos-style SVM and full-batch logistic regression."""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp
from sklearn.base import BaseEstimator, ClassifierMixin

from .base import as_dense, check_feature_width, check_training_inputs, sigmoid


def logistic_loss_and_grad(params, X, y, l2):
    """L2-regularized mean cross-entropy; bias is the last parameter and is
    not regularized. Returns (loss, gradient over params)."""
    w, b = params[:-1], params[-1]
    z = X @ w + b
    p = sigmoid(z)
    eps = 1e-12
    loss = -np.mean(y * np.log(p + eps) + (1 - y) * np.log(1 - p + eps))
    loss += 0.5 * l2 * float(w @ w)
    residual = (p - y) / len(y)
    grad_w = X.T @ residual + l2 * w
    grad_b = np.sum(residual)
    return loss, np.concatenate([np.asarray(grad_w).ravel(), [grad_b]])


class BatchLogisticRegression(BaseEstimator, ClassifierMixin):
    """Gradient descent with backtracking halving, so the training loss is
    non-increasing across epochs by construction."""

    def __init__(self, l2=1e-4, max_epochs=300, step_size=1.0, tol=1e-8, seed=0):
        self.l2 = l2
        self.max_epochs = max_epochs
        self.step_size = step_size
        self.tol = tol
        self.seed = seed

    def fit(self, X, y):
        y = check_training_inputs(X, y)
        if sp.issparse(X):
            X = X.tocsr()
        n_features = X.shape[1]
        params = np.zeros(n_features + 1)
        loss, grad = logistic_loss_and_grad(params, X, y, self.l2)
        history = [loss]
        step = self.step_size
        for _ in range(self.max_epochs):
            improved = False
            while step > 1e-12:
                candidate = params - step * grad
                new_loss, new_grad = logistic_loss_and_grad(candidate, X, y, self.l2)
                if new_loss <= loss:
                    params, loss, grad = candidate, new_loss, new_grad
                    improved = True
                    break
                step *= 0.5
            if not improved:
                break
            history.append(loss)
            if abs(history[-2] - loss) < self.tol:
                break
            step *= 2.0  # give the step room back after a successful epoch

        self.coef_ = params[:-1]
        self.intercept_ = float(params[-1])
        self.loss_history_ = history
        self.n_features_in_ = n_features
        return self

    def decision_function(self, X):
        X = check_feature_width(X, self.n_features_in_)
        return np.asarray(X @ self.coef_).ravel() + self.intercept_

    def predict_proba(self, X):
        return sigmoid(self.decision_function(X))

    def predict(self, X):
        return (self.predict_proba(X) >= 0.5).astype(int)

    def to_dict(self) -> dict:
        return {
            "coef": self.coef_.tolist(),
            "intercept": self.intercept_,
            "n_features": self.n_features_in_,
        }

    def load_dict(self, d: dict):
        self.coef_ = np.asarray(d["coef"])
        self.intercept_ = d["intercept"]
        self.n_features_in_ = d["n_features"]
        return self


class PegasosSvm(BaseEstimator, ClassifierMixin):
    """Hinge loss via stochastic subgradient descent.

    The probability output is a fixed logistic link on the margin,
    sigmoid(2 * margin): monotone and parameter-free.
    """

    def __init__(self, l2=0.01, epochs=50, seed=0):
        self.l2 = l2
        self.epochs = epochs
        self.seed = seed

    def fit(self, X, y):
        y = check_training_inputs(X, y)
        signs = np.where(y == 1, 1.0, -1.0)
        n, n_features = X.shape
        if sp.issparse(X):
            X = X.tocsr()
            rows = [(X.indices[X.indptr[i]:X.indptr[i + 1]],
                     X.data[X.indptr[i]:X.indptr[i + 1]]) for i in range(n)]
        else:
            dense = as_dense(X)
            cols = np.arange(n_features)
            rows = [(cols, dense[i]) for i in range(n)]

        rng = np.random.default_rng(self.seed)
        # w is kept as scale * v with an incrementally tracked norm, so every
        # step stays O(nnz of the row)
        v = np.zeros(n_features)
        v_norm2 = 0.0
        scale = 1.0
        b = 0.0
        limit = 1.0 / np.sqrt(self.l2)
        t = 0
        for _ in range(self.epochs):
            order = rng.permutation(n)
            for i in order:
                t += 1
                eta = 1.0 / (self.l2 * t)
                idx, vals = rows[i]
                margin = signs[i] * (scale * float(v[idx] @ vals) + b)
                scale *= 1.0 - eta * self.l2
                if abs(scale) < 1e-9:  # renormalize to avoid underflow
                    v *= scale
                    v_norm2 *= scale * scale
                    scale = 1.0
                if margin < 1.0:
                    old = v[idx]
                    delta = (eta * signs[i] / scale) * vals
                    v_norm2 += 2.0 * float(old @ delta) + float(delta @ delta)
                    v[idx] = old + delta
                    b += eta * signs[i]
                # projection onto the ball of radius 1/sqrt(l2)
                w_norm = abs(scale) * np.sqrt(max(v_norm2, 0.0))
                if w_norm > limit:
                    scale *= limit / w_norm
        self.coef_ = scale * v
        self.intercept_ = b
        self.n_features_in_ = n_features
        return self

    def decision_function(self, X):
        X = check_feature_width(X, self.n_features_in_)
        return np.asarray(X @ self.coef_).ravel() + self.intercept_

    def predict_proba(self, X):
        return sigmoid(2.0 * self.decision_function(X))

    def predict(self, X):
        return (self.decision_function(X) >= 0.0).astype(int)

    def to_dict(self) -> dict:
        return {
            "coef": self.coef_.tolist(),
            "intercept": self.intercept_,
            "n_features": self.n_features_in_,
        }

    def load_dict(self, d: dict):
        self.coef_ = np.asarray(d["coef"])
        self.intercept_ = d["intercept"]
        self.n_features_in_ = d["n_features"]
        return self
