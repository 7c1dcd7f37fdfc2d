"""L2-regularized logistic regression fitted by backtracking gradient descent."""
from __future__ import annotations

import logging

import numpy as np
from scipy.special import expit, log1p
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.utils.validation import check_array, check_is_fitted, check_X_y

logger = logging.getLogger(__name__)


class LogisticRegressionGD(ClassifierMixin, BaseEstimator):
    """Binary logistic regression.

    Minimizes ``sum_i log(1 + exp(-s_i z_i)) + alpha/2 * ||w||^2`` (intercept
    unpenalized) with full-batch gradient descent and Armijo backtracking.
    Stops when the objective's relative decrease falls below ``tol`` or the
    gradient max-norm does, or after ``max_iter`` iterations.
    """

    def __init__(self, alpha=1.0, tol=1e-6, max_iter=1000, fit_intercept=True):
        self.alpha = alpha
        self.tol = tol
        self.max_iter = max_iter
        self.fit_intercept = fit_intercept

    def _objective(self, X, s, w, b):
        z = X @ w + b
        m = -s * z
        # log(1 + exp(m)) evaluated stably
        loss = np.maximum(m, 0) + log1p(np.exp(-np.abs(m)))
        return loss.sum() + 0.5 * self.alpha * (w @ w), z

    def fit(self, X, y):
        X, y = check_X_y(X, y, dtype=np.float64)
        self.classes_ = np.array([0, 1])
        y = (np.asarray(y) > 0).astype(np.float64)
        n, d = X.shape
        self.n_iter_ = 0
        if y.min() == y.max():
            # one class only: constant decision
            self.coef_ = np.zeros(d)
            self.intercept_ = 30.0 if y[0] == 1 else -30.0
            return self
        s = 2.0 * y - 1.0
        w = np.zeros(d)
        b = 0.0
        f, z = self._objective(X, s, w, b)
        step = 1.0
        for it in range(1, self.max_iter + 1):
            r = -s * expit(-s * z)
            gw = X.T @ r + self.alpha * w
            gb = r.sum() if self.fit_intercept else 0.0
            gnorm2 = gw @ gw + gb * gb
            if max(np.abs(gw).max(initial=0.0), abs(gb)) < self.tol:
                break
            step *= 2.0
            while True:
                w_new = w - step * gw
                b_new = b - step * gb
                f_new, z_new = self._objective(X, s, w_new, b_new)
                if f_new <= f - 0.5 * step * gnorm2 or step < 1e-20:
                    break
                step *= 0.5
            decrease = f - f_new
            w, b, f, z = w_new, b_new, f_new, z_new
            self.n_iter_ = it
            if decrease <= self.tol * max(abs(f), 1.0):
                break
        else:
            logger.debug("logistic regression hit max_iter=%d", self.max_iter)
        self.coef_ = w
        self.intercept_ = float(b)
        return self

    def decision_function(self, X):
        check_is_fitted(self, "coef_")
        X = check_array(X, dtype=np.float64)
        return X @ self.coef_ + self.intercept_

    def predict_proba(self, X):
        p = expit(self.decision_function(X))
        return np.column_stack([1.0 - p, p])

    def predict(self, X):
        return (self.decision_function(X) > 0).astype(int)


class OneVsRestLogistic(BaseEstimator):
    """One binary :class:`LogisticRegressionGD` per label column.

    ``decision="top-k"`` assigns each sample its ``k_i`` most probable
    labels (``k_i`` supplied at predict time, usually the true label count);
    ``decision="threshold"`` keeps labels with probability above
    ``threshold``. Labels without positive training samples get no model and
    are never predicted.
    """

    def __init__(self, alpha=1.0, tol=1e-6, max_iter=1000, decision="top-k", threshold=0.5):
        self.alpha = alpha
        self.tol = tol
        self.max_iter = max_iter
        self.decision = decision
        self.threshold = threshold

    def fit(self, X, Y):
        X = check_array(X, dtype=np.float64)
        Y = check_array(Y, ensure_2d=True)
        if len(X) != len(Y):
            raise ValueError("X and Y have different numbers of rows")
        self.n_labels_ = Y.shape[1]
        self.estimators_ = []
        for j in range(self.n_labels_):
            col = Y[:, j] > 0
            if not col.any():
                logger.info("label %d has no training instances; it gets no classifier", j)
                self.estimators_.append(None)
                continue
            est = LogisticRegressionGD(self.alpha, self.tol, self.max_iter)
            self.estimators_.append(est.fit(X, col.astype(int)))
        return self

    def predict_proba(self, X):
        check_is_fitted(self, "estimators_")
        X = check_array(X, dtype=np.float64)
        P = np.full((len(X), self.n_labels_), -np.inf)
        for j, est in enumerate(self.estimators_):
            if est is not None:
                P[:, j] = est.predict_proba(X)[:, 1]
        return P

    def predict(self, X, k=None):
        P = self.predict_proba(X)
        Y = np.zeros(P.shape, dtype=np.int8)
        if self.decision == "threshold":
            Y[P > self.threshold] = 1
            return Y
        if self.decision != "top-k":
            raise ValueError(f"unknown decision rule {self.decision!r}")
        if k is None:
            raise ValueError("top-k decision needs per-sample label counts k")
        k = np.broadcast_to(np.asarray(k, dtype=np.int64), (len(P),))
        # stable sort keeps label-index order among equal probabilities
        order = np.argsort(-P, axis=1, kind="stable")
        for i, ki in enumerate(k):
            for j in order[i, :ki]:
                if np.isfinite(P[i, j]):
                    Y[i, j] = 1
        return Y
