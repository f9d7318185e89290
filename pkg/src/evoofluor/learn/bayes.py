"""Gaussian naive Bayes for two classes."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

VAR_FLOOR = 1e-9


@dataclass
class NaiveBayesModel:
    means: np.ndarray       # (2, d)
    variances: np.ndarray   # (2, d)
    priors: np.ndarray      # (2,)

    algorithm = "naive_bayes"

    @property
    def n_features(self):
        return self.means.shape[1]

    def joint_log_likelihood(self, X):
        X = np.asarray(X, dtype=np.float64)
        out = np.empty((X.shape[0], 2))
        for c in range(2):
            m, v = self.means[c], self.variances[c]
            out[:, c] = (np.log(self.priors[c])
                         - 0.5 * np.sum(np.log(2.0 * np.pi * v))
                         - 0.5 * np.sum((X - m) ** 2 / v, axis=1))
        return out

    def predict_proba(self, X):
        jll = self.joint_log_likelihood(X)
        jll -= np.logaddexp(jll[:, 0], jll[:, 1])[:, None]
        return np.exp(jll)

    def predict(self, X):
        jll = self.joint_log_likelihood(X)
        return (jll[:, 1] > jll[:, 0]).astype(int)

    def params(self):
        return {"means": self.means.tolist(), "variances": self.variances.tolist(),
                "priors": self.priors.tolist()}

    @classmethod
    def from_params(cls, params, n_features):
        return cls(np.array(params["means"], dtype=np.float64),
                   np.array(params["variances"], dtype=np.float64),
                   np.array(params["priors"], dtype=np.float64))


def fit_naive_bayes(X, y, var_floor=VAR_FLOOR):
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y)
    means = np.stack([X[y == c].mean(axis=0) for c in (0, 1)])
    variances = np.stack([np.maximum(X[y == c].var(axis=0), var_floor) for c in (0, 1)])
    priors = np.array([np.mean(y == 0), np.mean(y == 1)])
    return NaiveBayesModel(means, variances, priors)
