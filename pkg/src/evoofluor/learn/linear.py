"""Logistic regression by plain gradient ascent on the mean log-likelihood."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np


class ConvergenceWarning(UserWarning):
    pass


def _sigmoid(z):
    # split by sign to avoid overflow in exp
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def log_likelihood(theta, X, y):
    """Mean log-likelihood; ``theta = (w_1, ..., w_d, bias)``."""
    z = X @ theta[:-1] + theta[-1]
    # y*z - log(1 + e^z), computed stably
    return float(np.mean(y * z - np.logaddexp(0.0, z)))


def log_likelihood_grad(theta, X, y):
    z = X @ theta[:-1] + theta[-1]
    r = y - _sigmoid(z)
    return np.append(X.T @ r, r.sum()) / y.size


@dataclass
class LogisticModel:
    weights: np.ndarray
    bias: float
    n_iter: int = 0
    converged: bool = False

    algorithm = "logistic_regression"

    @property
    def n_features(self):
        return self.weights.size

    def predict_proba1(self, X):
        X = np.asarray(X, dtype=np.float64)
        return _sigmoid(X @ self.weights + self.bias)

    def predict(self, X):
        X = np.asarray(X, dtype=np.float64)
        return (X @ self.weights + self.bias > 0).astype(int)

    def params(self):
        return {"weights": [float(v) for v in self.weights], "bias": self.bias,
                "n_iter": self.n_iter, "converged": self.converged}

    @classmethod
    def from_params(cls, params, n_features):
        return cls(np.array(params["weights"], dtype=np.float64), float(params["bias"]),
                   int(params["n_iter"]), bool(params["converged"]))


def fit_logistic(X, y, step=0.1, max_iter=10_000, tol=1e-8):
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    theta = np.zeros(X.shape[1] + 1)
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        g = log_likelihood_grad(theta, X, y)
        if np.max(np.abs(g)) < tol:
            converged = True
            break
        theta += step * g
    if not converged:
        warnings.warn(f"logistic regression did not reach gradient norm {tol:g} "
                      f"in {max_iter} iterations", ConvergenceWarning, stacklevel=2)
    return LogisticModel(theta[:-1].copy(), float(theta[-1]), it, converged)
