"""Real AdaBoost (SAMME.R) on depth-1 stumps, two-class case."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import DegenerateFeatureError
from ..kernels import best_split


@dataclass
class Stump:
    feature: int
    threshold: float
    proba_left: tuple    # (P(0), P(1))
    proba_right: tuple

    def proba(self, X):
        left = X[:, self.feature] <= self.threshold
        return np.where(left[:, None], np.array(self.proba_left), np.array(self.proba_right))

    def to_dict(self):
        return {"feature": self.feature, "threshold": self.threshold,
                "proba_left": list(self.proba_left), "proba_right": list(self.proba_right)}

    @classmethod
    def from_dict(cls, d):
        return cls(int(d["feature"]), float(d["threshold"]),
                   tuple(float(v) for v in d["proba_left"]),
                   tuple(float(v) for v in d["proba_right"]))


def _leaf_proba(w, y, mask, scale):
    # add-one smoothing on the count scale (weights rescaled to sum to n)
    w1 = float(np.sum(w[mask & (y == 1)])) * scale
    w0 = float(np.sum(w[mask & (y != 1)])) * scale
    p1 = (w1 + 1.0) / (w0 + w1 + 2.0)
    return (1.0 - p1, p1)


def fit_stump(X, y, w, rng):
    order = rng.permutation(X.shape[1])
    f, t, _ = best_split(X, y, w, order)
    if f < 0:
        raise DegenerateFeatureError("every feature is constant; no stump split exists")
    left = X[:, f] <= t
    scale = y.size / float(np.sum(w))
    return Stump(f, t, _leaf_proba(w, y, left, scale), _leaf_proba(w, y, ~left, scale))


def stage_score(stump, X):
    """Half log-odds contribution of one stage towards class 1."""
    p = stump.proba(X)
    return 0.5 * (np.log(p[:, 1]) - np.log(p[:, 0]))


@dataclass
class AdaBoostModel:
    stumps: list = field(default_factory=list)
    learning_rate: float = 1.0
    n_features: int = 2
    weight_history: list = field(default_factory=list, repr=False, compare=False)

    algorithm = "adaboost"

    def decision_function(self, X, n_stages=None):
        X = np.asarray(X, dtype=np.float64)
        score = np.zeros(X.shape[0])
        for stump in self.stumps[:n_stages]:
            score += stage_score(stump, X)
        return score

    def staged_predict(self, X):
        X = np.asarray(X, dtype=np.float64)
        score = np.zeros(X.shape[0])
        for stump in self.stumps:
            score += stage_score(stump, X)
            yield (score > 0).astype(int)

    def predict(self, X):
        return (self.decision_function(X) > 0).astype(int)

    def params(self):
        return {"learning_rate": self.learning_rate,
                "stumps": [s.to_dict() for s in self.stumps]}

    @classmethod
    def from_params(cls, params, n_features):
        return cls([Stump.from_dict(d) for d in params["stumps"]],
                   float(params["learning_rate"]), n_features)


def fit_adaboost(X, y, rng, n_estimators=5, learning_rate=1.0):
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    n = y.size
    w = np.full(n, 1.0 / n)
    model = AdaBoostModel([], learning_rate, X.shape[1])
    rows = np.arange(n)
    for _ in range(n_estimators):
        stump = fit_stump(X, y, w, rng)
        logp = np.log(stump.proba(X))
        # K = 2: exp(-lr * (K-1)/K * (log p_true - log p_other))
        w = w * np.exp(-learning_rate * 0.5 * (logp[rows, y] - logp[rows, 1 - y]))
        w /= w.sum()
        model.stumps.append(stump)
        model.weight_history.append(w.copy())
    return model
