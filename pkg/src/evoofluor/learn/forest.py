"""Bagged depth-limited trees with majority voting."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import DegenerateFeatureError
from .tree import Node, grow, predict_proba1


@dataclass
class RandomForestModel:
    trees: list = field(default_factory=list)
    n_features: int = 2

    algorithm = "random_forest"

    def votes(self, X):
        X = np.asarray(X, dtype=np.float64)
        if not self.trees:
            return np.zeros(X.shape[0])
        return np.sum([predict_proba1(t, X) > 0.5 for t in self.trees], axis=0)

    def predict(self, X):
        # strict majority for class 1; a tied vote goes to class 0
        return (2 * self.votes(X) > len(self.trees)).astype(int)

    def params(self):
        return {"trees": [t.to_dict() for t in self.trees]}

    @classmethod
    def from_params(cls, params, n_features):
        return cls([Node.from_dict(d) for d in params["trees"]], n_features)


def fit_forest(X, y, rng, n_estimators=100, max_depth=2):
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    if np.all(X == X[0]):
        raise DegenerateFeatureError("every feature is constant; no tree split exists")
    n = y.size
    trees = []
    for _ in range(n_estimators):
        idx = rng.integers(0, n, n)
        trees.append(grow(X[idx], y[idx], max_depth, rng))
    return RandomForestModel(trees, X.shape[1])
