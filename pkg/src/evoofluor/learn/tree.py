"""Shallow classification trees on the weighted-Gini split kernel."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..kernels import best_split


@dataclass
class Node:
    """Internal node when ``feature >= 0``; otherwise a leaf carrying P(class 1)."""

    feature: int = -1
    threshold: float = 0.0
    left: "Node | None" = None
    right: "Node | None" = None
    proba1: float = 0.5

    @property
    def is_leaf(self):
        return self.feature < 0

    def to_dict(self):
        if self.is_leaf:
            return {"proba1": self.proba1}
        return {"feature": self.feature, "threshold": self.threshold,
                "left": self.left.to_dict(), "right": self.right.to_dict()}

    @classmethod
    def from_dict(cls, d):
        if "feature" not in d:
            return cls(proba1=float(d["proba1"]))
        return cls(int(d["feature"]), float(d["threshold"]),
                   cls.from_dict(d["left"]), cls.from_dict(d["right"]))


def predict_proba1(node, X):
    out = np.empty(X.shape[0])
    for i in range(X.shape[0]):
        n = node
        while not n.is_leaf:
            n = n.left if X[i, n.feature] <= n.threshold else n.right
        out[i] = n.proba1
    return out


def grow(X, y, max_depth, rng, depth=0):
    """Grow a tree on unit-weight samples, one random feature per split.

    Features are tried in random order and the first one admitting a split is
    used, so a constant feature never blocks a split on the other.
    """
    n1 = int(np.sum(y == 1))
    n = y.size
    if depth >= max_depth or n < 2 or n1 == 0 or n1 == n:
        return Node(proba1=n1 / n if n else 0.5)
    order = rng.permutation(X.shape[1])
    f, t, _ = best_split(X, y, np.ones(n), order, first_valid=True)
    if f < 0:
        return Node(proba1=n1 / n)
    go_left = X[:, f] <= t
    return Node(f, t,
                grow(X[go_left], y[go_left], max_depth, rng, depth + 1),
                grow(X[~go_left], y[~go_left], max_depth, rng, depth + 1))
