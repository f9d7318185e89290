"""Feature/label containers, model specs, and the train/predict entry points."""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from ..errors import DimensionMismatchError, SchemaError, SingleClassError, ValidationError
from ..uvparams import Criterion
from .bayes import NaiveBayesModel, fit_naive_bayes
from .boosting import AdaBoostModel, fit_adaboost
from .forest import RandomForestModel, fit_forest
from .linear import LogisticModel, fit_logistic
from .sampling import oversample_indices

MODEL_FORMAT = "evoofluor.model"
MODEL_VERSION = 1

ALGORITHMS = ("adaboost", "random_forest", "logistic_regression", "naive_bayes")

DEFAULT_HYPERPARAMETERS = {
    "adaboost": {"n_estimators": 5, "max_depth": 1, "learning_rate": 1.0, "variant": "SAMME.R"},
    "random_forest": {"n_estimators": 100, "max_depth": 2, "max_features": 1},
    "logistic_regression": {"step": 0.1, "max_iter": 10_000, "tol": 1e-8},
    "naive_bayes": {"var_floor": 1e-9},
}

_MODEL_CLASSES = {
    "adaboost": AdaBoostModel,
    "random_forest": RandomForestModel,
    "logistic_regression": LogisticModel,
    "naive_bayes": NaiveBayesModel,
}


class ImbalanceWarning(UserWarning):
    pass


@dataclass(frozen=True)
class FeatureVector:
    re_primary: float
    re_secondary: float
    oil_label: str = ""
    ageing_step: int = -1
    replicate: int | None = None

    def __post_init__(self):
        for v in (self.re_primary, self.re_secondary):
            if not math.isfinite(v) or v < 0:
                raise ValidationError(f"feature values must be finite and >= 0, got {v}")

    @property
    def provenance(self):
        return (self.oil_label, self.ageing_step)

    def as_tuple(self):
        return (self.re_primary, self.re_secondary)


@dataclass(frozen=True)
class LabeledSet:
    features: tuple
    labels: tuple
    criterion: Criterion = Criterion.K268

    def __post_init__(self):
        object.__setattr__(self, "features", tuple(self.features))
        object.__setattr__(self, "labels", tuple(int(v) for v in self.labels))
        if len(self.features) != len(self.labels):
            raise ValidationError(f"{len(self.features)} feature rows vs {len(self.labels)} labels")
        if any(v not in (0, 1) for v in self.labels):
            raise ValidationError("labels must be 0 or 1")

    def __len__(self):
        return len(self.labels)

    @property
    def X(self):
        if not self.features:
            return np.zeros((0, 2))
        return np.array([f.as_tuple() for f in self.features], dtype=np.float64)

    @property
    def y(self):
        return np.array(self.labels, dtype=np.int64)

    def class_counts(self):
        y = self.y
        return int(np.sum(y == 0)), int(np.sum(y == 1))

    def take(self, idx):
        return LabeledSet([self.features[i] for i in idx], [self.labels[i] for i in idx],
                          self.criterion)


@dataclass(frozen=True)
class ModelSpec:
    algorithm: str = "adaboost"
    hyperparameters: dict = field(default_factory=dict)
    rng_seed: int = 0

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ValidationError(f"unknown algorithm {self.algorithm!r}")
        merged = dict(DEFAULT_HYPERPARAMETERS[self.algorithm])
        merged.update(self.hyperparameters)
        object.__setattr__(self, "hyperparameters", merged)
        if self.algorithm == "adaboost" and (merged["max_depth"] != 1 or merged["variant"] != "SAMME.R"):
            raise ValidationError("adaboost supports only depth-1 stumps with SAMME.R")

    def with_seed(self, seed):
        return ModelSpec(self.algorithm, dict(self.hyperparameters), int(seed))


def oversample(labeled, rng):
    """Balance classes by duplicating the minority; see :func:`oversample_indices`."""
    return labeled.take(oversample_indices(labeled.y, rng))


def train(labeled, spec):
    y = labeled.y
    n0, n1 = labeled.class_counts()
    if n0 == 0 or n1 == 0:
        raise SingleClassError(f"training set has a single class (counts {n0}/{n1})")
    if min(n0, n1) < 2:
        raise ValidationError(f"need at least 2 samples per class, got {n0}/{n1}")
    if n0 != n1:
        warnings.warn(f"training set is unbalanced ({n0} vs {n1}); oversample first",
                      ImbalanceWarning, stacklevel=2)
    X = labeled.X
    hp = spec.hyperparameters
    rng = np.random.default_rng(spec.rng_seed)
    if spec.algorithm == "adaboost":
        return fit_adaboost(X, y, rng, hp["n_estimators"], hp["learning_rate"])
    if spec.algorithm == "random_forest":
        if hp["max_features"] != 1:
            raise ValidationError("random forest uses one candidate feature per split")
        return fit_forest(X, y, rng, hp["n_estimators"], hp["max_depth"])
    if spec.algorithm == "logistic_regression":
        return fit_logistic(X, y, hp["step"], hp["max_iter"], hp["tol"])
    return fit_naive_bayes(X, y, hp["var_floor"])


def _as_matrix(features, n_features):
    if isinstance(features, LabeledSet):
        return features.X
    rows = [f.as_tuple() if isinstance(f, FeatureVector) else tuple(f) for f in features]
    if not rows:
        return np.zeros((0, n_features))
    X = np.array(rows, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != n_features:
        raise DimensionMismatchError(f"model expects {n_features} features, got shape {X.shape}")
    return X


def predict(model, features):
    X = _as_matrix(features, model.n_features)
    if X.shape[0] == 0:
        return []
    return [int(v) for v in model.predict(X)]


def dumps(model):
    """Serialise a trained model to a self-describing JSON document."""
    doc = {"format": MODEL_FORMAT, "version": MODEL_VERSION, "algorithm": model.algorithm,
           "n_features": int(model.n_features), "params": model.params()}
    return json.dumps(doc, indent=1, allow_nan=False)


def loads(text):
    doc = json.loads(text)
    if doc.get("format") != MODEL_FORMAT:
        raise SchemaError(f"not a {MODEL_FORMAT} document")
    if doc.get("version") != MODEL_VERSION:
        raise SchemaError(f"unsupported model version {doc.get('version')}")
    try:
        cls = _MODEL_CLASSES[doc["algorithm"]]
    except KeyError:
        raise SchemaError(f"unknown algorithm {doc.get('algorithm')!r}") from None
    return cls.from_params(doc["params"], int(doc["n_features"]))
