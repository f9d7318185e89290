"""From-scratch binary classifiers, oversampling and metrics."""

from .api import (
    ALGORITHMS,
    DEFAULT_HYPERPARAMETERS,
    FeatureVector,
    ImbalanceWarning,
    LabeledSet,
    ModelSpec,
    dumps,
    loads,
    oversample,
    predict,
    train,
)
from .bayes import NaiveBayesModel
from .boosting import AdaBoostModel
from .forest import RandomForestModel
from .linear import ConvergenceWarning, LogisticModel, log_likelihood, log_likelihood_grad
from .metrics import DEFAULT_POSITIVE, MetricsReport, metrics

__all__ = [
    "ALGORITHMS", "DEFAULT_HYPERPARAMETERS", "DEFAULT_POSITIVE",
    "FeatureVector", "LabeledSet", "ModelSpec", "MetricsReport",
    "AdaBoostModel", "RandomForestModel", "LogisticModel", "NaiveBayesModel",
    "ConvergenceWarning", "ImbalanceWarning",
    "oversample", "train", "predict", "metrics", "dumps", "loads",
    "log_likelihood", "log_likelihood_grad",
]
