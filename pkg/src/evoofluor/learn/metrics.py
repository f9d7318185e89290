"""Confusion-matrix metrics with an explicit positive class."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import LengthMismatchError, ValidationError

# class 0 ("limit exceeded") is the condition being detected
DEFAULT_POSITIVE = 0


@dataclass(frozen=True)
class MetricsReport:
    tp: int
    tn: int
    fp: int
    fn: int
    positive_class: int = DEFAULT_POSITIVE

    @property
    def n(self):
        return self.tp + self.tn + self.fp + self.fn

    @property
    def accuracy(self):
        return (self.tp + self.tn) / self.n

    @property
    def sensitivity(self):
        """True-positive rate, ``None`` when there are no actual positives."""
        d = self.tp + self.fn
        return self.tp / d if d else None

    @property
    def specificity(self):
        d = self.tn + self.fp
        return self.tn / d if d else None

    def swapped(self):
        """The same predictions scored with the other class as positive."""
        return MetricsReport(self.tn, self.tp, self.fn, self.fp, 1 - self.positive_class)

    def as_dict(self):
        return {"accuracy": self.accuracy, "sensitivity": self.sensitivity,
                "specificity": self.specificity, "tp": self.tp, "tn": self.tn,
                "fp": self.fp, "fn": self.fn, "positive_class": self.positive_class}


def metrics(y_true, y_pred, positive_class=DEFAULT_POSITIVE):
    y_true = np.asarray(y_true).astype(int)
    y_pred = np.asarray(y_pred).astype(int)
    if y_true.shape != y_pred.shape:
        raise LengthMismatchError(f"{y_true.size} labels vs {y_pred.size} predictions")
    if y_true.size == 0:
        raise ValidationError("metrics need at least one sample")
    if positive_class not in (0, 1):
        raise ValidationError("positive_class must be 0 or 1")
    pos_t = y_true == positive_class
    pos_p = y_pred == positive_class
    return MetricsReport(tp=int(np.sum(pos_t & pos_p)), tn=int(np.sum(~pos_t & ~pos_p)),
                         fp=int(np.sum(~pos_t & pos_p)), fn=int(np.sum(pos_t & ~pos_p)),
                         positive_class=positive_class)
