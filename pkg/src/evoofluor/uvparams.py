"""UV extinction coefficients, Delta-K, EU quality classes and ageing rates."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DegenerateSeriesError, ValidationError
from .spectra import AGEING_DAYS, OIL_LABELS

__all__ = [
    "Criterion",
    "DeltaKFormula",
    "THRESHOLDS",
    "DELTA_K_UNCERTAINTY_2SIGMA",
    "UVRecord",
    "QualityClass",
    "AgeingStats",
    "delta_k",
    "label",
    "ageing_stats",
    "mean_series",
]


class Criterion(str, Enum):
    K268 = "k268"
    K232 = "k232"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        return cls(str(value).strip().lower())


class DeltaKFormula(str, Enum):
    AS_PRINTED = "as-printed"   # K268 - (K264 - K272) / 2
    MIDPOINT = "midpoint"       # K268 - (K264 + K272) / 2

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        return cls(str(value).strip().lower())


# EU limits for the EVOO grade
THRESHOLDS = {Criterion.K268: 0.22, Criterion.K232: 2.5}

# repeat-measurement uncertainty of Delta-K; reported only
DELTA_K_UNCERTAINTY_2SIGMA = 0.02


def _check_absorbance(name, value):
    v = float(value)
    if not math.isfinite(v) or v < 0:
        raise ValidationError(f"{name} must be finite and >= 0, got {value!r}")
    return v


def delta_k(k264, k268, k272, formula=DeltaKFormula.AS_PRINTED):
    k264 = _check_absorbance("k264", k264)
    k268 = _check_absorbance("k268", k268)
    k272 = _check_absorbance("k272", k272)
    if DeltaKFormula.parse(formula) is DeltaKFormula.MIDPOINT:
        return k268 - (k264 + k272) / 2.0
    return k268 - (k264 - k272) / 2.0


@dataclass(frozen=True)
class UVRecord:
    """UV parameters of one oil at one ageing step.

    ``k264``/``k272`` may be ``None`` when only a published Delta-K is known;
    such records are marked ``verifiable=False``.
    """

    oil_label: str
    ageing_step: int
    k232: float
    k268: float
    k264: float | None = None
    k272: float | None = None
    delta_k: float | None = None
    formula: DeltaKFormula = DeltaKFormula.AS_PRINTED

    def __post_init__(self):
        if self.oil_label not in OIL_LABELS:
            raise ValidationError(f"unknown oil label {self.oil_label!r}")
        if int(self.ageing_step) not in AGEING_DAYS:
            raise ValidationError(f"ageing step {self.ageing_step} outside 0-9")
        object.__setattr__(self, "ageing_step", int(self.ageing_step))
        object.__setattr__(self, "formula", DeltaKFormula.parse(self.formula))
        for name in ("k232", "k268"):
            object.__setattr__(self, name, _check_absorbance(name, getattr(self, name)))
        for name in ("k264", "k272"):
            v = getattr(self, name)
            if v is not None:
                object.__setattr__(self, name, _check_absorbance(name, v))
        if self.k264 is not None and self.k272 is not None:
            dk = delta_k(self.k264, self.k268, self.k272, self.formula)
            if self.delta_k is not None and abs(float(self.delta_k) - dk) > 1e-12:
                raise ValidationError(
                    f"delta_k {self.delta_k} inconsistent with components ({dk}) "
                    f"for {self.oil_label} step {self.ageing_step}")
            object.__setattr__(self, "delta_k", dk)
        elif self.delta_k is not None:
            v = float(self.delta_k)
            if not math.isfinite(v):
                raise ValidationError("delta_k must be finite")
            object.__setattr__(self, "delta_k", v)

    @property
    def verifiable(self):
        return self.k264 is not None and self.k272 is not None

    @property
    def ageing_days(self):
        return AGEING_DAYS[self.ageing_step]

    def coefficient(self, criterion):
        return self.k268 if Criterion.parse(criterion) is Criterion.K268 else self.k232


@dataclass(frozen=True)
class QualityClass:
    value: int
    criterion: Criterion

    def __post_init__(self):
        if self.value not in (0, 1):
            raise ValidationError(f"class value must be 0 or 1, got {self.value}")

    def __int__(self):
        return self.value


def label(record, criterion=Criterion.K268):
    """1 while below the EU limit, else 0. A value exactly at the limit is class 0."""
    criterion = Criterion.parse(criterion)
    return QualityClass(int(record.coefficient(criterion) < THRESHOLDS[criterion]), criterion)


@dataclass(frozen=True)
class AgeingStats:
    rate_per_day: float
    percent_change: float | None   # None when the first value is 0

    def __iter__(self):
        return iter((self.rate_per_day, self.percent_change))


def ageing_stats(series):
    """Endpoint rate of change and total percent change of a (days, value) series."""
    pts = [(float(d), float(v)) for d, v in series]
    if len(pts) < 2:
        raise DegenerateSeriesError("need at least two points")
    if any(b[0] < a[0] for a, b in zip(pts, pts[1:])):
        raise ValidationError("series must be sorted by day")
    (d0, v0), (d1, v1) = pts[0], pts[-1]
    if d1 == d0:
        raise DegenerateSeriesError("series spans zero days")
    rate = (v1 - v0) / (d1 - d0)
    pct = 100.0 * (v1 - v0) / v0 if v0 > 0 else None
    return AgeingStats(rate, pct)


def mean_series(records, criterion):
    """Mean-over-oils ``(days, value)`` series, one point per ageing step present."""
    criterion = Criterion.parse(criterion)
    by_step = {}
    for r in records:
        by_step.setdefault(r.ageing_step, []).append(r.coefficient(criterion))
    return [(AGEING_DAYS[s], float(np.mean(by_step[s]))) for s in sorted(by_step)]
