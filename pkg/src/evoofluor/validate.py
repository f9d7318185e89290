"""Forward-in-time validation protocols, seed sweeps and result tables."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import MissingSampleError, ProtocolError, ValidationError
from .features import relative_errors
from .learn import FeatureVector, LabeledSet, metrics, oversample, predict, train
from .learn.metrics import DEFAULT_POSITIVE
from .uvparams import Criterion, DeltaKFormula, label

__all__ = [
    "ValidationProtocol",
    "ProtocolResult",
    "Report",
    "TRAINING_CONFIGS",
    "all_protocols",
    "parse_protocols",
    "build_sets",
    "run_protocol",
    "report",
    "RESULT_COLUMNS",
]

TRAINING_CONFIGS = ((4, 5), (4, 5, 6), (4, 5, 6, 7), (4, 5, 6, 7, 8))
DEFAULT_LAMBDAS = (480.0, 300.0)

RESULT_COLUMNS = [
    "method", "criterion", "training_steps", "validation_step", "seed",
    "accuracy", "sensitivity", "specificity", "tp", "tn", "fp", "fn",
    "positive_class", "formula_variant", "lambda1", "lambda2",
]
SUMMARY_COLUMNS = [
    "method", "criterion", "training_steps", "validation_step", "n_seeds", "metric",
    "mean", "min", "max", "positive_class", "formula_variant", "lambda1", "lambda2", "note",
]
UNDEFINED = "undefined"


@dataclass(frozen=True)
class ValidationProtocol:
    """Train on ``training_steps``; method 1 validates on step 9, method 2 on the next step."""

    training_steps: tuple
    method: int

    def __post_init__(self):
        steps = tuple(int(s) for s in self.training_steps)
        if steps not in TRAINING_CONFIGS:
            raise ProtocolError(f"training steps {steps} are not one of {TRAINING_CONFIGS}")
        if self.method not in (1, 2):
            raise ProtocolError(f"method must be 1 or 2, got {self.method}")
        object.__setattr__(self, "training_steps", steps)

    @property
    def validation_step(self):
        return 9 if self.method == 1 else self.training_steps[-1] + 1

    @property
    def label(self):
        return f"M{self.method}:{_steps_str(self.training_steps)}->{self.validation_step}"


def _steps_str(steps):
    return ";".join(str(s) for s in steps)


def all_protocols(methods=(1, 2)):
    return [ValidationProtocol(t, m) for m in methods for t in TRAINING_CONFIGS]


def parse_protocols(text):
    """Parse ``"all"`` or comma-separated ``method:first-last`` items, e.g. ``1:4-8,2:4-5``."""
    text = text.strip().lower()
    if text == "all":
        return all_protocols()
    if text in ("method1", "m1"):
        return all_protocols((1,))
    if text in ("method2", "m2"):
        return all_protocols((2,))
    out = []
    for item in text.split(","):
        try:
            m, rng = item.split(":")
            lo, hi = (int(v) for v in rng.split("-"))
            out.append(ValidationProtocol(tuple(range(lo, hi + 1)), int(m)))
        except (ValueError, ProtocolError) as exc:
            raise ProtocolError(f"bad protocol {item!r}: {exc}") from None
    return out


def _feature_rows(dataset, oil, step, lambdas, population):
    i1 = dataset.grid.excitation_index(lambdas[0])
    i2 = dataset.grid.excitation_index(lambdas[1])
    ref = dataset.intensity(oil, 0)
    if population == "oil":
        re = relative_errors(ref[[i1, i2]], dataset.intensity(oil, step)[[i1, i2]])
        return [FeatureVector(float(re[0]), float(re[1]), oil, step)]
    rows = []
    for e in dataset.replicates(oil, step):
        r = e.meta.replicate
        re = relative_errors(ref[[i1, i2]], dataset.intensity(oil, step, r)[[i1, i2]])
        rows.append(FeatureVector(float(re[0]), float(re[1]), oil, step, r))
    return rows


def build_sets(dataset, protocol, criterion=Criterion.K268, lambdas=DEFAULT_LAMBDAS,
               population="oil"):
    """Training and test sets for one protocol.

    ``population="oil"`` gives one replicate-averaged row per (oil, step);
    ``"replicate"`` gives one row per measured vial.
    """
    criterion = Criterion.parse(criterion)
    if population not in ("oil", "replicate"):
        raise ValidationError(f"population must be 'oil' or 'replicate', got {population!r}")
    steps = list(protocol.training_steps) + [protocol.validation_step]
    missing = []
    for oil in dataset.oils:
        for s in [0] + steps:
            if not dataset.replicates(oil, s):
                missing.append((oil, s, "eem"))
        for s in steps:
            if not dataset.has_uv(oil, s):
                missing.append((oil, s, "uv"))
    if missing:
        raise MissingSampleError(missing)

    def make(step_list):
        feats, labels = [], []
        for oil in dataset.oils:
            for s in step_list:
                cls = label(dataset.uv(oil, s), criterion).value
                for fv in _feature_rows(dataset, oil, s, lambdas, population):
                    feats.append(fv)
                    labels.append(cls)
        return LabeledSet(feats, labels, criterion)

    return make(protocol.training_steps), make([protocol.validation_step])


def _mean(values):
    vals = [v for v in values if v is not None]
    if len(vals) != len(values) or not vals:
        return None
    return float(np.mean(vals))


@dataclass
class ProtocolResult:
    protocol: ValidationProtocol
    criterion: Criterion
    seeds: list
    reports: list                       # MetricsReport per seed
    lambdas: tuple = DEFAULT_LAMBDAS
    formula: DeltaKFormula = DeltaKFormula.AS_PRINTED
    algorithm: str = "adaboost"
    n_train: int = 0
    n_test: int = 0
    notes: list = field(default_factory=list)

    def values(self, metric):
        return [getattr(r, metric) for r in self.reports]

    def mean(self, metric):
        return _mean(self.values(metric))

    def spread(self, metric):
        vals = self.values(metric)
        if any(v is None for v in vals):
            return None, None
        return float(min(vals)), float(max(vals))

    @property
    def mean_accuracy(self):
        return self.mean("accuracy")

    def swapped(self):
        """Same predictions scored with the other positive class."""
        return ProtocolResult(self.protocol, self.criterion, list(self.seeds),
                              [r.swapped() for r in self.reports], self.lambdas, self.formula,
                              self.algorithm, self.n_train, self.n_test, list(self.notes))


def run_protocol(dataset, protocol, criterion, model_spec, seeds, lambdas=DEFAULT_LAMBDAS,
                 positive_class=DEFAULT_POSITIVE, population="oil",
                 formula=DeltaKFormula.AS_PRINTED):
    """Oversample, train and score once per seed; each seed drives both rngs."""
    seeds = [int(s) for s in seeds]
    if not seeds:
        raise ValidationError("at least one seed is required")
    criterion = Criterion.parse(criterion)
    train_set, test_set = build_sets(dataset, protocol, criterion, lambdas, population)
    leaked = {f.provenance for f in train_set.features} & {f.provenance for f in test_set.features}
    if leaked:
        raise ValidationError(f"test rows leaked into training: {sorted(leaked)}")
    reports = []
    for seed in seeds:
        rng = np.random.default_rng(seed)
        balanced = oversample(train_set, rng)
        model = train(balanced, model_spec.with_seed(seed))
        reports.append(metrics(test_set.y, predict(model, test_set), positive_class))
    result = ProtocolResult(protocol, criterion, seeds, reports, tuple(lambdas),
                            DeltaKFormula.parse(formula), model_spec.algorithm,
                            len(train_set), len(test_set))
    if protocol.method == 2 and result.mean_accuracy == 1.0:
        result.notes.append("perfect score on a small validation set; likely a sampling artefact")
    return result


def _fmt(v):
    if v is None:
        return UNDEFINED
    if isinstance(v, float):
        return repr(v)
    return str(v)


@dataclass
class Report:
    rows: list                # per-seed dicts in RESULT_COLUMNS
    summary: list             # aggregated dicts in SUMMARY_COLUMNS

    @staticmethod
    def _csv(rows, columns):
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: _fmt(r[k]) for k in columns})
        return buf.getvalue()

    def results_csv(self):
        return self._csv(self.rows, RESULT_COLUMNS)

    def summary_csv(self):
        return self._csv(self.summary, SUMMARY_COLUMNS)

    def bars_csv(self):
        """Long-format bar data: one row per metric x protocol x criterion."""
        cols = ["panel", "method", "criterion", "training_steps", "metric", "mean", "min", "max"]
        rows = [{"panel": f"method{r['method']}-{r['criterion']}", **{k: r[k] for k in cols[1:]}}
                for r in self.summary]
        return self._csv(rows, cols)

    @property
    def groups(self):
        return sorted({(r["method"], r["criterion"], r["training_steps"]) for r in self.summary})

    def write(self, out_dir, force=False):
        from .io import write_text
        out = Path(out_dir)
        paths = {"results": out / "results.csv", "summary": out / "summary.csv",
                 "bars": out / "plot_metric_bars.csv"}
        write_text(paths["results"], self.results_csv(), force)
        write_text(paths["summary"], self.summary_csv(), force)
        write_text(paths["bars"], self.bars_csv(), force)
        return paths


def report(results):
    results = list(results)
    if not results:
        raise ValidationError("no results to report")
    rows, summary = [], []
    for res in results:
        common = {
            "method": res.protocol.method,
            "criterion": res.criterion.value,
            "training_steps": _steps_str(res.protocol.training_steps),
            "validation_step": res.protocol.validation_step,
            "formula_variant": res.formula.value,
            "lambda1": float(res.lambdas[0]),
            "lambda2": float(res.lambdas[1]),
        }
        for seed, rep in zip(res.seeds, res.reports):
            rows.append({**common, "seed": seed, **rep.as_dict()})
        positive = res.reports[0].positive_class
        for metric in ("accuracy", "sensitivity", "specificity"):
            lo, hi = res.spread(metric)
            summary.append({**common, "n_seeds": len(res.seeds), "metric": metric,
                            "mean": res.mean(metric), "min": lo, "max": hi,
                            "positive_class": positive, "note": " | ".join(res.notes)})
    return Report(rows, summary)
