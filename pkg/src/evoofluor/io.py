"""Canonical CSV formats, loaders and plot-data export.

EEM table (long format, one intensity per row)::

    oil_label,ageing_step,replicate,excitation_nm,emission_nm,intensity

UV table (one row per oil and ageing step)::

    oil_label,ageing_step,k232,k264,k268,k272[,delta_k]

UTF-8, comma separated, header row required, ``.`` as decimal separator.
"""

from __future__ import annotations

import csv
import hashlib
import logging
import math
import warnings
from pathlib import Path

import numpy as np
import pandas as pd

from .dataset import Dataset
from .errors import (
    EmptySelectionError,
    GridInconsistencyError,
    OutputExistsError,
    SchemaError,
    UnknownKindError,
    ValidationError,
)
from .features import relative_errors
from .spectra import AGEING_DAYS, DEFAULT_GRID, EEM, SampleMeta, WavelengthGrid
from .uvparams import THRESHOLDS, Criterion, DeltaKFormula, UVRecord, delta_k
from . import svg

log = logging.getLogger(__name__)

EEM_COLUMNS = ["oil_label", "ageing_step", "replicate", "excitation_nm", "emission_nm", "intensity"]
UV_COLUMNS = ["oil_label", "ageing_step", "k232", "k264", "k268", "k272"]
UV_OPTIONAL = ["delta_k"]
PLOT_KINDS = ("uv_series", "emission_evolution", "diff_map", "re_vs_uv", "metric_bars")


class SchemaWarning(UserWarning):
    pass


def write_text(path, text, force=False):
    path = Path(path)
    if path.exists() and not force:
        raise OutputExistsError(f"{path} exists; pass force to overwrite")
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    return path


def file_digest(path):
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def _check_columns(columns, required, optional, path):
    missing = [c for c in required if c not in columns]
    if missing:
        raise SchemaError(f"{path}: missing column(s) {', '.join(missing)}", line=1)
    extra = [c for c in columns if c not in required and c not in optional]
    if extra:
        warnings.warn(f"{path}: ignoring extra column(s) {', '.join(extra)}", SchemaWarning,
                      stacklevel=3)


def _numeric(df, col, integer=False):
    if pd.api.types.is_numeric_dtype(df[col]):
        arr = df[col].to_numpy(dtype=np.float64)
    else:
        arr = None
    try:
        if arr is None:
            raw = df[col].to_numpy(dtype=str)
            arr = raw.astype(np.float64)
    except ValueError:
        for i, s in enumerate(raw):
            try:
                float(s)
            except ValueError:
                raise SchemaError(f"column {col}: cannot parse {s!r} as a number", line=i + 2) from None
        raise
    if not np.all(np.isfinite(arr)):
        i = int(np.flatnonzero(~np.isfinite(arr))[0])
        raise SchemaError(f"column {col}: non-finite value", line=i + 2)
    if integer:
        frac = arr != np.round(arr)
        if frac.any():
            i = int(np.flatnonzero(frac)[0])
            raise SchemaError(f"column {col}: expected an integer, got {df[col].iloc[i]!r}", line=i + 2)
        return arr.astype(np.int64)
    return arr


def load_eem_table(path, grid=None):
    """Load a long-format EEM CSV into EEMs in canonical (oil, step, replicate) order.

    The grid is inferred from the file; every sample must cover it completely.
    When ``grid`` is given the inferred grid must equal it, otherwise a
    mismatch with the instrument default only warns.
    """
    path = Path(path)
    # round_trip parses floats exactly; unparseable columns stay as strings
    df = pd.read_csv(path, dtype={"oil_label": str}, keep_default_na=False,
                     float_precision="round_trip", encoding="utf-8")
    _check_columns(list(df.columns), EEM_COLUMNS, [], path)
    labels = df["oil_label"].str.strip().to_numpy()
    step = _numeric(df, "ageing_step", integer=True)
    rep = _numeric(df, "replicate", integer=True)
    ex = _numeric(df, "excitation_nm")
    em = _numeric(df, "emission_nm")
    val = _numeric(df, "intensity")
    neg = val < 0
    if neg.any():
        i = int(np.flatnonzero(neg)[0])
        raise ValidationError(f"{path}: line {i + 2}: negative intensity {val[i]!r}")

    ex_axis = np.unique(ex)
    em_axis = np.unique(em)
    inferred = WavelengthGrid(ex_axis, em_axis)
    if grid is not None and inferred != grid:
        raise GridInconsistencyError(f"{path}: file grid {inferred.shape} differs from required grid")
    if grid is None and inferred != DEFAULT_GRID:
        warnings.warn(f"{path}: grid {inferred.shape} differs from the instrument default "
                      f"{DEFAULT_GRID.shape}", SchemaWarning, stacklevel=2)
    grid = inferred if grid is None else grid
    n_ex, n_em = grid.shape
    ix = np.searchsorted(grid.excitation_nm, ex)
    jx = np.searchsorted(grid.emission_nm, em)

    groups = pd.DataFrame({"o": labels, "s": step, "r": rep}).groupby(["o", "s", "r"]).indices

    eems = []
    for key in sorted(groups, key=lambda k: (k[0], int(k[1]), int(k[2]))):
        rows = np.asarray(groups[key])
        oil, s, r = key[0], int(key[1]), int(key[2])
        try:
            meta = SampleMeta(oil, s, replicate=r)
        except ValidationError as exc:
            raise SchemaError(f"{path}: {exc}", line=int(rows[0]) + 2) from None
        mat = np.full((n_ex, n_em), np.nan)
        counts = np.zeros((n_ex, n_em), dtype=np.int64)
        np.add.at(counts, (ix[rows], jx[rows]), 1)
        if np.any(counts > 1):
            i, j = np.argwhere(counts > 1)[0]
            raise GridInconsistencyError(
                f"{path}: sample ({oil}, {s}, {r}) has duplicate entries at "
                f"excitation {grid.excitation_nm[i]:g} nm, emission {grid.emission_nm[j]:g} nm")
        short = np.flatnonzero(counts.sum(axis=1) < n_em)
        if short.size:
            wl = grid.excitation_nm[short[0]]
            raise GridInconsistencyError(
                f"{path}: sample ({oil}, {s}, {r}) is missing "
                f"{n_em - int(counts[short[0]].sum())} emission value(s) at excitation {wl:g} nm")
        mat[ix[rows], jx[rows]] = val[rows]
        eems.append(EEM(grid, mat, meta))
    log.info("loaded %d EEMs from %s", len(eems), path)
    return eems


def write_eem_table(path, eems, force=False):
    """Write EEMs in canonical long format; floats use shortest round-trip repr."""
    path = Path(path)
    if path.exists() and not force:
        raise OutputExistsError(f"{path} exists; pass force to overwrite")
    path.parent.mkdir(parents=True, exist_ok=True)
    eems = sorted(eems, key=lambda e: e.meta.key)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(",".join(EEM_COLUMNS) + "\n")
        for e in eems:
            n_ex, n_em = e.grid.shape
            ex = np.repeat(e.grid.excitation_nm, n_em)
            em = np.tile(e.grid.emission_nm, n_ex)
            prefix = f"{e.meta.oil_label},{e.meta.ageing_step},{e.meta.replicate},"
            fh.writelines(f"{prefix}{a!r},{b!r},{v!r}\n"
                          for a, b, v in zip(ex.tolist(), em.tolist(), e.intensity.ravel().tolist()))
    return path


def _opt_float(s):
    s = (s or "").strip()
    return None if s == "" else float(s)


def load_uv_table(path, formula=DeltaKFormula.AS_PRINTED):
    """Load UV records; Delta-K is recomputed from its components when they are present.

    A row without ``k264``/``k272`` but with ``delta_k`` is kept with the given
    value and flagged unverifiable (``record.verifiable is False``).
    """
    path = Path(path)
    formula = DeltaKFormula.parse(formula)
    records = []
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise SchemaError(f"{path}: empty file", line=1)
        _check_columns([c.strip() for c in reader.fieldnames], UV_COLUMNS, UV_OPTIONAL, path)
        for line, row in enumerate(reader, start=2):
            row = {k.strip(): v for k, v in row.items() if k is not None}
            try:
                step = int(row["ageing_step"])
                k232 = float(row["k232"])
                k268 = float(row["k268"])
                k264 = _opt_float(row.get("k264"))
                k272 = _opt_float(row.get("k272"))
                dk = _opt_float(row.get("delta_k"))
            except (TypeError, ValueError) as exc:
                raise SchemaError(f"{path}: {exc}", line=line) from None
            for name, v in (("k232", k232), ("k268", k268), ("k264", k264), ("k272", k272)):
                if v is not None and (not math.isfinite(v) or v < 0):
                    raise ValidationError(f"{path}: line {line}: {name} must be finite and >= 0, got {v}")
            if (k264 is None or k272 is None) and dk is None:
                raise SchemaError(f"{path}: need k264 and k272, or delta_k", line=line)
            if k264 is not None and k272 is not None and dk is not None:
                expect = delta_k(k264, k268, k272, formula)
                if abs(expect - dk) > 1e-12:
                    warnings.warn(f"{path}: line {line}: delta_k {dk} replaced by {expect} "
                                  f"recomputed with the {formula.value} formula", SchemaWarning,
                                  stacklevel=2)
                    dk = None
            if k264 is None or k272 is None:
                k264 = k272 = None
                warnings.warn(f"{path}: line {line}: delta_k taken as-is (unverifiable)",
                              SchemaWarning, stacklevel=2)
            try:
                records.append(UVRecord(row["oil_label"].strip(), step, k232, k268,
                                        k264, k272, dk, formula))
            except ValidationError as exc:
                raise SchemaError(f"{path}: {exc}", line=line) from None
    records.sort(key=lambda r: (r.oil_label, r.ageing_step))
    return records


def write_uv_table(path, records, force=False):
    lines = [",".join(UV_COLUMNS + UV_OPTIONAL)]
    for r in sorted(records, key=lambda r: (r.oil_label, r.ageing_step)):
        vals = [r.k232, r.k264, r.k268, r.k272, r.delta_k]
        lines.append(",".join([r.oil_label, str(r.ageing_step)]
                              + ["" if v is None else repr(float(v)) for v in vals]))
    return write_text(path, "\n".join(lines) + "\n", force)


def load_dataset(eem_path=None, uv_path=None, formula=DeltaKFormula.AS_PRINTED, grid=None):
    eems = load_eem_table(eem_path, grid) if eem_path else []
    uv = load_uv_table(uv_path, formula) if uv_path else []
    return Dataset(eems, uv)


# -- plot data ----------------------------------------------------------------

def _csv_text(header, rows):
    out = [",".join(str(h) for h in header)]
    for row in rows:
        out.append(",".join("" if v is None else (repr(v) if isinstance(v, float) else str(v))
                            for v in row))
    return "\n".join(out) + "\n"


def _oils(selection, dataset):
    oils = selection.get("oils")
    if oils is None:
        oils = dataset.oils
    oils = list(oils)
    if not oils:
        raise EmptySelectionError("no oils selected")
    return oils


def _export_uv_series(selection, out, dataset, want_svg, force):
    crit = Criterion.parse(selection.get("criterion", "k268"))
    oils = _oils(selection, dataset)
    steps = sorted({r.ageing_step for r in dataset.uv_records if r.oil_label in oils})
    if not steps:
        raise EmptySelectionError("no UV records for the selected oils")
    thr = THRESHOLDS[crit]
    rows, cols = [], {o: [] for o in oils}
    means = []
    for s in steps:
        vals = [dataset.uv(o, s).coefficient(crit) if dataset.has_uv(o, s) else None for o in oils]
        present = [v for v in vals if v is not None]
        m = float(np.mean(present))
        sd = float(np.std(present, ddof=1)) if len(present) > 1 else None
        means.append(m)
        for o, v in zip(oils, vals):
            cols[o].append(v)
        rows.append([s, AGEING_DAYS[s], *vals, m, sd, thr])
    header = ["ageing_step", "ageing_days", *oils, "mean", "std", "threshold"]
    paths = [write_text(out / f"uv_series_{crit.value}.csv", _csv_text(header, rows), force)]
    if want_svg:
        days = [AGEING_DAYS[s] for s in steps]
        series = {o: [v if v is not None else np.nan for v in cols[o]] for o in oils}
        series["mean"] = means
        paths.append(write_text(out / f"uv_series_{crit.value}.svg",
                                svg.line_chart(days, series, f"{crit.value.upper()} vs days",
                                               highlight="mean", hline=thr), force))
    return paths


def _export_emission(selection, out, dataset, force):
    oils = _oils(selection, dataset)
    wls = selection.get("excitation_nm", [300.0, 400.0, 480.0])
    paths = []
    for oil in oils:
        steps = dataset.steps(oil)
        if not steps:
            raise EmptySelectionError(f"no EEMs for oil {oil}")
        for wl in wls:
            i = dataset.grid.excitation_index(wl)
            spectra = [dataset.intensity(oil, s, masked=selection.get("masked", False))[i] for s in steps]
            rows = [[float(em), *[float(sp[j]) for sp in spectra]]
                    for j, em in enumerate(dataset.grid.emission_nm)]
            header = ["emission_nm", *[f"step_{s}" for s in steps]]
            paths.append(write_text(out / f"emission_{oil}_ex{wl:g}.csv", _csv_text(header, rows), force))
    return paths


def _matrix_csv(grid, mat):
    header = ["excitation_nm", *[repr(float(v)) for v in grid.emission_nm]]
    rows = [[float(ex), *[float(v) for v in mat[i]]] for i, ex in enumerate(grid.excitation_nm)]
    return _csv_text(header, rows)


def _export_diff(selection, out, dataset, force):
    oils = _oils(selection, dataset)
    steps = selection.get("steps")
    if steps is None:
        days = selection.get("days", [9, 53])
        by_days = {d: s for s, d in AGEING_DAYS.items()}
        steps = [by_days[int(d)] for d in days]
    if not steps:
        raise EmptySelectionError("no ageing steps selected")
    paths = []
    for oil in oils:
        fresh = dataset.intensity(oil, 0, masked=False)
        for s in steps:
            mat = dataset.intensity(oil, int(s), masked=False) - fresh
            paths.append(write_text(out / f"diff_{oil}_step{int(s)}.csv",
                                    _matrix_csv(dataset.grid, mat), force))
    return paths


def _export_re_vs_uv(selection, out, dataset, force):
    oils = _oils(selection, dataset)
    l1, l2 = selection.get("lambdas", (480.0, 300.0))
    i1, i2 = dataset.grid.excitation_index(l1), dataset.grid.excitation_index(l2)
    rows = []
    for oil in oils:
        ref = dataset.intensity(oil, 0)
        for s in dataset.steps(oil):
            re = relative_errors(ref[[i1, i2]], dataset.intensity(oil, s)[[i1, i2]])
            uv = dataset.uv(oil, s) if dataset.has_uv(oil, s) else None
            rows.append([oil, s, AGEING_DAYS[s], float(re[0]), float(re[1]),
                         None if uv is None else uv.k268, None if uv is None else uv.k232])
    header = ["oil_label", "ageing_step", "ageing_days", f"re_{l1:g}", f"re_{l2:g}", "k268", "k232"]
    return [write_text(out / "re_vs_uv.csv", _csv_text(header, rows), force)]


def _export_bars(results, out, want_svg, force):
    from .validate import report
    if not results:
        raise EmptySelectionError("no validation results to plot")
    rep = report(results)
    paths = [write_text(out / "plot_metric_bars.csv", rep.bars_csv(), force)]
    if want_svg:
        panels = sorted({(r["method"], r["criterion"]) for r in rep.summary})
        for method, crit in panels:
            rows = [r for r in rep.summary if r["method"] == method and r["criterion"] == crit]
            groups = sorted({r["training_steps"] for r in rows}, key=lambda t: len(t))
            values = {(r["training_steps"], r["metric"]): r["mean"] for r in rows}
            paths.append(write_text(
                out / f"metric_bars_method{method}_{crit}.svg",
                svg.bar_chart(groups, ["accuracy", "sensitivity", "specificity"], values,
                              f"method {method}, {crit.upper()}"), force))
    return paths


def export_plot_data(kind, selection, path, dataset=None, results=None, svg=False, force=False):
    """Write plot-ready CSV files (and optionally SVG) under directory ``path``."""
    if kind not in PLOT_KINDS:
        raise UnknownKindError(f"unknown plot kind {kind!r}; expected one of {', '.join(PLOT_KINDS)}")
    selection = dict(selection or {})
    out = Path(path)
    if kind == "metric_bars":
        return _export_bars(results, out, svg, force)
    if dataset is None:
        raise EmptySelectionError(f"plot kind {kind} needs a dataset")
    if kind == "uv_series":
        return _export_uv_series(selection, out, dataset, svg, force)
    if kind == "emission_evolution":
        return _export_emission(selection, out, dataset, force)
    if kind == "diff_map":
        return _export_diff(selection, out, dataset, force)
    return _export_re_vs_uv(selection, out, dataset, force)
