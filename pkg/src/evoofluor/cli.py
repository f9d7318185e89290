"""Command-line entry point: ``evoofluor <command> [options]``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import __version__
from ._accel import backend_name
from .config import build_config, read_key_values
from .dataset import DatasetRegistry
from .errors import EvooError, ValidationError
from .features import re_table, select_wavelengths, vote_wavelengths
from .io import PLOT_KINDS, export_plot_data, file_digest, load_dataset, write_text
from .learn import ModelSpec
from .synth import spec_from_mapping, write_synth
from .uvparams import (
    DELTA_K_UNCERTAINTY_2SIGMA,
    THRESHOLDS,
    Criterion,
    ageing_stats,
    label,
    mean_series,
)
from .validate import report, run_protocol

log = logging.getLogger("evoofluor")


def _common_parser():
    p = argparse.ArgumentParser(add_help=False)
    S = argparse.SUPPRESS
    p.add_argument("--config", default=S, help="key=value config file or a run manifest (.json)")
    p.add_argument("--out", default=S, help="output directory (default: out)")
    p.add_argument("--eem", default=S, help="EEM table (long-format CSV)")
    p.add_argument("--uv", default=S, help="UV table (CSV)")
    p.add_argument("--seed-list", dest="seed_list", default=S, help="e.g. 0-24 or 1,2,3")
    p.add_argument("--criterion", default=S, choices=["k268", "k232"])
    p.add_argument("--dk-formula", dest="dk_formula", default=S, choices=["as-printed", "midpoint"])
    p.add_argument("--lambda1", type=float, default=S, help="primary excitation wavelength (nm)")
    p.add_argument("--lambda2", type=float, default=S, help="secondary excitation wavelength (nm)")
    p.add_argument("--force", action="store_true", default=S, help="overwrite existing outputs")
    p.add_argument("-v", "--verbose", action="store_true", default=S)
    return p


def build_parser():
    common = _common_parser()
    parser = argparse.ArgumentParser(prog="evoofluor", parents=[common],
                                     description="Fluorescence-based olive-oil quality pipeline.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("ingest", parents=[common], help="load data and report completeness")
    sub.add_parser("uv", parents=[common], help="UV statistics and class labels")
    sub.add_parser("features", parents=[common], help="RE table per oil, step and wavelength")
    p = sub.add_parser("select", parents=[common], help="excitation-wavelength votes and selection")
    p.add_argument("--step", type=int, default=9)

    p = sub.add_parser("validate", parents=[common], help="run validation protocols")
    _validation_args(p)

    p = sub.add_parser("synth", parents=[common], help="write a synthetic dataset")
    p.add_argument("specfile", nargs="?", help="key=value synth spec")

    p = sub.add_parser("plot", parents=[common], help="export plot data")
    p.add_argument("kind", choices=PLOT_KINDS)
    p.add_argument("--oils", help="comma-separated oil labels (default: all)")
    p.add_argument("--excitation", help="comma-separated excitation wavelengths (nm)")
    p.add_argument("--steps", help="comma-separated ageing steps")
    p.add_argument("--days", help="comma-separated ageing days (diff_map)")
    p.add_argument("--svg", action="store_true", help="also draw SVG charts where supported")
    _validation_args(p)
    return parser


def _validation_args(p):
    S = argparse.SUPPRESS
    p.add_argument("--protocols", default=S, help='"all", "m1", "m2" or e.g. "1:4-8,2:4-5"')
    p.add_argument("--algorithm", default=S,
                   choices=["adaboost", "random_forest", "logistic_regression", "naive_bayes"])
    p.add_argument("--population", default=S, choices=["oil", "replicate"])
    p.add_argument("--positive-class", dest="positive_class", type=int, default=S, choices=[0, 1])


class Run:
    """One CLI invocation: effective config, loaded inputs and written outputs."""

    def __init__(self, command, cfg):
        self.command = command
        self.cfg = cfg
        self.out = Path(cfg.out)
        self.inputs = {}
        self.outputs = []

    def dataset(self, need_eem=True, need_uv=True):
        if need_eem and not self.cfg.eem:
            raise ValidationError("an EEM table is required (--eem)")
        if need_uv and not self.cfg.uv:
            raise ValidationError("a UV table is required (--uv)")
        eem = self.cfg.eem if need_eem else None
        uv = self.cfg.uv if need_uv else None
        for p in (eem, uv):
            if p:
                self.inputs[str(p)] = file_digest(p)
        return load_dataset(eem, uv, self.cfg.dk_formula)

    def write(self, name, text):
        self.outputs.append(str(write_text(self.out / name, text, self.cfg.force)))

    def add_outputs(self, paths):
        self.outputs.extend(str(p) for p in paths)

    def manifest(self):
        doc = {
            "software": "evoofluor",
            "version": __version__,
            "kernel_backend": backend_name(),
            "command": self.command,
            "config": self.cfg.as_dict(),
            "seeds": self.cfg.seeds,
            "inputs": self.inputs,
            "outputs": sorted(self.outputs),
        }
        write_text(self.out / f"manifest_{self.command}.json",
                   json.dumps(doc, indent=1, sort_keys=True) + "\n", self.cfg.force)


def _csv(header, rows):
    def fmt(v):
        if v is None:
            return "undefined"
        return repr(v) if isinstance(v, float) else str(v)
    return "\n".join([",".join(header)] + [",".join(fmt(v) for v in r) for r in rows]) + "\n"


def cmd_ingest(run):
    ds = run.dataset(need_eem=bool(run.cfg.eem), need_uv=bool(run.cfg.uv))
    if not run.cfg.eem and not run.cfg.uv:
        raise ValidationError("give --eem and/or --uv")
    summary = DatasetRegistry.from_dataset(ds).summary()
    print(summary)
    run.write("registry.txt", summary + "\n")


def cmd_uv(run):
    ds = run.dataset(need_eem=False)
    crit = Criterion.parse(run.cfg.criterion)
    records = ds.uv_records
    stats_rows = []
    for c in (Criterion.K268, Criterion.K232):
        st = ageing_stats(mean_series(records, c))
        stats_rows.append([c.value, st.rate_per_day, st.percent_change, THRESHOLDS[c]])
    dk = [(r.ageing_days, r.delta_k) for r in records if r.delta_k is not None]
    if dk:
        by_day = {}
        for d, v in dk:
            by_day.setdefault(d, []).append(v)
        series = [(d, float(np.mean(v))) for d, v in sorted(by_day.items())]
        if len(series) >= 2:
            st = ageing_stats(series)
            stats_rows.append([f"delta_k ({run.cfg.dk_formula})", st.rate_per_day,
                               st.percent_change, None])
    label_rows = [[r.oil_label, r.ageing_step, r.ageing_days, r.coefficient(crit),
                   label(r, crit).value] for r in records]
    run.write("uv_stats.csv", _csv(["parameter", "rate_per_day", "percent_change", "threshold"],
                                   stats_rows))
    run.write(f"uv_labels_{crit.value}.csv",
              _csv(["oil_label", "ageing_step", "ageing_days", crit.value, "class"], label_rows))
    for p, rate, pct, _ in stats_rows:
        pct_s = "undefined" if pct is None else f"{pct:.1f} %"
        print(f"{p}: mean rate {rate:.4g}/day, total change {pct_s}")
    last = max((r.ageing_step for r in records), default=None)
    if last is not None:
        at_last = [label(r, crit).value for r in records if r.ageing_step == last]
        print(f"step {last}: {sum(at_last)} oil(s) class 1, {len(at_last) - sum(at_last)} "
              f"class 0 under {crit.value.upper()} < {THRESHOLDS[crit]}")
    print(f"delta_k formula: {run.cfg.dk_formula}; measurement uncertainty ~"
          f"{DELTA_K_UNCERTAINTY_2SIGMA} (2 sigma); delta_k is not used for labels")


def cmd_features(run):
    ds = run.dataset(need_uv=False)
    rows = [[f.oil_label, f.ageing_step, f.excitation_nm, f.value] for f in re_table(ds)]
    run.write("re_table.csv", _csv(["oil_label", "ageing_step", "excitation_nm", "re"], rows))
    print(f"{len(rows)} RE values written")


def cmd_select(run, step):
    ds = run.dataset(need_uv=False)
    votes = vote_wavelengths(ds, step=step)
    sel = select_wavelengths(votes, step_nm=ds.grid.excitation_step or 10.0, require_two=False)
    run.write("votes.csv", _csv(["oil_label", "winning_wavelength_nm"],
                                [[v.oil_label, v.winning_wavelength_nm] for v in votes]))
    run.write("selection.json", json.dumps(
        {"primary_nm": sel.primary_nm, "secondary_nm": sel.secondary_nm,
         "vote_counts": {f"{k:g}": c for k, c in sel.vote_counts.items()}}, indent=1) + "\n")
    print(sel.describe())
    sec = "none" if sel.secondary_nm is None else f"{sel.secondary_nm:g} nm"
    print(f"selected: {sel.primary_nm:g} nm, {sec}")


def _run_validation(run, ds):
    cfg = run.cfg
    spec = ModelSpec(cfg.algorithm)
    results = []
    for crit in (cfg.criterion,):
        for proto in cfg.protocol_list:
            results.append(run_protocol(ds, proto, crit, spec, cfg.seeds, cfg.lambdas,
                                        cfg.positive_class, cfg.population, cfg.dk_formula))
    return results


def cmd_validate(run):
    ds = run.dataset()
    results = _run_validation(run, ds)
    rep = report(results)
    run.add_outputs(rep.write(run.out, run.cfg.force).values())
    for res in results:
        def f(m):
            v = res.mean(m)
            return "undefined" if v is None else f"{v:.3f}"
        print(f"{res.protocol.label} {res.criterion.value}: accuracy {f('accuracy')}, "
              f"sensitivity {f('sensitivity')}, specificity {f('specificity')} "
              f"({len(res.seeds)} seeds, positive class {run.cfg.positive_class})"
              + (f" [{'; '.join(res.notes)}]" if res.notes else ""))


def cmd_synth(run, specfile):
    spec = spec_from_mapping(read_key_values(specfile) if specfile else {})
    if specfile:
        run.inputs[str(specfile)] = file_digest(specfile)
    paths = write_synth(spec, run.out, run.cfg.force)
    run.add_outputs(paths.values())
    print(f"synthetic dataset ({spec.n_oils} oils, designated {spec.designated_wavelength_nm:g} nm) "
          f"written to {run.out}")


def _split(text, conv=str):
    if text is None:
        return None
    return [conv(v.strip()) for v in text.split(",") if v.strip()] if text.strip() else []


def cmd_plot(run, args):
    sel = {"criterion": run.cfg.criterion, "lambdas": run.cfg.lambdas}
    for key, conv, name in (("oils", str, "oils"), ("excitation", float, "excitation_nm"),
                            ("steps", int, "steps"), ("days", int, "days")):
        v = _split(getattr(args, key), conv)
        if v is not None:
            sel[name] = v
    if args.kind == "metric_bars":
        ds = run.dataset()
        paths = export_plot_data("metric_bars", sel, run.out, results=_run_validation(run, ds),
                                 svg=args.svg, force=run.cfg.force)
    else:
        need_eem = args.kind != "uv_series"
        need_uv = args.kind in ("uv_series", "re_vs_uv")
        ds = run.dataset(need_eem=need_eem, need_uv=need_uv)
        paths = export_plot_data(args.kind, sel, run.out, dataset=ds, svg=args.svg,
                                 force=run.cfg.force)
    run.add_outputs(paths)
    print(f"{len(paths)} file(s) written to {run.out}")


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    values = vars(args)
    logging.basicConfig(level=logging.INFO if values.get("verbose") else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    logging.captureWarnings(True)
    try:
        cfg = build_config(values, values.get("config"))
        name = f"plot_{args.kind}" if args.command == "plot" else args.command
        run = Run(name, cfg)
        if args.command == "ingest":
            cmd_ingest(run)
        elif args.command == "uv":
            cmd_uv(run)
        elif args.command == "features":
            cmd_features(run)
        elif args.command == "select":
            cmd_select(run, args.step)
        elif args.command == "validate":
            cmd_validate(run)
        elif args.command == "synth":
            cmd_synth(run, args.specfile)
        elif args.command == "plot":
            cmd_plot(run, args)
        run.manifest()
    except (EvooError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
