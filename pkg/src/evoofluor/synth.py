"""Synthetic EEM/UV datasets with known ground truth, for oracle tests.

Fresh EEMs are smooth sums of 2-D Gaussian bands on a small positive
baseline. Ageing scales one designated excitation row by
``1 + change_rate * step`` and leaves every other row untouched apart from
noise, so with zero noise the RE is nonzero only on that row and equals
``(change_rate * step) ** 2`` regardless of the oil. UV coefficients are
linear ramps that reach the EU limit exactly at each oil's flip step. The
surfaces are built for testing and make no claim of chemical fidelity.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .dataset import Dataset
from .errors import ValidationError
from .spectra import AGEING_DAYS, DEFAULT_GRID, EEM, OIL_LABELS, SampleMeta, WavelengthGrid
from .uvparams import THRESHOLDS, Criterion, DeltaKFormula, UVRecord

# (excitation nm, emission nm, sigma_ex, sigma_em, amplitude)
_BANDS = (
    (400.0, 675.0, 40.0, 15.0, 800.0),
    (620.0, 680.0, 30.0, 12.0, 500.0),
    (320.0, 440.0, 25.0, 50.0, 300.0),
    (480.0, 560.0, 35.0, 40.0, 150.0),
)
BASELINE = 1.0


@dataclass(frozen=True)
class SynthSpec:
    n_oils: int = 24
    grid: WavelengthGrid = DEFAULT_GRID
    designated_wavelength_nm: float = 480.0
    change_rate: float = 0.05
    label_flip_step: int | tuple = 7      # one step for all oils, or one per oil
    noise_sigma: float = 0.0
    rng_seed: int = 0
    n_replicates: int = 3
    k268_slope: float = 0.02
    k232_slope: float = 0.1

    def __post_init__(self):
        if not 1 <= self.n_oils <= len(OIL_LABELS):
            raise ValidationError(f"n_oils must be in 1..{len(OIL_LABELS)}")
        self.grid.excitation_index(self.designated_wavelength_nm)  # raises when off-grid
        flips = self.flip_steps
        if len(flips) != self.n_oils:
            raise ValidationError(f"{len(flips)} flip steps given for {self.n_oils} oils")
        if any(not 1 <= f <= 9 for f in flips):
            raise ValidationError("flip steps must lie within 1..9")
        if self.noise_sigma < 0 or self.change_rate < 0:
            raise ValidationError("noise_sigma and change_rate must be >= 0")
        if not 1 <= self.n_replicates <= 3:
            raise ValidationError("n_replicates must be in 1..3")
        if THRESHOLDS[Criterion.K268] - 9 * self.k268_slope < 0 or \
                THRESHOLDS[Criterion.K232] - 9 * self.k232_slope < 0:
            raise ValidationError("UV slope too steep; coefficients would go negative")

    @property
    def oils(self):
        return OIL_LABELS[: self.n_oils]

    @property
    def flip_steps(self):
        f = self.label_flip_step
        if isinstance(f, (int, np.integer)):
            return (int(f),) * self.n_oils
        return tuple(int(v) for v in f)


@dataclass
class GroundTruth:
    argmax_wavelength: dict            # oil -> nm, None when nothing changes
    expected_class: dict = field(default_factory=dict)   # (oil, step) -> 0/1

    def to_dict(self):
        return {"argmax_wavelength": self.argmax_wavelength,
                "expected_class": {f"{o}:{s}": c for (o, s), c in self.expected_class.items()}}


def _base_surface(grid, rng):
    ex = grid.excitation_nm[:, None]
    em = grid.emission_nm[None, :]
    out = np.full(grid.shape, BASELINE)
    for cx, cm, sx, sm, amp in _BANDS:
        a = amp * rng.uniform(0.8, 1.2)
        cx = cx + rng.uniform(-10.0, 10.0)
        cm = cm + rng.uniform(-10.0, 10.0)
        out += a * np.exp(-0.5 * (((ex - cx) / sx) ** 2 + ((em - cm) / sm) ** 2))
    return out


def generate(spec):
    """Return ``(dataset, ground_truth)`` for ``spec``; deterministic per seed."""
    row = spec.grid.excitation_index(spec.designated_wavelength_nm)
    eems, uv = [], []
    truth = GroundTruth({})
    thr268, thr232 = THRESHOLDS[Criterion.K268], THRESHOLDS[Criterion.K232]
    for j, (oil, flip) in enumerate(zip(spec.oils, spec.flip_steps)):
        rng = np.random.default_rng([spec.rng_seed, j])
        base = _base_surface(spec.grid, rng)
        for step in AGEING_DAYS:
            clean = base.copy()
            clean[row] *= 1.0 + spec.change_rate * step
            for rep in range(1, spec.n_replicates + 1):
                if spec.noise_sigma > 0:
                    mat = np.maximum(clean + rng.normal(0.0, spec.noise_sigma, clean.shape), 0.0)
                else:
                    mat = clean
                eems.append(EEM(spec.grid, mat, SampleMeta(oil, step, replicate=rep)))
            k268 = thr268 + spec.k268_slope * (step - flip)
            k232 = thr232 + spec.k232_slope * (step - flip)
            uv.append(UVRecord(oil, step, k232=k232, k268=k268, k264=k268 + 0.005,
                               k272=max(k268 - 0.005, 0.0), formula=DeltaKFormula.AS_PRINTED))
            truth.expected_class[(oil, step)] = int(step < flip)
        truth.argmax_wavelength[oil] = (float(spec.designated_wavelength_nm)
                                        if spec.change_rate > 0 else None)
    return Dataset(eems, uv), truth


def spec_from_mapping(mapping):
    """Build a :class:`SynthSpec` from string key/value pairs (config-file style)."""
    m = dict(mapping)
    kw = {}
    ints = ("n_oils", "rng_seed", "n_replicates")
    floats = ("designated_wavelength_nm", "change_rate", "noise_sigma", "k268_slope", "k232_slope")
    for k, v in m.items():
        if k in ints:
            kw[k] = int(v)
        elif k in floats:
            kw[k] = float(v)
        elif k == "label_flip_step":
            parts = [int(p) for p in str(v).replace(";", ",").split(",") if p.strip()]
            kw[k] = parts[0] if len(parts) == 1 else tuple(parts)
        else:
            raise ValidationError(f"unknown synth setting {k!r}")
    return SynthSpec(**kw)


def write_synth(spec, out_dir, force=False):
    from .io import write_eem_table, write_text, write_uv_table
    dataset, truth = generate(spec)
    out = Path(out_dir)
    paths = {
        "eem": write_eem_table(out / "eem.csv", dataset.eems, force),
        "uv": write_uv_table(out / "uv.csv", dataset.uv_records, force),
        "truth": write_text(out / "truth.json", json.dumps(truth.to_dict(), indent=1, sort_keys=True), force),
    }
    return paths
