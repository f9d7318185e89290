"""In-memory dataset of EEMs and UV records, and the completeness registry."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import GridMismatchError, MissingSampleError, ValidationError
from .spectra import AGEING_DAYS, DEFAULT_GRID, OIL_LABELS, mask_rayleigh

__all__ = ["Dataset", "DatasetRegistry", "OIL_ORIGINS", "EXPECTED_REPLICATES"]

EXPECTED_REPLICATES = (1, 2, 3)

OIL_ORIGINS = {
    "A": "IT", "B": "ES", "C": "IT", "D": "IT, Tuscany", "E": "IT", "F": "IT",
    "G": "ES", "H": "GR", "I": "IT", "J": "ES", "K": "GR", "L": "ES",
    "M": "EU", "N": "PT", "O": "ES", "P": "GR", "Q": "ES, Mallorca", "R": "GR",
    "S": "IT, Sicily", "T": "IT, Sardinia", "U": "ES", "V": "IT", "W": "IT",
    "X": "IT, ES, GR",
}


class Dataset:
    """EEMs keyed by (oil, step, replicate) plus UV records keyed by (oil, step).

    EEMs are kept in canonical (oil, step, replicate) order. Replicate means
    used by the feature code are cached; the dataset itself never changes.
    """

    def __init__(self, eems=(), uv=()):
        self._eems = {}
        grid = None
        for e in eems:
            if grid is None:
                grid = e.grid
            elif e.grid != grid:
                raise GridMismatchError(f"sample {e.meta.key} is on a different grid")
            if e.meta.key in self._eems:
                raise ValidationError(f"duplicate sample {e.meta.key}")
            self._eems[e.meta.key] = e
        self._eems = dict(sorted(self._eems.items()))
        self._uv = {}
        for r in uv:
            key = (r.oil_label, r.ageing_step)
            if key in self._uv:
                raise ValidationError(f"duplicate UV record {key}")
            self._uv[key] = r
        self._uv = dict(sorted(self._uv.items()))
        self.grid = grid if grid is not None else DEFAULT_GRID
        self._mean_cache = {}

    def __repr__(self):
        return f"Dataset({len(self._eems)} EEMs, {len(self._uv)} UV records)"

    @property
    def eems(self):
        return list(self._eems.values())

    @property
    def uv_records(self):
        return list(self._uv.values())

    @cached_property
    def oils(self):
        labels = {k[0] for k in self._eems} | {k[0] for k in self._uv}
        return sorted(labels)

    def steps(self, oil):
        return sorted({k[1] for k in self._eems if k[0] == oil})

    def replicates(self, oil, step):
        return [e for k, e in self._eems.items() if k[0] == oil and k[1] == step]

    def eem(self, oil, step, replicate):
        try:
            return self._eems[(oil, step, replicate)]
        except KeyError:
            raise MissingSampleError([(oil, step, replicate)]) from None

    def uv(self, oil, step):
        try:
            return self._uv[(oil, step)]
        except KeyError:
            raise MissingSampleError([(oil, step)]) from None

    def has_uv(self, oil, step):
        return (oil, step) in self._uv

    def intensity(self, oil, step, replicate=None, masked=True):
        """Intensity of one replicate or, with ``replicate=None``, the replicate mean."""
        key = (oil, step, replicate, masked)
        cached = self._mean_cache.get(key)
        if cached is not None:
            return cached
        if replicate is None:
            reps = self.replicates(oil, step)
            if not reps:
                raise MissingSampleError([(oil, step)])
        else:
            reps = [self.eem(oil, step, replicate)]
        if masked:
            reps = [mask_rayleigh(e) for e in reps]
        out = np.mean(np.stack([e.intensity for e in reps]), axis=0)
        out.setflags(write=False)
        self._mean_cache[key] = out
        return out

    def subset(self, oils):
        keep = set(oils)
        return Dataset([e for k, e in self._eems.items() if k[0] in keep],
                       [r for k, r in self._uv.items() if k[0] in keep])


@dataclass
class DatasetRegistry:
    """Completeness report against the full 24 x 10 x 3 design."""

    oils: dict = field(default_factory=lambda: dict(OIL_ORIGINS))
    grid: object = DEFAULT_GRID
    present: list = field(default_factory=list)
    uv_present: list = field(default_factory=list)

    @classmethod
    def from_dataset(cls, dataset):
        return cls(grid=dataset.grid,
                   present=[e.meta.key for e in dataset.eems],
                   uv_present=[(r.oil_label, r.ageing_step) for r in dataset.uv_records])

    @property
    def expected(self):
        return [(o, s, r) for o in OIL_LABELS for s in AGEING_DAYS for r in EXPECTED_REPLICATES]

    @property
    def expected_count(self):
        return len(self.expected)

    @property
    def gaps(self):
        have = set(self.present)
        return [k for k in self.expected if k not in have]

    @property
    def uv_expected(self):
        return [(o, s) for o in OIL_LABELS for s in AGEING_DAYS]

    @property
    def uv_gaps(self):
        have = set(self.uv_present)
        return [k for k in self.uv_expected if k not in have]

    @property
    def complete(self):
        return not self.gaps and not self.uv_gaps

    def summary(self):
        lines = [
            f"EEMs: {len(self.present)}/{self.expected_count} present",
            f"UV records: {len(self.uv_present)}/{len(self.uv_expected)} present",
            f"grid: excitation {self.grid.shape[0]} x emission {self.grid.shape[1]}",
        ]
        if self.gaps:
            lines.append(f"missing EEMs ({len(self.gaps)}): "
                         + ", ".join(f"{o}/{s}/{r}" for o, s, r in self.gaps))
        if self.uv_gaps:
            lines.append(f"missing UV records ({len(self.uv_gaps)}): "
                         + ", ".join(f"{o}/{s}" for o, s in self.uv_gaps))
        return "\n".join(lines)
