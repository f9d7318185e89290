"""EEM data model, Rayleigh-scatter masking and spectrum helpers."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import (
    GridMismatchError,
    OilMismatchError,
    UnknownWavelengthError,
    ValidationError,
)

__all__ = [
    "AGEING_DAYS",
    "OIL_LABELS",
    "RAYLEIGH_HALF_WIDTH",
    "WavelengthGrid",
    "SampleMeta",
    "EEM",
    "mask_rayleigh",
    "rayleigh_centers",
    "emission_spectrum",
    "diff_eem",
]

# ageing step -> days at 60 C
AGEING_DAYS = {0: 0, 1: 2, 2: 4, 3: 7, 4: 9, 5: 18, 6: 27, 7: 36, 8: 45, 9: 53}
OIL_LABELS = tuple(chr(c) for c in range(ord("A"), ord("X") + 1))
RAYLEIGH_HALF_WIDTH = 5

_STEP_TOL = 1e-9


def _uniform_axis(values, name):
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 1 or arr.size < 1:
        raise ValidationError(f"{name} must be a non-empty 1-D sequence")
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{name} contains non-finite values")
    if arr.size > 1:
        steps = np.diff(arr)
        if np.any(steps <= 0):
            raise ValidationError(f"{name} must be strictly increasing")
        if np.max(np.abs(steps - steps[0])) > _STEP_TOL * max(1.0, abs(steps[0])):
            raise ValidationError(f"{name} must have a uniform step")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class WavelengthGrid:
    """Excitation and emission axes in nm.

    Defaults to the instrument grid: excitation 300-650 nm step 10 (36 values),
    emission 300-800 nm step 2 (251 values).
    """

    excitation_nm: np.ndarray = field(default_factory=lambda: np.arange(300.0, 651.0, 10.0))
    emission_nm: np.ndarray = field(default_factory=lambda: np.arange(300.0, 801.0, 2.0))

    def __post_init__(self):
        object.__setattr__(self, "excitation_nm", _uniform_axis(self.excitation_nm, "excitation_nm"))
        object.__setattr__(self, "emission_nm", _uniform_axis(self.emission_nm, "emission_nm"))

    @property
    def shape(self):
        return (self.excitation_nm.size, self.emission_nm.size)

    @property
    def emission_step(self):
        em = self.emission_nm
        return float(em[1] - em[0]) if em.size > 1 else 0.0

    @property
    def excitation_step(self):
        ex = self.excitation_nm
        return float(ex[1] - ex[0]) if ex.size > 1 else 0.0

    def excitation_index(self, wavelength):
        """Index of ``wavelength`` on the excitation axis; raises if off-grid."""
        hits = np.flatnonzero(np.abs(self.excitation_nm - float(wavelength)) <= 1e-6)
        if hits.size == 0:
            raise UnknownWavelengthError(f"{wavelength} nm is not on the excitation grid")
        return int(hits[0])

    def __eq__(self, other):
        if not isinstance(other, WavelengthGrid):
            return NotImplemented
        return (self.shape == other.shape
                and np.allclose(self.excitation_nm, other.excitation_nm, rtol=0, atol=1e-6)
                and np.allclose(self.emission_nm, other.emission_nm, rtol=0, atol=1e-6))

    def __hash__(self):
        return hash((self.shape, float(self.excitation_nm[0]), float(self.emission_nm[0])))


DEFAULT_GRID = WavelengthGrid()


@dataclass(frozen=True)
class SampleMeta:
    oil_label: str
    ageing_step: int
    ageing_days: int | None = None
    replicate: int = 1

    def __post_init__(self):
        if self.oil_label not in OIL_LABELS:
            raise ValidationError(f"unknown oil label {self.oil_label!r} (expected A-X)")
        step = int(self.ageing_step)
        if step not in AGEING_DAYS:
            raise ValidationError(f"ageing step {self.ageing_step} outside 0-9")
        days = AGEING_DAYS[step] if self.ageing_days is None else int(self.ageing_days)
        if days != AGEING_DAYS[step]:
            raise ValidationError(
                f"ageing step {step} lasts {AGEING_DAYS[step]} days, got {self.ageing_days}")
        if int(self.replicate) not in (1, 2, 3):
            raise ValidationError(f"replicate {self.replicate} outside 1-3")
        object.__setattr__(self, "ageing_step", step)
        object.__setattr__(self, "ageing_days", days)
        object.__setattr__(self, "replicate", int(self.replicate))

    @property
    def key(self):
        return (self.oil_label, self.ageing_step, self.replicate)


@dataclass(frozen=True, eq=False)
class EEM:
    """One excitation-emission matrix; ``intensity`` is read-only."""

    grid: WavelengthGrid
    intensity: np.ndarray
    meta: SampleMeta

    def __post_init__(self):
        arr = np.array(self.intensity, dtype=np.float64, copy=True)
        if arr.shape != self.grid.shape:
            raise ValidationError(f"intensity shape {arr.shape} does not match grid {self.grid.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValidationError(f"non-finite intensity in sample {self.meta.key}")
        if np.any(arr < 0):
            raise ValidationError(f"negative intensity in sample {self.meta.key}")
        arr.setflags(write=False)
        object.__setattr__(self, "intensity", arr)

    def with_intensity(self, intensity):
        return EEM(self.grid, intensity, self.meta)


def rayleigh_centers(grid):
    """Emission index nearest each excitation wavelength (ties to the lower index).

    Centres are not clipped; an excitation far outside the emission range gives
    a window that falls entirely off the row and masks nothing.
    """
    em0 = float(grid.emission_nm[0])
    step = grid.emission_step
    if step == 0.0:
        return np.zeros(grid.excitation_nm.size, dtype=np.int64)
    pos = (grid.excitation_nm - em0) / step
    # round-half-down; the epsilon absorbs representation error in pos
    return np.array([math.ceil(p - 0.5 - 1e-9) for p in pos], dtype=np.int64)


def mask_rayleigh(eem, half_width=RAYLEIGH_HALF_WIDTH):
    """Zero the 11-pixel Rayleigh window around each excitation wavelength.

    Returns a new :class:`EEM`; the input is left unmodified.
    """
    masked = kernels.mask_windows(eem.intensity, rayleigh_centers(eem.grid), half_width)
    return eem.with_intensity(masked)


def emission_spectrum(eem, excitation_nm):
    return np.array(eem.intensity[eem.grid.excitation_index(excitation_nm)], copy=True)


def diff_eem(aged, fresh):
    """Signed difference ``aged - fresh``."""
    if aged.grid != fresh.grid:
        raise GridMismatchError("EEMs are on different wavelength grids")
    if aged.meta.oil_label != fresh.meta.oil_label:
        raise OilMismatchError(
            f"cannot difference oil {aged.meta.oil_label} against oil {fresh.meta.oil_label}")
    return aged.intensity - fresh.intensity
