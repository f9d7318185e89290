"""Relative-Error features and excitation-wavelength selection."""

from __future__ import annotations

import warnings
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import (
    EmptyVotesError,
    InsufficientWavelengthsError,
    LengthMismatchError,
    MissingSampleError,
    ValidationError,
    ZeroReferenceError,
)

__all__ = [
    "REFeature",
    "WavelengthVote",
    "SelectedWavelengths",
    "DegenerateProfileWarning",
    "relative_error",
    "relative_errors",
    "re_profile",
    "re_table",
    "vote_wavelengths",
    "select_wavelengths",
]


class DegenerateProfileWarning(UserWarning):
    """An RE profile is flat, so its argmax is decided by the tie-break alone."""


@dataclass(frozen=True)
class REFeature:
    oil_label: str
    ageing_step: int
    excitation_nm: float
    value: float
    replicate: int | None = None

    def __post_init__(self):
        if not np.isfinite(self.value) or self.value < 0:
            raise ValidationError(f"RE must be finite and >= 0, got {self.value}")


@dataclass(frozen=True)
class WavelengthVote:
    oil_label: str
    winning_wavelength_nm: float


@dataclass(frozen=True)
class SelectedWavelengths:
    primary_nm: float
    secondary_nm: float | None
    vote_counts: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.secondary_nm is not None:
            if self.secondary_nm == self.primary_nm:
                raise ValidationError("primary and secondary wavelengths coincide")
            if self.vote_counts.get(self.secondary_nm, 0) > self.vote_counts.get(self.primary_nm, 0):
                raise ValidationError("secondary wavelength outvotes the primary")

    def describe(self):
        ordered = sorted(self.vote_counts.items(), key=lambda kv: (-kv[1], kv[0]))
        return ", ".join(f"{_fmt_nm(w)} nm ({c})" for w, c in ordered)


def _fmt_nm(w):
    return f"{w:g}"


def relative_error(reference, aged):
    """``||reference - aged||^2 / ||reference||^2`` for two emission spectra."""
    ref = np.asarray(reference, dtype=np.float64)
    age = np.asarray(aged, dtype=np.float64)
    if ref.shape != age.shape or ref.ndim != 1:
        raise LengthMismatchError(f"spectra have shapes {ref.shape} and {age.shape}")
    num, den = kernels.row_sq_norms(ref[None, :], age[None, :])
    if den[0] == 0.0:
        raise ZeroReferenceError("reference spectrum has zero norm")
    return float(num[0] / den[0])


def relative_errors(reference, aged):
    """Row-wise relative error of two (n_excitation, n_emission) matrices."""
    ref = np.asarray(reference, dtype=np.float64)
    age = np.asarray(aged, dtype=np.float64)
    if ref.shape != age.shape or ref.ndim != 2:
        raise LengthMismatchError(f"matrices have shapes {ref.shape} and {age.shape}")
    num, den = kernels.row_sq_norms(ref, age)
    if np.any(den == 0.0):
        raise ZeroReferenceError(
            f"reference has zero norm at {int(np.sum(den == 0.0))} excitation row(s)")
    return num / den


def re_profile(dataset, oil_label, step, replicate=None):
    """RE at every excitation wavelength for one oil and ageing step.

    The fresh reference is the mean of the oil's masked step-0 replicates. The
    aged spectrum is the mean of the step-``step`` replicates, or a single
    replicate when ``replicate`` is given.
    """
    missing = []
    if not dataset.replicates(oil_label, 0):
        missing.append((oil_label, 0))
    if not dataset.replicates(oil_label, step):
        missing.append((oil_label, step))
    if missing:
        raise MissingSampleError(missing)
    ref = dataset.intensity(oil_label, 0)
    aged = dataset.intensity(oil_label, step, replicate=replicate)
    values = relative_errors(ref, aged)
    return [REFeature(oil_label, step, float(w), float(v), replicate)
            for w, v in zip(dataset.grid.excitation_nm, values)]


def re_table(dataset, steps=None):
    """Every RE feature for every oil and available step (fresh step included)."""
    rows = []
    for oil in dataset.oils:
        for step in (dataset.steps(oil) if steps is None else steps):
            rows.extend(re_profile(dataset, oil, step))
    return rows


def _argmax_low(profile):
    values = np.array([f.value for f in profile])
    best = values.max()
    winners = [f.excitation_nm for f, v in zip(profile, values) if v == best]
    return min(winners), len(winners) > 1


def vote_wavelengths(dataset, step=9, oils=None):
    """Each oil votes for the excitation wavelength with the largest RE at ``step``."""
    oils = dataset.oils if oils is None else oils
    missing = [(o, s) for o in oils for s in (0, step) if not dataset.replicates(o, s)]
    if missing:
        raise MissingSampleError(missing)
    votes = []
    for oil in oils:
        wl, tied = _argmax_low(re_profile(dataset, oil, step))
        if tied:
            warnings.warn(f"oil {oil}: RE profile has a tied maximum; voting for {wl:g} nm",
                          DegenerateProfileWarning, stacklevel=2)
        votes.append(WavelengthVote(oil, wl))
    return votes


def _merge_adjacent(raw, step_nm):
    # Wavelengths are visited in descending raw count (ties low first); each
    # unabsorbed wavelength absorbs its unabsorbed +/- one-step neighbours.
    # An absorbed wavelength never absorbs further, so there is no chaining.
    order = sorted(raw, key=lambda w: (-raw[w], w))
    absorbed = set()
    merged = {}
    for w in order:
        if w in absorbed:
            continue
        total = raw[w]
        for n in sorted(raw):
            if n != w and n not in absorbed and n not in merged \
                    and abs(abs(n - w) - step_nm) < 1e-6:
                total += raw[n]
                absorbed.add(n)
        merged[w] = total
    return merged


def select_wavelengths(votes, step_nm=10.0, require_two=True):
    """Merge votes one grid step apart and pick the two most common wavelengths."""
    votes = list(votes)
    if not votes:
        raise EmptyVotesError("no wavelength votes")
    raw = Counter(float(v.winning_wavelength_nm) for v in votes)
    merged = _merge_adjacent(dict(raw), step_nm)
    ranked = sorted(merged.items(), key=lambda kv: (-kv[1], kv[0]))
    primary = ranked[0][0]
    secondary = ranked[1][0] if len(ranked) > 1 else None
    if secondary is None and require_two:
        raise InsufficientWavelengthsError(
            f"only one distinct wavelength after merging ({primary:g} nm)")
    return SelectedWavelengths(primary, secondary, dict(ranked))
