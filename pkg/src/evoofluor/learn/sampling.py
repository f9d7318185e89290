"""Minority-class oversampling."""

from __future__ import annotations

import numpy as np

from ..errors import SingleClassError


def oversample_indices(y, rng):
    """Row indices of a class-balanced resample of ``y``, in shuffled order.

    The minority class is copied whole ``(n_maj - n_min) // n_min`` extra times
    and the remainder is drawn from it without replacement, so no copy count
    differs from another by more than one. Majority rows appear exactly once.
    """
    y = np.asarray(y)
    classes, counts = np.unique(y, return_counts=True)
    if classes.size < 2:
        raise SingleClassError("oversampling needs both classes present")
    minority = classes[np.argmin(counts)]
    n_min, n_maj = int(counts.min()), int(counts.max())
    min_idx = np.flatnonzero(y == minority)
    reps, rem = divmod(n_maj - n_min, n_min)
    extra = [min_idx] * reps
    if rem:
        extra.append(rng.choice(min_idx, size=rem, replace=False))
    idx = np.concatenate([np.arange(y.size)] + extra)
    return idx[rng.permutation(idx.size)]
