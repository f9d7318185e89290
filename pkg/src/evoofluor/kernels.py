"""Inner-loop kernels with a numba path and a pure-numpy path.

Every kernel exists twice (``*_numba`` / ``*_numpy``) with identical
floating-point semantics; the public name is bound to one of them at import
according to :mod:`evoofluor._accel`. The tests run both and require equal
output.
"""

import numpy as np

from ._accel import USE_NUMBA, njit

__all__ = ["mask_windows", "row_sq_norms", "best_split"]


# -- Rayleigh window masking -------------------------------------------------

def mask_windows_numpy(intensity, centers, half_width):
    out = np.array(intensity, dtype=np.float64, copy=True)
    n_em = out.shape[1]
    cols = np.arange(n_em)[None, :]
    c = np.asarray(centers, dtype=np.int64)[:, None]
    hit = (cols >= c - half_width) & (cols <= c + half_width)
    out[hit] = 0.0
    return out


@njit
def mask_windows_numba(intensity, centers, half_width):
    out = intensity.copy()
    n_ex, n_em = out.shape
    for i in range(n_ex):
        lo = max(centers[i] - half_width, 0)
        hi = min(centers[i] + half_width, n_em - 1)
        for j in range(lo, hi + 1):
            out[i, j] = 0.0
    return out


# -- per-row squared norms for the relative error ----------------------------

def row_sq_norms_numpy(reference, aged):
    diff = reference - aged
    return np.einsum("ij,ij->i", diff, diff), np.einsum("ij,ij->i", reference, reference)


@njit
def row_sq_norms_numba(reference, aged):
    n, m = reference.shape
    num = np.zeros(n)
    den = np.zeros(n)
    for i in range(n):
        s = 0.0
        r = 0.0
        for j in range(m):
            d = reference[i, j] - aged[i, j]
            s += d * d
            r += reference[i, j] * reference[i, j]
        num[i] = s
        den[i] = r
    return num, den


# -- weighted Gini split search ----------------------------------------------
#
# Returns (feature, threshold, impurity); feature == -1 when no feature has
# two distinct values. With first_valid the search stops at the first feature
# (in the given order) that admits a split. Samples with x <= threshold go left.

def best_split_numpy(X, y, w, features, first_valid):
    best_f, best_t, best_imp = -1, 0.0, np.inf
    for f in features:
        order = np.argsort(X[:, f], kind="mergesort")
        xs = X[order, f]
        ws = w[order]
        w1 = ws * (y[order] == 1)
        w0 = ws * (y[order] != 1)
        l1 = np.cumsum(w1)
        l0 = np.cumsum(w0)
        t1, t0 = l1[-1], l0[-1]
        l1, l0 = l1[:-1], l0[:-1]
        r1 = t1 - l1
        r0 = t0 - l0
        wl = l1 + l0
        wr = r1 + r0
        valid = (xs[1:] > xs[:-1]) & (wl > 0) & (wr > 0)
        if not valid.any():
            continue
        with np.errstate(divide="ignore", invalid="ignore"):
            imp = (wl - (l1 * l1 + l0 * l0) / wl) + (wr - (r1 * r1 + r0 * r0) / wr)
        imp = np.where(valid, imp, np.inf)
        i = int(np.argmin(imp))
        if imp[i] < best_imp:
            mid = (xs[i] + xs[i + 1]) / 2.0
            if mid >= xs[i + 1]:
                mid = xs[i]
            best_f, best_t, best_imp = int(f), float(mid), float(imp[i])
        if first_valid:
            break
    return best_f, best_t, best_imp


@njit
def best_split_numba(X, y, w, features, first_valid):
    n = X.shape[0]
    best_f = -1
    best_t = 0.0
    best_imp = np.inf
    for fi in range(features.shape[0]):
        f = features[fi]
        col = X[:, f].copy()
        order = np.argsort(col, kind="mergesort")
        t1 = 0.0
        t0 = 0.0
        for i in range(n):
            k = order[i]
            if y[k] == 1:
                t1 += w[k]
            else:
                t0 += w[k]
        l1 = 0.0
        l0 = 0.0
        found = False
        f_imp = np.inf
        f_i = -1
        for i in range(n - 1):
            k = order[i]
            if y[k] == 1:
                l1 += w[k]
            else:
                l0 += w[k]
            if col[order[i + 1]] <= col[k]:
                continue
            r1 = t1 - l1
            r0 = t0 - l0
            wl = l1 + l0
            wr = r1 + r0
            if wl <= 0.0 or wr <= 0.0:
                continue
            imp = (wl - (l1 * l1 + l0 * l0) / wl) + (wr - (r1 * r1 + r0 * r0) / wr)
            found = True
            if imp < f_imp:
                f_imp = imp
                f_i = i
        if not found:
            continue
        if f_imp < best_imp:
            a = col[order[f_i]]
            b = col[order[f_i + 1]]
            mid = (a + b) / 2.0
            if mid >= b:
                mid = a
            best_f = f
            best_t = mid
            best_imp = f_imp
        if first_valid:
            break
    return best_f, best_t, best_imp


def _bind():
    if USE_NUMBA:
        return mask_windows_numba, row_sq_norms_numba, best_split_numba
    return mask_windows_numpy, row_sq_norms_numpy, best_split_numpy


_mask, _norms, _split = _bind()


def mask_windows(intensity, centers, half_width):
    """Zero ``[c - half_width, c + half_width]`` in each row, clipped to the row."""
    return _mask(np.ascontiguousarray(intensity, dtype=np.float64),
                 np.ascontiguousarray(centers, dtype=np.int64), int(half_width))


def row_sq_norms(reference, aged):
    """Per-row ``(||ref - aged||^2, ||ref||^2)``."""
    return _norms(np.ascontiguousarray(reference, dtype=np.float64),
                  np.ascontiguousarray(aged, dtype=np.float64))


def best_split(X, y, w, features, first_valid=False):
    return _split(np.ascontiguousarray(X, dtype=np.float64),
                  np.ascontiguousarray(y, dtype=np.int64),
                  np.ascontiguousarray(w, dtype=np.float64),
                  np.ascontiguousarray(features, dtype=np.int64),
                  bool(first_valid))
