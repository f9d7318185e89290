"""Independent reference implementations used only by the tests."""


def relative_error_loop(reference, aged):
    """Explicit-loop relative error: sum of squared differences over sum of squares."""
    num = 0.0
    den = 0.0
    for r, a in zip(reference, aged):
        num += (r - a) * (r - a)
        den += r * r
    return num / den


def mask_window_loop(row, center, half=5):
    """Zero the window around ``center`` in a plain list."""
    out = list(row)
    for j in range(len(out)):
        if center - half <= j <= center + half:
            out[j] = 0.0
    return out
