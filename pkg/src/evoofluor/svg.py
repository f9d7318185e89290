"""Tiny SVG writer for line and grouped bar charts (no plotting dependency)."""

from __future__ import annotations

from xml.sax.saxutils import escape

W, H = 640, 400
PAD = 50
PALETTE = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b"]


def _scale(lo, hi, a, b):
    span = (hi - lo) or 1.0
    return lambda v: a + (v - lo) / span * (b - a)


def _frame(title, body):
    return (f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" '
            f'font-family="sans-serif" font-size="11">\n'
            f'<rect width="{W}" height="{H}" fill="white"/>\n'
            f'<text x="{W / 2}" y="20" text-anchor="middle" font-size="13">{escape(title)}</text>\n'
            f'<line x1="{PAD}" y1="{H - PAD}" x2="{W - PAD}" y2="{H - PAD}" stroke="black"/>\n'
            f'<line x1="{PAD}" y1="{PAD}" x2="{PAD}" y2="{H - PAD}" stroke="black"/>\n'
            + "".join(body) + "</svg>\n")


def line_chart(x, series, title="", highlight=None, hline=None):
    """``series`` maps name -> y values; ``highlight`` is drawn thick and black."""
    ys = [v for vals in series.values() for v in vals]
    if hline is not None:
        ys.append(hline)
    sx = _scale(min(x), max(x), PAD, W - PAD)
    sy = _scale(min(ys), max(ys), H - PAD, PAD)
    body = []
    for name, vals in series.items():
        pts = " ".join(f"{sx(a):.2f},{sy(b):.2f}" for a, b in zip(x, vals))
        style = 'stroke="black" stroke-width="3"' if name == highlight else 'stroke="#999" stroke-width="1"'
        body.append(f'<polyline fill="none" {style} points="{pts}"><title>{escape(str(name))}</title></polyline>\n')
    if hline is not None:
        y = sy(hline)
        body.append(f'<line x1="{PAD}" y1="{y:.2f}" x2="{W - PAD}" y2="{y:.2f}" stroke="red"/>\n')
    body.append(f'<text x="{PAD}" y="{H - PAD + 15}">{min(x):g}</text>'
                f'<text x="{W - PAD}" y="{H - PAD + 15}" text-anchor="end">{max(x):g}</text>\n')
    body.append(f'<text x="{PAD - 5}" y="{H - PAD}" text-anchor="end">{min(ys):.3g}</text>'
                f'<text x="{PAD - 5}" y="{PAD}" text-anchor="end">{max(ys):.3g}</text>\n')
    return _frame(title, body)


def bar_chart(groups, metrics, values, title=""):
    """Grouped bars; ``values[(group, metric)]`` in [0, 1] or ``None`` (drawn as a gap)."""
    sy = _scale(0.0, 1.0, H - PAD, PAD)
    slot = (W - 2 * PAD) / max(len(groups), 1)
    bw = slot / (len(metrics) + 1)
    body = []
    for gi, g in enumerate(groups):
        x0 = PAD + gi * slot + bw / 2
        for mi, m in enumerate(metrics):
            v = values.get((g, m))
            if v is None:
                continue
            y = sy(v)
            body.append(f'<rect x="{x0 + mi * bw:.2f}" y="{y:.2f}" width="{bw * 0.9:.2f}" '
                        f'height="{H - PAD - y:.2f}" fill="{PALETTE[mi % len(PALETTE)]}">'
                        f'<title>{escape(f"{g} {m}: {v:.3f}")}</title></rect>\n')
        body.append(f'<text x="{PAD + (gi + 0.5) * slot:.2f}" y="{H - PAD + 15}" '
                    f'text-anchor="middle">{escape(str(g))}</text>\n')
    for mi, m in enumerate(metrics):
        body.append(f'<rect x="{W - PAD - 90}" y="{PAD + 14 * mi}" width="10" height="10" '
                    f'fill="{PALETTE[mi % len(PALETTE)]}"/><text x="{W - PAD - 75}" '
                    f'y="{PAD + 9 + 14 * mi}">{escape(m)}</text>\n')
    return _frame(title, body)
