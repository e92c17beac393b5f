"""Tiny static SVG 1.1 writer for line charts and contour plots.

No scripting, no external references; output is deterministic text.
"""
from xml.sax.saxutils import escape

import numpy as np

WIDTH, HEIGHT = 640, 440
MARGIN = dict(left=70, right=150, top=40, bottom=60)
DASHES = {"solid": None, "dashed": "8,4", "dotted": "2,4"}
PALETTE = ("#1f4e9c", "#c0392b", "#27ae60", "#8e44ad", "#d35400", "#2c3e50")


def _fmt(v):
    return f"{v:.2f}".rstrip("0").rstrip(".")


def _nice_ticks(lo, hi, n=5):
    if hi <= lo:
        hi = lo + 1.0
    raw = (hi - lo) / n
    mag = 10 ** np.floor(np.log10(raw))
    step = min((m * mag for m in (1, 2, 2.5, 5, 10) if m * mag >= raw), default=raw)
    start = np.ceil(lo / step - 1e-9) * step
    ticks = np.arange(start, hi + step * 1e-6, step)
    return [float(t) for t in ticks]


class _Frame:
    def __init__(self, xlim, ylim):
        self.x0, self.x1 = xlim
        self.y0, self.y1 = ylim
        self.pw = WIDTH - MARGIN["left"] - MARGIN["right"]
        self.ph = HEIGHT - MARGIN["top"] - MARGIN["bottom"]

    def px(self, x):
        return MARGIN["left"] + (x - self.x0) / (self.x1 - self.x0) * self.pw

    def py(self, y):
        return MARGIN["top"] + (1 - (y - self.y0) / (self.y1 - self.y0)) * self.ph


def _axes(frame, xlabel, ylabel, title):
    out = []
    l, t = MARGIN["left"], MARGIN["top"]
    out.append(
        f'<rect x="{l}" y="{t}" width="{frame.pw}" height="{frame.ph}" '
        'fill="none" stroke="#333" stroke-width="1"/>'
    )
    for xt in _nice_ticks(frame.x0, frame.x1):
        if frame.x0 - 1e-12 <= xt <= frame.x1 + 1e-12:
            x = frame.px(xt)
            out.append(f'<line x1="{_fmt(x)}" y1="{t + frame.ph}" x2="{_fmt(x)}" y2="{t + frame.ph + 5}" stroke="#333"/>')
            out.append(
                f'<text x="{_fmt(x)}" y="{t + frame.ph + 20}" font-size="12" text-anchor="middle">{xt:g}</text>'
            )
    for yt in _nice_ticks(frame.y0, frame.y1):
        if frame.y0 - 1e-12 <= yt <= frame.y1 + 1e-12:
            y = frame.py(yt)
            out.append(f'<line x1="{l - 5}" y1="{_fmt(y)}" x2="{l}" y2="{_fmt(y)}" stroke="#333"/>')
            out.append(
                f'<text x="{l - 8}" y="{_fmt(y + 4)}" font-size="12" text-anchor="end">{yt:g}</text>'
            )
    out.append(
        f'<text x="{l + frame.pw / 2:.1f}" y="{HEIGHT - 15}" font-size="14" '
        f'text-anchor="middle">{escape(xlabel)}</text>'
    )
    cy = t + frame.ph / 2
    out.append(
        f'<text x="18" y="{cy:.1f}" font-size="14" text-anchor="middle" '
        f'transform="rotate(-90 18 {cy:.1f})">{escape(ylabel)}</text>'
    )
    if title:
        out.append(
            f'<text x="{l + frame.pw / 2:.1f}" y="24" font-size="15" text-anchor="middle">{escape(title)}</text>'
        )
    return out


def _document(body):
    head = (
        '<?xml version="1.0" encoding="UTF-8" standalone="no"?>\n'
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif">\n'
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>\n'
    )
    return head + "\n".join(body) + "\n</svg>\n"


def line_chart(x, series, xlabel, ylabel, title="", ylim=None):
    """Render one or more curves sharing the abscissa ``x``.

    ``series`` is a list of ``(label, values, style)`` with style one of
    ``solid``, ``dashed``, ``dotted``.
    """
    x = np.asarray(x, dtype=float)
    allv = np.concatenate([np.asarray(v, dtype=float) for _, v, _ in series])
    if ylim is None:
        lo, hi = float(allv.min()), float(allv.max())
        pad = 0.05 * (hi - lo or 1.0)
        ylim = (lo - pad, hi + pad)
    frame = _Frame((float(x.min()), float(x.max())), ylim)
    body = _axes(frame, xlabel, ylabel, title)
    for k, (label, vals, style) in enumerate(series):
        color = PALETTE[k % len(PALETTE)]
        pts = " ".join(f"{_fmt(frame.px(a))},{_fmt(frame.py(b))}" for a, b in zip(x, vals))
        dash = DASHES[style]
        dash_attr = f' stroke-dasharray="{dash}"' if dash else ""
        body.append(f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="2"{dash_attr}/>')
        ly = MARGIN["top"] + 20 + 22 * k
        lx = WIDTH - MARGIN["right"] + 12
        body.append(
            f'<line x1="{lx}" y1="{ly}" x2="{lx + 28}" y2="{ly}" stroke="{color}" stroke-width="2"{dash_attr}/>'
        )
        body.append(f'<text x="{lx + 34}" y="{ly + 4}" font-size="12">{escape(label)}</text>')
    return _document(body)


# marching squares: corner bits (bl=1, br=2, tr=4, tl=8) -> edge pairs
_CASES = {
    1: [(3, 0)], 2: [(0, 1)], 3: [(3, 1)], 4: [(1, 2)], 5: [(3, 2), (0, 1)],
    6: [(0, 2)], 7: [(3, 2)], 8: [(2, 3)], 9: [(0, 2)], 10: [(0, 3), (1, 2)],
    11: [(1, 2)], 12: [(1, 3)], 13: [(0, 1)], 14: [(0, 3)],
}


def contour_segments(xs, ys, z, level):
    """Line segments of the iso-line ``z == level`` on a rectilinear grid.

    ``z[i, j]`` is the value at ``(xs[j], ys[i])``.
    """
    segs = []
    for i in range(len(ys) - 1):
        for j in range(len(xs) - 1):
            c = (z[i, j], z[i, j + 1], z[i + 1, j + 1], z[i + 1, j])  # bl, br, tr, tl
            idx = sum(1 << k for k, v in enumerate(c) if v > level)
            if idx in (0, 15):
                continue
            corners = ((xs[j], ys[i]), (xs[j + 1], ys[i]), (xs[j + 1], ys[i + 1]), (xs[j], ys[i + 1]))

            def edge(e):
                a, b = e, (e + 1) % 4
                va, vb = c[a], c[b]
                f = 0.5 if va == vb else (level - va) / (vb - va)
                (xa, ya), (xb, yb) = corners[a], corners[b]
                return (xa + f * (xb - xa), ya + f * (yb - ya))

            for e1, e2 in _CASES[idx]:
                segs.append((edge(e1), edge(e2)))
    return segs


def contour_chart(xs, ys, z, levels, xlabel, ylabel, title=""):
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    z = np.asarray(z, dtype=float)
    frame = _Frame((xs[0], xs[-1]), (ys[0], ys[-1]))
    body = _axes(frame, xlabel, ylabel, title)
    for k, level in enumerate(levels):
        color = PALETTE[k % len(PALETTE)]
        parts = []
        for (xa, ya), (xb, yb) in contour_segments(xs, ys, z, level):
            parts.append(f"M{_fmt(frame.px(xa))},{_fmt(frame.py(ya))}L{_fmt(frame.px(xb))},{_fmt(frame.py(yb))}")
        if parts:
            body.append(f'<path d="{"".join(parts)}" fill="none" stroke="{color}" stroke-width="1.5"/>')
        ly = MARGIN["top"] + 20 + 20 * k
        lx = WIDTH - MARGIN["right"] + 12
        body.append(f'<line x1="{lx}" y1="{ly}" x2="{lx + 24}" y2="{ly}" stroke="{color}" stroke-width="1.5"/>')
        body.append(f'<text x="{lx + 30}" y="{ly + 4}" font-size="12">{level:.3g}</text>')
    return _document(body)
