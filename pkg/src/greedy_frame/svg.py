"""Dependency-free SVG chart of a StatsSummary.

One ``<polyline>`` per algorithm mean and one translucent ``<polygon>`` per
p10-p90 band.  Coordinates are rounded to 3 decimals so the output is stable.
"""
import math
from xml.sax.saxutils import escape

import numpy as np

COLORS = ("#000000", "#1f4fd8", "#d8431f", "#1f9d4a", "#8a2be2")
WIDTH, HEIGHT = 640, 420
LEFT, RIGHT, TOP, BOTTOM = 80, 20, 30, 70


def _nice_linear_ticks(lo, hi, n=5):
    if hi <= lo:
        return [lo]
    raw = (hi - lo) / n
    mag = 10 ** math.floor(math.log10(raw))
    step = min((m * mag for m in (1, 2, 5, 10) if m * mag >= raw), default=10 * mag)
    start = math.ceil(lo / step) * step
    return [start + k * step for k in range(int((hi - start) / step + 1e-9) + 1)]


def write_svg(summary, path, log_scale: bool = True, title: str = "") -> None:
    """Render mean curves with shaded 10th-90th percentile bands."""
    names = list(summary.stats)
    iters = max(summary.iters, 1)

    clamped = False
    vals = [np.concatenate([s.mean, s.p10, s.p90]) for s in summary.stats.values()]
    allv = np.concatenate(vals) if vals else np.array([1.0])
    allv = allv[np.isfinite(allv)]
    if log_scale:
        pos = allv[allv > 0]
        floor = float(pos.min()) if pos.size else 1.0
        clamped = bool(np.any(allv <= 0))
        lo = math.floor(math.log10(floor))
        hi = math.ceil(math.log10(float(allv.max()) if pos.size else 1.0))
        if hi <= lo:
            hi = lo + 1
    else:
        lo = float(min(allv.min(), 0.0)) if allv.size else 0.0
        hi = float(allv.max()) if allv.size else 1.0
        if hi <= lo:
            hi = lo + 1.0

    pw, ph = WIDTH - LEFT - RIGHT, HEIGHT - TOP - BOTTOM

    def X(n):
        return LEFT + pw * n / iters

    def Y(v):
        if log_scale:
            t = (math.log10(max(v, floor)) - lo) / (hi - lo)
        else:
            t = (v - lo) / (hi - lo)
        return TOP + ph * (1.0 - t)

    def pts(xs, ys):
        return " ".join(f"{X(a):.3f},{Y(b):.3f}" for a, b in zip(xs, ys))

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="#ffffff"/>',
    ]
    if title:
        out.append(f'<text x="{WIDTH / 2:.1f}" y="18" text-anchor="middle">{escape(title)}</text>')

    # axes and ticks
    out.append(f'<g class="axes" stroke="#000000" fill="none">'
               f'<line x1="{LEFT}" y1="{TOP + ph}" x2="{LEFT + pw}" y2="{TOP + ph}"/>'
               f'<line x1="{LEFT}" y1="{TOP}" x2="{LEFT}" y2="{TOP + ph}"/></g>')
    ticks = ['<g class="ticks">']
    for n in _nice_linear_ticks(0, iters):
        x = X(n)
        ticks.append(f'<line x1="{x:.3f}" y1="{TOP + ph}" x2="{x:.3f}" y2="{TOP + ph + 5}" stroke="#000000"/>')
        ticks.append(f'<text x="{x:.3f}" y="{TOP + ph + 18}" text-anchor="middle">{n:g}</text>')
    if log_scale:
        yt = [(10.0 ** e, f"1e{e}") for e in range(lo, hi + 1)]
    else:
        yt = [(v, f"{v:g}") for v in _nice_linear_ticks(lo, hi)]
    for v, label in yt:
        y = Y(v)
        ticks.append(f'<line x1="{LEFT - 5}" y1="{y:.3f}" x2="{LEFT}" y2="{y:.3f}" stroke="#000000"/>')
        ticks.append(f'<text x="{LEFT - 8}" y="{y + 4:.3f}" text-anchor="end">{label}</text>')
    ticks.append("</g>")
    out.extend(ticks)
    out.append(f'<text x="{LEFT + pw / 2:.1f}" y="{HEIGHT - 35}" text-anchor="middle">Iteration</text>')
    out.append(f'<text x="20" y="{TOP + ph / 2:.1f}" text-anchor="middle" '
               f'transform="rotate(-90 20 {TOP + ph / 2:.1f})">Error of approximation</text>')

    for k, name in enumerate(names):
        st = summary.stats[name]
        color = COLORS[k % len(COLORS)]
        n = np.arange(len(st.mean))
        band = pts(n, st.p90) + " " + pts(n[::-1], st.p10[::-1])
        out.append(f'<polygon class="band" data-alg="{escape(name)}" points="{band}" '
                   f'fill="{color}" fill-opacity="0.2" stroke="none"/>')
    for k, name in enumerate(names):
        st = summary.stats[name]
        color = COLORS[k % len(COLORS)]
        out.append(f'<polyline class="mean" data-alg="{escape(name)}" '
                   f'points="{pts(np.arange(len(st.mean)), st.mean)}" '
                   f'fill="none" stroke="{color}" stroke-width="1.5"/>')
        ly = TOP + 14 + 16 * k
        out.append(f'<line x1="{LEFT + pw - 150}" y1="{ly - 4}" x2="{LEFT + pw - 130}" y2="{ly - 4}" '
                   f'stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{LEFT + pw - 125}" y="{ly}">{escape(name)}</text>')

    if clamped:
        out.append(f'<text class="footnote" x="{LEFT}" y="{HEIGHT - 10}" font-size="10">'
                   f'Nonpositive values clamped to {floor:.3g} for the log scale.</text>')
    out.append("</svg>")
    try:
        with open(path, "w") as fh:
            fh.write("\n".join(out) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write SVG to {path}: {exc.strerror or exc}") from exc
