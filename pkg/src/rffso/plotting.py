"""Figures for curves: a matplotlib renderer and a dependency-free SVG writer.

matplotlib is optional and imported only when a figure is requested. The
hand-written SVG needs nothing beyond the standard library and is what the
``plot`` subcommand emits.
"""

from __future__ import annotations

import math
from xml.sax.saxutils import escape

import numpy as np

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f")


def wants_log(values):
    """Log scale when every value is positive and they span more than three decades."""
    v = np.concatenate([np.ravel(a) for a in values]) if values else np.array([])
    v = v[np.isfinite(v)]
    if v.size == 0 or np.any(v <= 0):
        return False
    return v.max() / v.min() > 1e3


def _series(curve):
    """Columns worth drawing: std-error columns are folded into their parent."""
    return {k: v for k, v in curve.columns.items() if not k.endswith("_std_error")}


def render_figure(curve, path, title=None, logy=None):
    """Save a matplotlib line chart of ``curve``; format follows the file suffix.

    Metadata that would change between runs (creation date, SVG ids) is
    pinned so repeat runs produce identical files.
    """
    try:
        import matplotlib
    except ImportError as exc:
        raise RuntimeError("figures need matplotlib: pip install 'rffso[plot]'") from exc
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    series = _series(curve)
    if logy is None:
        logy = wants_log(list(series.values()))
    with matplotlib.rc_context({"svg.hashsalt": "rffso", "font.size": 10}):
        fig, ax = plt.subplots(figsize=(6.4, 4.2))
        for i, (name, y) in enumerate(series.items()):
            style = "o" if name.startswith("mc_") else "-"
            err = curve.columns.get(f"{name}_std_error")
            color = PALETTE[i % len(PALETTE)]
            if err is not None:
                ax.errorbar(curve.x, y, yerr=3 * err, fmt=style, ms=4, color=color, label=name)
            else:
                ax.plot(curve.x, y, style, color=color, label=name)
        if logy:
            ax.set_yscale("log")
        ax.set_xlabel(curve.x_name)
        ax.grid(True, which="both", alpha=0.3)
        ax.legend(fontsize=8)
        if title:
            ax.set_title(title)
        fig.tight_layout()
        meta = {"Date": None} if str(path).endswith(".svg") else {"Software": None}
        if str(path).endswith(".pdf"):
            meta = {"CreationDate": None}
        fig.savefig(path, metadata=meta)
        plt.close(fig)


def _ticks(lo, hi, count=5):
    if hi <= lo:
        return [lo]
    raw = (hi - lo) / count
    mag = 10 ** math.floor(math.log10(raw))
    step = min((s * mag for s in (1, 2, 5, 10) if s * mag >= raw), default=10 * mag)
    first = math.ceil(lo / step) * step
    return [first + i * step for i in range(int((hi - first) / step + 1e-9) + 1)]


def svg_chart(curve, title=None, logy=None, width=640, height=420):
    """Minimal standalone SVG line chart of ``curve`` as a string."""
    series = _series(curve)
    if not series:
        raise ValueError("curve has no columns to draw")
    if logy is None:
        logy = wants_log(list(series.values()))
    tf = (lambda v: np.log10(v)) if logy else (lambda v: v)
    x = curve.x
    ys = {k: tf(np.where(v > 0, v, np.nan)) if logy else v for k, v in series.items()}
    finite = np.concatenate([v[np.isfinite(v)] for v in ys.values()])
    if finite.size == 0:
        raise ValueError("curve has no finite values to draw")
    y_lo, y_hi = float(finite.min()), float(finite.max())
    if y_hi == y_lo:
        y_lo, y_hi = y_lo - 0.5, y_hi + 0.5
    x_lo, x_hi = float(x.min()), float(x.max())
    if x_hi == x_lo:
        x_lo, x_hi = x_lo - 0.5, x_hi + 0.5
    left, right, top, bottom = 70, 150, 30, 45
    pw, ph = width - left - right, height - top - bottom

    def px(v):
        return left + (v - x_lo) / (x_hi - x_lo) * pw

    def py(v):
        return top + (y_hi - v) / (y_hi - y_lo) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="11">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
        f'<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    if title:
        out.append(f'<text x="{left + pw / 2:.1f}" y="18" text-anchor="middle">{escape(title)}</text>')
    for t in _ticks(x_lo, x_hi):
        out.append(f'<line x1="{px(t):.1f}" y1="{top + ph}" x2="{px(t):.1f}" y2="{top + ph + 4}" stroke="black"/>')
        out.append(f'<text x="{px(t):.1f}" y="{top + ph + 16}" text-anchor="middle">{t:g}</text>')
    for t in _ticks(y_lo, y_hi):
        label = f"1e{t:g}" if logy else f"{t:g}"
        out.append(f'<line x1="{left - 4}" y1="{py(t):.1f}" x2="{left}" y2="{py(t):.1f}" stroke="black"/>')
        out.append(f'<line x1="{left}" y1="{py(t):.1f}" x2="{left + pw}" y2="{py(t):.1f}" stroke="#ddd"/>')
        out.append(f'<text x="{left - 6}" y="{py(t) + 4:.1f}" text-anchor="end">{label}</text>')
    out.append(
        f'<text x="{left + pw / 2:.1f}" y="{height - 8}" text-anchor="middle">{escape(curve.x_name)}</text>'
    )
    for i, (name, y) in enumerate(ys.items()):
        color = PALETTE[i % len(PALETTE)]
        pts = [(px(a), py(b)) for a, b in zip(x, y) if np.isfinite(b)]
        if len(pts) > 1:
            path = " ".join(f"{a:.2f},{b:.2f}" for a, b in pts)
            out.append(f'<polyline points="{path}" fill="none" stroke="{color}" stroke-width="1.5"/>')
        for a, b in pts:
            out.append(f'<circle cx="{a:.2f}" cy="{b:.2f}" r="2" fill="{color}"/>')
        ly = top + 14 + 16 * i
        out.append(f'<line x1="{left + pw + 10}" y1="{ly - 4}" x2="{left + pw + 28}" y2="{ly - 4}" stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{left + pw + 32}" y="{ly}">{escape(name)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
