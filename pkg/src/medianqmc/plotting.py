"""Self-contained SVG plots of convergence records (log2 error against log2 N)."""

from __future__ import annotations

import math
from xml.sax.saxutils import escape

PANEL_W, PANEL_H = 320, 260
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 50, 15, 30, 40
COLORS = ("#1f77b4", "#ff7f0e", "#e5c100", "#2ca02c", "#d62728", "#9467bd")


def _series_key(rec):
    return rec.function if rec.c is None else f"{rec.function} c={rec.c:g}"


def _ticks(lo, hi):
    step = max(1, math.ceil((hi - lo) / 8))
    start = math.ceil(lo / step) * step
    return list(range(start, math.floor(hi) + 1, step))


def convergence_svg(records, title: str = "", config: dict | None = None) -> str:
    """One panel per rule and one polyline per function/parameter.

    Zero errors cannot be drawn on a log axis and are left out.  ``config``
    entries are embedded as ``key=value`` lines in a leading XML comment.
    """
    records = list(records)
    rules = list(dict.fromkeys(rec.rule for rec in records))
    keys = list(dict.fromkeys(_series_key(rec) for rec in records))
    pts = [(math.log2(rec.N), math.log2(rec.abs_error)) for rec in records if rec.abs_error > 0]
    if pts:
        x_lo, x_hi = min(p[0] for p in pts), max(p[0] for p in pts)
        y_lo, y_hi = math.floor(min(p[1] for p in pts)), math.ceil(max(p[1] for p in pts))
    else:
        x_lo, x_hi, y_lo, y_hi = 0, 1, -1, 0
    if x_hi == x_lo:
        x_hi = x_lo + 1
    if y_hi == y_lo:
        y_hi = y_lo + 1
    width = PANEL_W * max(len(rules), 1)
    height = PANEL_H + 20 * (len(keys) + 1)
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'font-family="sans-serif" font-size="11">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
    ]
    if config:
        lines = "\n".join(f"{k}={v}" for k, v in config.items()).replace("--", "- -")
        out.insert(1, f"<!--\n{lines}\n-->")
    if title:
        out.append(f'<text x="{width / 2}" y="14" text-anchor="middle">{escape(title)}</text>')
    iw, ih = PANEL_W - MARGIN_L - MARGIN_R, PANEL_H - MARGIN_T - MARGIN_B

    for p, rule in enumerate(rules):
        x0, y0 = p * PANEL_W + MARGIN_L, MARGIN_T

        def sx(x):
            return x0 + (x - x_lo) / (x_hi - x_lo) * iw

        def sy(y):
            return y0 + (y_hi - y) / (y_hi - y_lo) * ih

        out.append(f'<rect x="{x0}" y="{y0}" width="{iw}" height="{ih}" fill="none" stroke="black"/>')
        out.append(f'<text x="{x0 + iw / 2}" y="{y0 - 4}" text-anchor="middle">{escape(rule)}</text>')
        for t in _ticks(x_lo, x_hi):
            out.append(f'<line x1="{sx(t):.1f}" y1="{y0 + ih}" x2="{sx(t):.1f}" y2="{y0 + ih + 4}" stroke="black"/>')
            out.append(f'<text x="{sx(t):.1f}" y="{y0 + ih + 16}" text-anchor="middle">{t}</text>')
        for t in _ticks(y_lo, y_hi):
            out.append(f'<line x1="{x0 - 4}" y1="{sy(t):.1f}" x2="{x0}" y2="{sy(t):.1f}" stroke="black"/>')
            out.append(f'<text x="{x0 - 6}" y="{sy(t) + 4:.1f}" text-anchor="end">{t}</text>')
        out.append(f'<text x="{x0 + iw / 2}" y="{y0 + ih + 32}" text-anchor="middle">log2 N</text>')
        if p == 0:
            out.append(
                f'<text x="12" y="{y0 + ih / 2}" text-anchor="middle" '
                f'transform="rotate(-90 12 {y0 + ih / 2})">log2 |error|</text>'
            )
        for i, key in enumerate(keys):
            line = [
                (sx(math.log2(rec.N)), sy(math.log2(rec.abs_error)))
                for rec in records
                if rec.rule == rule and _series_key(rec) == key and rec.abs_error > 0
            ]
            if not line:
                continue
            color = COLORS[i % len(COLORS)]
            coords = " ".join(f"{x:.1f},{y:.1f}" for x, y in line)
            out.append(f'<polyline points="{coords}" fill="none" stroke="{color}" stroke-width="1.5"/>')
            for x, y in line:
                out.append(f'<circle cx="{x:.1f}" cy="{y:.1f}" r="2" fill="{color}"/>')

    for i, key in enumerate(keys):
        y = PANEL_H + 20 * i + 5
        color = COLORS[i % len(COLORS)]
        out.append(f'<line x1="{MARGIN_L}" y1="{y}" x2="{MARGIN_L + 20}" y2="{y}" stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{MARGIN_L + 26}" y="{y + 4}">{escape(key)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_convergence_svg(records, path, title: str = "", config: dict | None = None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(convergence_svg(records, title, config))
