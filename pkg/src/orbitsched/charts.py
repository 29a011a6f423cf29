"""Minimal standalone SVG bar charts."""

from __future__ import annotations

import math
from pathlib import Path
from xml.sax.saxutils import escape

WIDTH = 640
HEIGHT = 400
MARGIN_LEFT = 70
MARGIN_BOTTOM = 90
MARGIN_TOP = 40
MARGIN_RIGHT = 20


def _nice_max(v: float) -> float:
    if v <= 0:
        return 1.0
    mag = 10.0 ** math.floor(math.log10(v))
    for m in (1, 2, 2.5, 5, 10):
        if m * mag >= v:
            return m * mag
    return 10 * mag


def bar_chart_svg(labels: list, values: list, title: str, y_label: str) -> str:
    """Render one bar per label. Negative values are drawn as zero-height bars and still labelled."""
    plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT
    plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM
    top = _nice_max(max([v for v in values if v == v] + [0.0]))
    n = max(len(values), 1)
    slot = plot_w / n
    bar_w = slot * 0.6
    x0, y0 = MARGIN_LEFT, MARGIN_TOP + plot_h
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{WIDTH / 2:.1f}" y="22" text-anchor="middle" font-family="sans-serif" font-size="15">{escape(title)}</text>',
        f'<line x1="{x0}" y1="{MARGIN_TOP}" x2="{x0}" y2="{y0}" stroke="black"/>',
        f'<line x1="{x0}" y1="{y0}" x2="{x0 + plot_w}" y2="{y0}" stroke="black"/>',
        f'<text x="16" y="{MARGIN_TOP + plot_h / 2:.1f}" transform="rotate(-90 16 {MARGIN_TOP + plot_h / 2:.1f})" '
        f'text-anchor="middle" font-family="sans-serif" font-size="12">{escape(y_label)}</text>',
    ]
    for k in range(5):
        frac = k / 4
        y = y0 - frac * plot_h
        out.append(f'<line x1="{x0 - 4}" y1="{y:.1f}" x2="{x0}" y2="{y:.1f}" stroke="black"/>')
        out.append(
            f'<text x="{x0 - 6}" y="{y + 4:.1f}" text-anchor="end" font-family="sans-serif" font-size="10">{top * frac:g}</text>'
        )
    for i, (label, v) in enumerate(zip(labels, values)):
        h = max(0.0, v) / top * plot_h if v == v else 0.0
        x = x0 + i * slot + (slot - bar_w) / 2
        cx = x + bar_w / 2
        out.append(f'<rect x="{x:.1f}" y="{y0 - h:.1f}" width="{bar_w:.1f}" height="{h:.1f}" fill="#4477aa"/>')
        out.append(
            f'<text x="{cx:.1f}" y="{y0 - h - 4:.1f}" text-anchor="middle" font-family="sans-serif" font-size="10">{v:.4g}</text>'
        )
        out.append(
            f'<text x="{cx:.1f}" y="{y0 + 14}" transform="rotate(30 {cx:.1f} {y0 + 14})" '
            f'font-family="sans-serif" font-size="10">{escape(str(label))}</text>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_bar_chart(path, labels, values, title: str, y_label: str) -> None:
    Path(path).write_text(bar_chart_svg(list(labels), list(values), title, y_label))
