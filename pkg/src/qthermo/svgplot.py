"""Static SVG line charts of entropy production against driving time.

Output is plain text assembled by hand so that identical rows always give
byte-identical files, with no fonts, scripts or external references.
"""

from __future__ import annotations

from pathlib import Path
from typing import Sequence
from xml.sax.saxutils import escape

WIDTH, HEIGHT = 640, 420
MARGIN_LEFT, MARGIN_RIGHT, MARGIN_TOP, MARGIN_BOTTOM = 70, 170, 40, 60

SERIES = (
    ("s_irr_relent_route", "entropy production", "#1f4e9c"),
    ("coherence_term", "coherence", "#c0392b"),
    ("bound_value", "8 L^2 / pi^2 bound", "#2e8b57"),
)


def _fmt(x: float) -> str:
    return f"{x:.2f}"


def _ticks(lo: float, hi: float, n: int = 5) -> list[float]:
    if hi <= lo:
        return [lo]
    return [lo + (hi - lo) * k / (n - 1) for k in range(n)]


def plot_paths(path, nu_f_values: Sequence[float]) -> dict[float, Path]:
    """One output file per final gap: ``plot.svg`` -> ``plot_3600.svg``."""
    path = Path(path)
    suffix = path.suffix or ".svg"
    return {nu: path.with_name(f"{path.stem}_{nu:g}{suffix}") for nu in nu_f_values}


def render_svg(rows, nu_f: float) -> str:
    """SVG document for the rows of a single final gap."""
    taus_us = [r.tau * 1e6 for r in rows]
    x_lo, x_hi = min(taus_us), max(taus_us)
    if x_hi == x_lo:
        x_lo, x_hi = x_lo - 1.0, x_hi + 1.0
    y_top = 1.05 * max(r.s_irr_relent_route for r in rows)
    if y_top <= 0:
        y_top = 1.0
    plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT
    plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM

    def sx(x):
        return MARGIN_LEFT + (x - x_lo) / (x_hi - x_lo) * plot_w

    def sy(y):
        return MARGIN_TOP + plot_h - y / y_top * plot_h

    x0, y0 = MARGIN_LEFT, MARGIN_TOP + plot_h
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
        f"<title>{escape(f'Entropy production, nu_f = {nu_f:g} Hz')}</title>",
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{WIDTH / 2:.2f}" y="22" text-anchor="middle" font-size="14">'
        f"final gap {nu_f:g} Hz</text>",
        f'<line class="axis" x1="{x0}" y1="{y0}" x2="{x0 + plot_w}" y2="{y0}" stroke="black"/>',
        f'<line class="axis" x1="{x0}" y1="{y0}" x2="{x0}" y2="{MARGIN_TOP}" stroke="black"/>',
    ]
    for t in _ticks(x_lo, x_hi):
        out.append(
            f'<line x1="{_fmt(sx(t))}" y1="{y0}" x2="{_fmt(sx(t))}" y2="{y0 + 5}" stroke="black"/>'
            f'<text x="{_fmt(sx(t))}" y="{y0 + 18}" text-anchor="middle">{t:.4g}</text>'
        )
    for t in _ticks(0.0, y_top):
        out.append(
            f'<line x1="{x0 - 5}" y1="{_fmt(sy(t))}" x2="{x0}" y2="{_fmt(sy(t))}" stroke="black"/>'
            f'<text x="{x0 - 8}" y="{_fmt(sy(t) + 4)}" text-anchor="end">{t:.3g}</text>'
        )
    out.append(
        f'<text x="{x0 + plot_w / 2:.2f}" y="{HEIGHT - 18}" text-anchor="middle">'
        "driving time tau (us)</text>"
    )
    out.append(
        f'<text x="18" y="{MARGIN_TOP + plot_h / 2:.2f}" text-anchor="middle" '
        f'transform="rotate(-90 18 {MARGIN_TOP + plot_h / 2:.2f})">entropy (nats)</text>'
    )

    for attr, label, color in SERIES:
        pts = [(sx(t), sy(getattr(r, attr))) for t, r in zip(taus_us, rows)]
        coords = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in pts)
        out.append(
            f'<polyline class="series" data-series="{attr}" points="{coords}" '
            f'fill="none" stroke="{color}" stroke-width="2"/>'
        )
        for x, y in pts:
            out.append(f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="3" fill="{color}"/>')

    lx = WIDTH - MARGIN_RIGHT + 15
    for k, (_, label, color) in enumerate(SERIES):
        ly = MARGIN_TOP + 10 + 20 * k
        out.append(
            f'<line class="legend" x1="{lx}" y1="{ly}" x2="{lx + 20}" y2="{ly}" '
            f'stroke="{color}" stroke-width="2"/>'
            f'<text x="{lx + 26}" y="{ly + 4}">{escape(label)}</text>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def emit_svg_plot(rows, path) -> list[Path]:
    """Write one SVG per final gap found in ``rows``; returns the written paths."""
    if not rows:
        raise ValueError("no rows to plot")
    groups: dict[float, list] = {}
    for r in rows:
        groups.setdefault(r.nu_f, []).append(r)
    targets = plot_paths(path, sorted(groups))
    written = []
    for nu_f in sorted(groups):
        ordered = sorted(groups[nu_f], key=lambda r: r.tau)
        target = targets[nu_f]
        try:
            target.write_text(render_svg(ordered, nu_f), encoding="utf-8")
        except OSError as exc:
            raise OSError(f"cannot write plot to {target}: {exc}") from exc
        written.append(target)
    return written
