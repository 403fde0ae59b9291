"""Dependency-free SVG line charts for result tables and match reports."""

from __future__ import annotations

import math
from pathlib import Path
from xml.sax.saxutils import escape

from voisearch.harness import ResultTable
from voisearch.mcts.match import MatchReport

WIDTH, HEIGHT = 640, 420
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 70, 130, 30, 55
COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def _fmt(x: float) -> str:
    return f"{x:.2f}"


def _nice_ticks(lo: float, hi: float, count: int = 5) -> list[float]:
    if hi <= lo:
        hi = lo + 1.0
    raw = (hi - lo) / count
    mag = 10 ** math.floor(math.log10(raw))
    step = min((m * mag for m in (1, 2, 5, 10) if m * mag >= raw), default=raw)
    start = math.ceil(lo / step) * step
    ticks = []
    v = start
    while v <= hi + step * 1e-9:
        ticks.append(round(v, 12))
        v += step
    return ticks


def render_svg(series: dict[str, list[tuple[float, float]]], xlabel: str, ylabel: str, title: str,
               y_range: tuple[float, float] | None = None, reference_y: float | None = None) -> str:
    """Chart with a log2 x-axis; one polyline per series, in insertion order."""
    points = [p for pts in series.values() for p in pts]
    if not points:
        raise ValueError("nothing to plot")
    xs = [math.log2(x) for x, _ in points]
    x_lo, x_hi = min(xs), max(xs)
    if x_hi == x_lo:
        x_lo, x_hi = x_lo - 0.5, x_hi + 0.5
    if y_range is None:
        y_hi = max(y for _, y in points)
        y_range = (0.0, y_hi * 1.05 if y_hi > 0 else 1.0)
    y_lo, y_hi = y_range
    plot_w = WIDTH - MARGIN_L - MARGIN_R
    plot_h = HEIGHT - MARGIN_T - MARGIN_B

    def px(x: float) -> float:
        return MARGIN_L + (math.log2(x) - x_lo) / (x_hi - x_lo) * plot_w

    def py(y: float) -> float:
        return MARGIN_T + (1.0 - (y - y_lo) / (y_hi - y_lo)) * plot_h

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{WIDTH / 2:.1f}" y="18" text-anchor="middle" font-size="14">{escape(title)}</text>',
        f'<rect x="{MARGIN_L}" y="{MARGIN_T}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black"/>',
    ]
    budgets = sorted({x for x, _ in points})
    for b in budgets:
        x = px(b)
        out.append(f'<line x1="{_fmt(x)}" y1="{MARGIN_T + plot_h}" x2="{_fmt(x)}" y2="{MARGIN_T + plot_h + 5}" stroke="black"/>')
        out.append(f'<text x="{_fmt(x)}" y="{MARGIN_T + plot_h + 18}" text-anchor="middle">{b:g}</text>')
    for t in _nice_ticks(y_lo, y_hi):
        y = py(t)
        out.append(f'<line x1="{MARGIN_L - 5}" y1="{_fmt(y)}" x2="{MARGIN_L}" y2="{_fmt(y)}" stroke="black"/>')
        out.append(f'<text x="{MARGIN_L - 8}" y="{_fmt(y + 4)}" text-anchor="end">{t:g}</text>')
    out.append(f'<text x="{MARGIN_L + plot_w / 2:.1f}" y="{HEIGHT - 12}" text-anchor="middle">{escape(xlabel)}</text>')
    out.append(f'<text x="16" y="{MARGIN_T + plot_h / 2:.1f}" text-anchor="middle" '
               f'transform="rotate(-90 16 {MARGIN_T + plot_h / 2:.1f})">{escape(ylabel)}</text>')
    if reference_y is not None:
        y = py(reference_y)
        out.append(f'<line class="reference" x1="{MARGIN_L}" y1="{_fmt(y)}" x2="{MARGIN_L + plot_w}" '
                   f'y2="{_fmt(y)}" stroke="gray" stroke-dasharray="4 4"/>')
    for k, (name, pts) in enumerate(series.items()):
        color = COLORS[k % len(COLORS)]
        coords = " ".join(f"{_fmt(px(x))},{_fmt(py(y))}" for x, y in sorted(pts))
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="2" points="{coords}"/>')
        for x, y in sorted(pts):
            out.append(f'<circle cx="{_fmt(px(x))}" cy="{_fmt(py(y))}" r="3" fill="{color}"/>')
        ly = MARGIN_T + 15 + 18 * k
        lx = MARGIN_L + plot_w + 12
        out.append(f'<line x1="{lx}" y1="{ly}" x2="{lx + 20}" y2="{ly}" stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{lx + 26}" y="{ly + 4}">{escape(name)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def emit_plot(table: ResultTable | MatchReport, path: str | Path) -> Path:
    """Write the regret curve (or win-rate curve) of ``table`` to ``path``."""
    if not table.rows:
        raise ValueError("empty table, no plot written")
    if isinstance(table, MatchReport):
        series = {"VOI vs UCT": [(r.budget, r.winrate) for r in table.rows]}
        svg = render_svg(series, "samples per ply", "win rate of VOI", "Win rate: VOI against UCT",
                         y_range=(0.0, 1.0), reference_y=0.5)
    else:
        series: dict[str, list[tuple[float, float]]] = {}
        for r in table.rows:
            series.setdefault(r.policy, []).append((r.budget, r.mean_regret))
        svg = render_svg(series, "number of samples", "mean simple regret", "Regret vs. number of samples")
    path = Path(path)
    path.write_text(svg, encoding="utf-8", newline="\n")
    return path
