"""Standalone SVG line charts of cell summaries, written without plotting deps.

One chart per (m, metric) pair: SNR in dB on the x axis, one polyline per
algorithm entry.  NRMSE uses a log y axis, support size a linear one.
Output is a pure function of the summaries, so identical inputs give
byte-identical files.  Noise-free cells have no x position and are skipped.
"""

from __future__ import annotations

import math
from xml.sax.saxutils import escape

__all__ = ["write_svg_plots", "render_chart"]

_PALETTE = (
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
)

_WIDTH, _HEIGHT = 760, 420
_X0, _X1 = 62, 520
_Y0, _Y1 = 34, 372
_LEGEND_X = 534


def _fmt_px(v: float) -> str:
    return format(v, ".2f")


def _fmt_num(v: float) -> str:
    return format(v, ".6g")


def _nice_step(span: float) -> float:
    if span <= 0:
        return 1.0
    raw = span / 5.0
    mag = 10.0 ** math.floor(math.log10(raw))
    for mult in (1.0, 2.0, 5.0, 10.0):
        if raw <= mult * mag:
            return mult * mag
    return 10.0 * mag


def _linear_ticks(lo: float, hi: float) -> list[float]:
    step = _nice_step(hi - lo)
    first = math.ceil(lo / step) * step
    ticks = []
    t = first
    while t <= hi + 1e-9 * step:
        ticks.append(round(t / step) * step)
        t += step
    return ticks


def render_chart(title: str, ylabel: str, series, log_y: bool) -> str:
    """Render one chart; ``series`` is a list of (label, xs, ys) triples."""
    all_x = [x for _, xs, _ in series for x in xs]
    all_y = [y for _, _, ys in series for y in ys]
    if not all_x:
        raise ValueError("chart needs at least one finite-SNR point")

    xlo, xhi = min(all_x), max(all_x)
    if xlo == xhi:
        xlo, xhi = xlo - 1.0, xhi + 1.0

    if log_y:
        floor = 1e-12  # keep zero values plottable on the log axis
        ys_pos = [max(y, floor) for y in all_y]
        dlo = math.floor(math.log10(min(ys_pos)))
        dhi = math.ceil(math.log10(max(ys_pos)))
        if dlo == dhi:
            dlo -= 1
        ylo, yhi = float(dlo), float(dhi)
        yticks = [(float(d), f"1e{d}") for d in range(dlo, dhi + 1)]

        def ymap(v: float) -> float:
            return math.log10(max(v, floor))

    else:
        ylo = 0.0
        yhi = max(max(all_y), 1.0) * 1.05
        yticks = [(t, _fmt_num(t)) for t in _linear_ticks(ylo, yhi)]

        def ymap(v: float) -> float:
            return v

    def px(x: float) -> float:
        return _X0 + (_X1 - _X0) * (x - xlo) / (xhi - xlo)

    def py(y: float) -> float:
        return _Y1 - (_Y1 - _Y0) * (ymap(y) - ylo) / (yhi - ylo)

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{_WIDTH}" height="{_HEIGHT}" '
        f'viewBox="0 0 {_WIDTH} {_HEIGHT}">',
        f'<rect x="0" y="0" width="{_WIDTH}" height="{_HEIGHT}" fill="white"/>',
        f'<text x="{(_X0 + _X1) / 2:.0f}" y="20" font-family="sans-serif" font-size="14" '
        f'text-anchor="middle">{escape(title)}</text>',
    ]

    # gridlines and ticks
    for tv, tl in yticks:
        y = py(10.0 ** tv) if log_y else py(tv)
        parts.append(
            f'<line x1="{_X0}" y1="{_fmt_px(y)}" x2="{_X1}" y2="{_fmt_px(y)}" stroke="#dddddd" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{_X0 - 6}" y="{_fmt_px(y + 3.5)}" font-family="sans-serif" font-size="10" '
            f'text-anchor="end">{escape(tl)}</text>'
        )
    for xv in sorted(set(all_x)):
        x = px(xv)
        parts.append(
            f'<line x1="{_fmt_px(x)}" y1="{_Y1}" x2="{_fmt_px(x)}" y2="{_Y1 + 4}" stroke="black" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{_fmt_px(x)}" y="{_Y1 + 16}" font-family="sans-serif" font-size="10" '
            f'text-anchor="middle">{escape(_fmt_num(xv))}</text>'
        )

    # axes
    parts.append(f'<line x1="{_X0}" y1="{_Y0}" x2="{_X0}" y2="{_Y1}" stroke="black" stroke-width="1"/>')
    parts.append(f'<line x1="{_X0}" y1="{_Y1}" x2="{_X1}" y2="{_Y1}" stroke="black" stroke-width="1"/>')
    parts.append(
        f'<text x="{(_X0 + _X1) / 2:.0f}" y="{_HEIGHT - 8}" font-family="sans-serif" font-size="12" '
        f'text-anchor="middle">SNR (dB)</text>'
    )
    parts.append(
        f'<text x="16" y="{(_Y0 + _Y1) / 2:.0f}" font-family="sans-serif" font-size="12" '
        f'text-anchor="middle" transform="rotate(-90 16 {(_Y0 + _Y1) / 2:.0f})">{escape(ylabel)}</text>'
    )

    # series
    for idx, (label, xs, ys) in enumerate(series):
        color = _PALETTE[idx % len(_PALETTE)]
        pts = sorted(zip(xs, ys))
        coords = " ".join(f"{_fmt_px(px(x))},{_fmt_px(py(y))}" for x, y in pts)
        parts.append(
            f'<polyline points="{coords}" fill="none" stroke="{color}" stroke-width="1.5"/>'
        )
        for x, y in pts:
            parts.append(
                f'<circle cx="{_fmt_px(px(x))}" cy="{_fmt_px(py(y))}" r="2.5" fill="{color}"/>'
            )
        ly = _Y0 + 14 + 16 * idx
        parts.append(
            f'<line x1="{_LEGEND_X}" y1="{ly - 3}" x2="{_LEGEND_X + 22}" y2="{ly - 3}" '
            f'stroke="{color}" stroke-width="1.5"/>'
        )
        parts.append(
            f'<text x="{_LEGEND_X + 28}" y="{ly}" font-family="sans-serif" font-size="10">{escape(label)}</text>'
        )

    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def write_svg_plots(summaries, path_prefix: str) -> list[str]:
    """Write one SVG per (m, metric in {nrmse, support_size}); return the paths.

    Series order follows first appearance in ``summaries``; files are named
    ``{prefix}m{m}_{metric}.svg``.
    """
    if not summaries:
        raise ValueError("need at least one summary")
    m_order: list[int] = []
    for s in summaries:
        if s.m not in m_order:
            m_order.append(s.m)

    metrics = (
        ("nrmse", "NRMSE", lambda s: s.nrmse_mean, True),
        ("support_size", "mean support size", lambda s: s.support_size_mean, False),
    )
    written = []
    for m in m_order:
        group = [s for s in summaries if s.m == m and s.snr_db is not None]
        if not group:
            continue
        labels: list[str] = []
        for s in group:
            name = s.algorithm if not s.params else f"{s.algorithm} {s.params}"
            if name not in labels:
                labels.append(name)
        for metric_key, ylabel, get, log_y in metrics:
            series = []
            for name in labels:
                pts = [
                    (s.snr_db, get(s))
                    for s in group
                    if (s.algorithm if not s.params else f"{s.algorithm} {s.params}") == name
                ]
                series.append((name, [p[0] for p in pts], [p[1] for p in pts]))
            text = render_chart(f"m = {m}", ylabel, series, log_y)
            path = f"{path_prefix}m{m}_{metric_key}.svg"
            with open(path, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
            written.append(path)
    return written
