"""Standalone SVG line charts rendered from report JSON.

Output depends only on the report contents, so re-rendering is
byte-identical.
"""
from __future__ import annotations

import math
from xml.sax.saxutils import escape

from .exceptions import SchemaError

WIDTH, HEIGHT = 640, 400
MARGIN = dict(left=70, right=160, top=40, bottom=50)
COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e")


def _fmt(x: float) -> str:
    return f"{x:.6g}"


def _ticks(lo: float, hi: float, count: int = 5) -> list[float]:
    if hi <= lo:
        hi = lo + 1.0
    step = 10 ** math.floor(math.log10((hi - lo) / count))
    for mult in (1, 2, 5, 10):
        if (hi - lo) / (step * mult) <= count:
            step *= mult
            break
    start = math.ceil(lo / step) * step
    out = []
    v = start
    while v <= hi + 1e-12 * abs(hi):
        out.append(round(v, 12))
        v += step
    return out


def line_chart(title: str, xlabel: str, ylabel: str, series: dict[str, list[tuple[float, float]]], logx: bool = False) -> str:
    pts = [(x, y) for s in series.values() for x, y in s if y is not None and math.isfinite(y)]
    if not pts:
        raise SchemaError("report has no plottable points")
    tx = (lambda v: math.log10(v)) if logx else (lambda v: v)
    xs = [tx(x) for x, _ in pts]
    ys = [y for _, y in pts]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    if x1 == x0:
        x0, x1 = x0 - 1, x1 + 1
    pad = (y1 - y0) * 0.08 or abs(y0) * 0.1 or 1.0
    y0, y1 = y0 - pad, y1 + pad
    pw = WIDTH - MARGIN["left"] - MARGIN["right"]
    ph = HEIGHT - MARGIN["top"] - MARGIN["bottom"]

    def sx(v: float) -> float:
        return MARGIN["left"] + (tx(v) - x0) / (x1 - x0) * pw

    def sy(v: float) -> float:
        return MARGIN["top"] + (y1 - v) / (y1 - y0) * ph

    rows = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT + 20 * (len(pts) + 2)}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT + 20 * (len(pts) + 2)}" font-family="sans-serif" font-size="12">',
        '<rect width="100%" height="100%" fill="white"/>',
        f'<text x="{WIDTH / 2}" y="20" text-anchor="middle" font-size="14">{escape(title)}</text>',
        f'<rect x="{MARGIN["left"]}" y="{MARGIN["top"]}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    for t in _ticks(y0, y1):
        y = sy(t)
        rows.append(f'<line x1="{MARGIN["left"] - 4}" y1="{y:.2f}" x2="{MARGIN["left"]}" y2="{y:.2f}" stroke="black"/>')
        rows.append(f'<text x="{MARGIN["left"] - 6}" y="{y + 4:.2f}" text-anchor="end">{_fmt(t)}</text>')
    xvals = sorted({x for s in series.values() for x, _ in s})
    for x in xvals:
        px = sx(x)
        rows.append(f'<line x1="{px:.2f}" y1="{MARGIN["top"] + ph}" x2="{px:.2f}" y2="{MARGIN["top"] + ph + 4}" stroke="black"/>')
        rows.append(f'<text x="{px:.2f}" y="{MARGIN["top"] + ph + 18}" text-anchor="middle">{_fmt(x)}</text>')
    rows.append(f'<text x="{MARGIN["left"] + pw / 2}" y="{HEIGHT - 10}" text-anchor="middle">{escape(xlabel)}</text>')
    rows.append(
        f'<text x="16" y="{MARGIN["top"] + ph / 2}" text-anchor="middle" '
        f'transform="rotate(-90 16 {MARGIN["top"] + ph / 2})">{escape(ylabel)}</text>'
    )
    for k, (name, s) in enumerate(series.items()):
        color = COLORS[k % len(COLORS)]
        good = [(x, y) for x, y in s if y is not None and math.isfinite(y)]
        path = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in good)
        rows.append(f'<polyline points="{path}" fill="none" stroke="{color}" stroke-width="2"/>')
        for x, y in good:
            rows.append(f'<circle cx="{sx(x):.2f}" cy="{sy(y):.2f}" r="3" fill="{color}"/>')
        ly = MARGIN["top"] + 16 + 18 * k
        lx = WIDTH - MARGIN["right"] + 12
        rows.append(f'<line x1="{lx}" y1="{ly - 4}" x2="{lx + 20}" y2="{ly - 4}" stroke="{color}" stroke-width="2"/>')
        rows.append(f'<text x="{lx + 26}" y="{ly}">{escape(name)}</text>')
    # data table under the chart
    ty = HEIGHT + 14
    rows.append(f'<text x="{MARGIN["left"]}" y="{ty}" font-family="monospace">series, x, y</text>')
    for name, s in series.items():
        for x, y in s:
            ty += 20
            rows.append(
                f'<text x="{MARGIN["left"]}" y="{ty}" font-family="monospace">'
                f'{escape(name)}, {_fmt(x)}, {"" if y is None else _fmt(y)}</text>'
            )
    rows.append("</svg>")
    return "\n".join(rows) + "\n"


def render_report(report: dict) -> str:
    schema = report.get("schema") if isinstance(report, dict) else None
    try:
        if schema == "tsgraph.rate-vs-n/1":
            rows = report["rows"]
            series = {"bound": [(r["n"], r["bound_rate"]) for r in rows]}
            if any(r.get("exact_rate") is not None for r in rows):
                series["exact"] = [(r["n"], r.get("exact_rate")) for r in rows]
            if any(r.get("rate_bracket") for r in rows):
                series["bracket low"] = [(r["n"], r["rate_bracket"][0] if r.get("rate_bracket") else None) for r in rows]
                series["bracket high"] = [(r["n"], r["rate_bracket"][1] if r.get("rate_bracket") else None) for r in rows]
            return line_chart(
                f"epsilon-rate vs n (p={report['p']}, eps={report['eps']})", "n", "rate (bits per pair)", series
            )
        if schema == "tsgraph.check.wright/1":
            rows = report["details"]["rows"]
            return line_chart(
                "N(n,j) / Lambda(n,j) vs n", "n", "ratio",
                {"N/Lambda": [(r["n"], r["ratio"]) for r in rows], "1": [(r["n"], 1.0) for r in rows]},
            )
        if schema == "tsgraph.check.berry/1":
            rows = report["details"]["rows"]
            A = report["parameters"]["A"]
            return line_chart(
                f"Berry-Esseen deviation (p={report['parameters']['p']})", "m", "D_m * sqrt(m)",
                {"D_m sqrt(m)": [(r["m"], r["D_m_sqrt_m"]) for r in rows], "A": [(r["m"], A) for r in rows]},
                logx=True,
            )
    except (KeyError, TypeError, IndexError) as exc:
        raise SchemaError(f"report with schema {schema!r} is missing field {exc}") from None
    raise SchemaError(f"no chart for report schema {schema!r}")
