"""SVG rendering: per-class Kiviat diagrams and the v/ev scatter plot."""

from __future__ import annotations

import csv
import io
import math
from typing import Mapping, Sequence
from xml.sax.saxutils import escape

from .cfg import EV_THRESHOLD, V_THRESHOLD, MethodComplexity
from .class_metrics import CLASS_METRICS, ClassMetricVector
from .errors import MissingBound
from .rollup import ThresholdBound, evaluate_status

FLAG = "#d62728"
INK = "#333333"
GRID = "#bbbbbb"

SIZE = 520
CENTER = SIZE / 2
R_MIN = 60.0  # inner ring: min bound
R_MAX = 180.0  # outer ring: max bound
R_CLIP = 1.2 * R_MAX


def _svg_open(width: float, height: float) -> list[str]:
    return [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width:g}" height="{height:g}" '
        f'viewBox="0 0 {width:g} {height:g}" font-family="sans-serif" font-size="11">',
    ]


def _bound_label(x: float) -> str:
    if math.isinf(x):
        return "∞" if x > 0 else "-∞"
    return f"{x:g}"


def _radius(value: float, bound: ThresholdBound) -> float:
    """Map a value onto the ring scale: min bound at R_MIN, max bound at R_MAX.

    Infinite bounds sit at their ring; values are then placed relative to the
    finite bound (or to zero when both are infinite).
    """
    lo, hi = bound.min, bound.max
    if math.isinf(lo) and math.isinf(hi):
        span = max(abs(value), 1.0)
        r = R_MIN + (R_MAX - R_MIN) * (0.5 + 0.5 * value / span)
    elif math.isinf(hi):
        scale = max(abs(lo), 1.0)
        r = R_MIN + (R_MAX - R_MIN) * (value - lo) / (2 * scale)
    elif math.isinf(lo):
        scale = max(abs(hi), 1.0)
        r = R_MAX - (R_MAX - R_MIN) * (hi - value) / (2 * scale)
    elif hi == lo:
        r = R_MAX + (R_MAX - R_MIN) * (value - hi) / max(abs(hi), 1.0)
    else:
        r = R_MIN + (R_MAX - R_MIN) * (value - lo) / (hi - lo)
    return min(max(r, 0.0), R_CLIP)


def emit_kiviat(
    vector: ClassMetricVector | Mapping[str, float],
    bounds: Mapping[str, ThresholdBound],
    title: str = "",
) -> str:
    """Radial plot of the 13 class metrics between their threshold rings."""
    values = vector.as_dict() if isinstance(vector, ClassMetricVector) else dict(vector)
    for name in CLASS_METRICS:
        if name not in bounds:
            raise MissingBound(name)
    out = _svg_open(SIZE, SIZE + 30)
    out.append(f'<title>{escape(title)}</title>')
    out.append(f'<text x="{CENTER:g}" y="18" text-anchor="middle" font-size="13">{escape(title)}</text>')
    cy = CENTER + 20
    out.append(f'<circle cx="{CENTER:g}" cy="{cy:g}" r="{R_MAX:g}" fill="none" stroke="{GRID}" class="ring-max"/>')
    out.append(f'<circle cx="{CENTER:g}" cy="{cy:g}" r="{R_MIN:g}" fill="none" stroke="{GRID}" class="ring-min"/>')

    points = []
    n = len(CLASS_METRICS)
    for i, name in enumerate(CLASS_METRICS):
        angle = -math.pi / 2 + 2 * math.pi * i / n
        dx, dy = math.cos(angle), math.sin(angle)
        bound = bounds[name]
        value = values[name]
        flagged = evaluate_status(value, bound).status == -1
        color = FLAG if flagged else INK
        ax, ay = CENTER + R_CLIP * dx, cy + R_CLIP * dy
        out.append(f'<line x1="{CENTER:g}" y1="{cy:g}" x2="{ax:.2f}" y2="{ay:.2f}" stroke="{GRID}"/>')
        lx, ly = CENTER + (R_CLIP + 14) * dx, cy + (R_CLIP + 14) * dy
        anchor = "middle" if abs(dx) < 0.3 else ("start" if dx > 0 else "end")
        cls_attr = ' class="flag"' if flagged else ""
        shown = f"{value:.2f}" if isinstance(value, float) else f"{value}"
        out.append(
            f'<text x="{lx:.2f}" y="{ly:.2f}" text-anchor="{anchor}" fill="{color}"{cls_attr}>'
            f"{escape(name)} {shown}</text>"
        )
        for ring, b in ((R_MIN, bound.min), (R_MAX, bound.max)):
            bx, by = CENTER + ring * dx, cy + ring * dy
            out.append(f'<text x="{bx:.2f}" y="{by:.2f}" fill="{GRID}" font-size="8">{escape(_bound_label(b))}</text>')
        r = _radius(value, bound)
        points.append((CENTER + r * dx, cy + r * dy, flagged))
    poly = " ".join(f"{x:.2f},{y:.2f}" for x, y, _ in points)
    out.append(f'<polygon points="{poly}" fill="#1f77b4" fill-opacity="0.15" stroke="#1f77b4"/>')
    for x, y, flagged in points:
        out.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="3" fill="{FLAG if flagged else "#1f77b4"}"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def kiviat_flag_count(svg: str) -> int:
    return svg.count('class="flag"')


def emit_scatter(methods: Sequence[MethodComplexity]) -> tuple[str, str]:
    """(SVG, CSV) for the ev-versus-v scatter with the quadrant lines."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(["method_id", "v", "ev", "iv", "quadrant"])
    for m in methods:
        writer.writerow([m.method_id, m.v, m.ev, m.iv, m.quadrant])

    width, height, pad = 520.0, 420.0, 40.0
    vmax = max([m.v for m in methods] + [2 * V_THRESHOLD])
    evmax = max([m.ev for m in methods] + [2 * EV_THRESHOLD])

    def sx(v: float) -> float:
        return pad + (width - 2 * pad) * v / vmax

    def sy(ev: float) -> float:
        return height - pad - (height - 2 * pad) * ev / evmax

    out = _svg_open(width, height)
    x0, y0 = sx(0), sy(0)
    out.append(f'<line x1="{x0:g}" y1="{y0:g}" x2="{sx(vmax):g}" y2="{y0:g}" stroke="{INK}"/>')
    out.append(f'<line x1="{x0:g}" y1="{y0:g}" x2="{x0:g}" y2="{sy(evmax):g}" stroke="{INK}"/>')
    out.append(f'<text x="{width / 2:g}" y="{height - 8:g}" text-anchor="middle">v(G)</text>')
    out.append(f'<text x="12" y="{height / 2:g}" transform="rotate(-90 12 {height / 2:g})" text-anchor="middle">ev(G)</text>')
    out.append(
        f'<line class="quadrant" x1="{sx(V_THRESHOLD):.2f}" y1="{y0:g}" x2="{sx(V_THRESHOLD):.2f}" '
        f'y2="{sy(evmax):.2f}" stroke="{FLAG}" stroke-dasharray="4 3"/>'
    )
    out.append(
        f'<line class="quadrant" x1="{x0:g}" y1="{sy(EV_THRESHOLD):.2f}" x2="{sx(vmax):.2f}" '
        f'y2="{sy(EV_THRESHOLD):.2f}" stroke="{FLAG}" stroke-dasharray="4 3"/>'
    )
    for m in methods:
        out.append(
            f'<circle cx="{sx(m.v):.2f}" cy="{sy(m.ev):.2f}" r="3" fill="#1f77b4" fill-opacity="0.6">'
            f"<title>{escape(m.method_id)} v={m.v} ev={m.ev}</title></circle>"
        )
    out.append("</svg>")
    return "\n".join(out) + "\n", buf.getvalue()
