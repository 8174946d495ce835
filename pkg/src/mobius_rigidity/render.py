"""SVG drawings of planar configurations."""

from xml.sax.saxutils import escape

import numpy as np

from .errors import DimensionMismatch
from .inversive import HalfSpace, Side, Sphere
from .solver import Kind

SIZE = 600
PAD = 40
COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf")


def _bounds(conf):
    xs, ys = [], []
    for x in conf.items:
        if isinstance(x, Sphere):
            c, r = np.array(x.center), x.radius
            xs += [c[0] - r, c[0] + r]
            ys += [c[1] - r, c[1] + r]
        elif isinstance(x, HalfSpace):
            foot = x.offset * np.array(x.normal)
            xs.append(foot[0])
            ys.append(foot[1])
        elif not x.is_infinite:
            xs.append(x.coords[0])
            ys.append(x.coords[1])
    if not xs:
        return -1.0, 1.0, -1.0, 1.0
    x0, x1, y0, y1 = min(xs), max(xs), min(ys), max(ys)
    span = max(x1 - x0, y1 - y0, 1.0)
    cx, cy = (x0 + x1) / 2, (y0 + y1) / 2
    half = 0.6 * span
    return cx - half, cx + half, cy - half, cy + half


def _clip_line(n, d, box):
    """Segment of the line n . x = d inside box (Liang-Barsky); None if it misses."""
    x0, x1, y0, y1 = box
    p = d * np.array(n)
    t_dir = np.array([-n[1], n[0]])
    lo, hi = -np.inf, np.inf
    for k, (a, b) in enumerate(((x0, x1), (y0, y1))):
        if abs(t_dir[k]) < 1e-15:
            if not a <= p[k] <= b:
                return None
            continue
        ta, tb = (a - p[k]) / t_dir[k], (b - p[k]) / t_dir[k]
        lo, hi = max(lo, min(ta, tb)), min(hi, max(ta, tb))
    if lo > hi:
        return None
    return p + lo * t_dir, p + hi * t_dir


def render_svg(conf, title=None):
    """SVG text for a dim-2 configuration; output bytes depend only on the input."""
    if conf.dim != 2:
        raise DimensionMismatch(f"rendering needs dim 2, got {conf.dim}")
    box = _bounds(conf)
    x0, x1, y0, y1 = box
    scale = (SIZE - 2 * PAD) / (x1 - x0)

    def sx(x):
        return PAD + (x - x0) * scale

    def sy(y):
        return SIZE - PAD - (y - y0) * scale

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">',
        f'<rect x="0" y="0" width="{SIZE}" height="{SIZE}" fill="white"/>',
        f'<rect x="{PAD}" y="{PAD}" width="{SIZE - 2 * PAD}" height="{SIZE - 2 * PAD}" fill="none" stroke="#ccc"/>',
    ]
    if title:
        out.append(f'<text x="{PAD}" y="{PAD - 15}" font-size="14" font-family="sans-serif">{escape(title)}</text>')
    at_infinity = []
    for k, (label, x) in enumerate(zip(conf.labels, conf.items)):
        col = COLORS[k % len(COLORS)]
        lab = escape(label)
        if isinstance(x, Sphere):
            cx, cy, r = sx(x.center[0]), sy(x.center[1]), x.radius * scale
            if x.side is Side.INSIDE:
                out.append(f'<circle cx="{cx:.3f}" cy="{cy:.3f}" r="{r:.3f}" fill="{col}" fill-opacity="0.12" '
                           f'stroke="{col}" stroke-width="2"/>')
            else:
                out.append(f'<circle cx="{cx:.3f}" cy="{cy:.3f}" r="{r:.3f}" fill="none" '
                           f'stroke="{col}" stroke-width="2" stroke-dasharray="6,4"/>')
                lab += " (outside)"
            out.append(f'<text x="{cx + r * 0.71 + 4:.3f}" y="{cy - r * 0.71 - 4:.3f}" font-size="13" '
                       f'font-family="sans-serif" fill="{col}">{lab}</text>')
        elif isinstance(x, HalfSpace):
            seg = _clip_line(x.normal, x.offset, box)
            if seg is None:
                at_infinity.append(f"{label}: boundary outside view")
                continue
            (ax, ay), (bx, by) = seg
            out.append(f'<line x1="{sx(ax):.3f}" y1="{sy(ay):.3f}" x2="{sx(bx):.3f}" y2="{sy(by):.3f}" '
                       f'stroke="{col}" stroke-width="2"/>')
            mx, my = (ax + bx) / 2, (ay + by) / 2
            tip = np.array([mx, my]) + 0.06 * (x1 - x0) * np.array(x.normal)
            out.append(f'<line x1="{sx(mx):.3f}" y1="{sy(my):.3f}" x2="{sx(tip[0]):.3f}" y2="{sy(tip[1]):.3f}" '
                       f'stroke="{col}" stroke-width="2"/>')
            out.append(f'<text x="{sx(tip[0]) + 4:.3f}" y="{sy(tip[1]) - 4:.3f}" font-size="13" '
                       f'font-family="sans-serif" fill="{col}">{lab} (through ∞)</text>')
        elif x.is_infinite:
            at_infinity.append(f"{label} = ∞")
        else:
            px, py = sx(x.coords[0]), sy(x.coords[1])
            out.append(f'<circle cx="{px:.3f}" cy="{py:.3f}" r="4" fill="{col}"/>')
            out.append(f'<text x="{px + 6:.3f}" y="{py - 6:.3f}" font-size="13" '
                       f'font-family="sans-serif" fill="{col}">{lab}</text>')
    for i, note in enumerate(at_infinity):
        out.append(f'<text x="{PAD + 4}" y="{SIZE - PAD - 8 - 16 * i}" font-size="12" '
                   f'font-family="sans-serif" fill="#444">{escape(note)}</text>')
    kind = "points" if conf.kind is Kind.POINTS else "balls"
    out.append(f'<!-- {len(conf)} {kind} -->')
    out.append("</svg>")
    return "\n".join(out) + "\n"
