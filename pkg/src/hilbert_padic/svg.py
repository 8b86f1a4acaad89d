"""Deterministic SVG drawing of the degree-two valuation square."""

from __future__ import annotations

from fractions import Fraction
from typing import Optional, Sequence

from .errors import InputError
from .hecke import Orbit, OrbitNode

SIZE = 400
MARGIN = 48

STYLES = {
    "default": {"frame": "#222", "segment": "#1f5fbf", "point": "#c0392b", "arrow": "#555", "loop": "#8e44ad",
                "text": "#222"},
    "mono": {"frame": "#000", "segment": "#000", "point": "#000", "arrow": "#000", "loop": "#000", "text": "#000"},
}


def _num(x: float) -> str:
    s = f"{x:.3f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def _xy(nu: Sequence) -> tuple:
    a, b = (Fraction(x) for x in nu)
    return MARGIN + SIZE * float(a), MARGIN + SIZE * float(1 - b)


def crossing_point(p: int) -> tuple:
    """Intersection of the two boundary segments."""
    c = Fraction(1, p + 1)
    return c, c


def _edges(root: OrbitNode, prime: int) -> list:
    seen = []
    stack = [root]
    while stack:
        node = stack.pop(0)
        for c in node.children:
            e = (tuple(node.point.at(prime).nu), tuple(c.point.at(prime).nu), c.tag)
            if e not in seen:
                seen.append(e)
            stack.append(c)
    return seen


def render_square(p: int, points: Sequence = (), orbit: Optional[Orbit] = None, style: str = "default") -> str:
    """SVG text for the square with both boundary segments, region labels, points and orbit arrows.

    ``points`` are pairs of rationals; the output depends only on the inputs.
    """
    if style not in STYLES:
        raise InputError(f"unknown style {style!r}; choose from {sorted(STYLES)}")
    col = STYLES[style]
    W = SIZE + 2 * MARGIN
    F = Fraction
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{W}" viewBox="0 0 {W} {W}">',
        "<defs>",
        f'<marker id="arrow" viewBox="0 0 10 10" refX="9" refY="5" markerWidth="6" markerHeight="6" '
        f'orient="auto-start-reverse"><path d="M0,0 L10,5 L0,10 z" fill="{col["arrow"]}"/></marker>',
        "</defs>",
        f'<rect x="{MARGIN}" y="{MARGIN}" width="{SIZE}" height="{SIZE}" fill="none" stroke="{col["frame"]}" '
        f'stroke-width="1.5"/>',
    ]
    for a, b in (((0, F(1, p)), (1, 0)), ((F(1, p), 0), (0, 1))):
        (x1, y1), (x2, y2) = _xy(a), _xy(b)
        lines.append(f'<line class="segment" x1="{_num(x1)}" y1="{_num(y1)}" x2="{_num(x2)}" y2="{_num(y2)}" '
                     f'stroke="{col["segment"]}" stroke-width="1.5"/>')
    cx, cy = _xy(crossing_point(p))
    lines.append(f'<circle class="crossing" cx="{_num(cx)}" cy="{_num(cy)}" r="2.5" fill="{col["segment"]}"/>')
    labels = [
        ("V_can", (F(3, 4), F(3, 4))),
        ("V_anti", (F(1, 2 * (p + 1)), F(1, 2 * (p + 1)))),
        ("W", (F(1, 2 * p), F(1, 2) + F(1, 4))),
        ("W", (F(1, 2) + F(1, 4), F(1, 2 * p))),
    ]
    for text, pos in labels:
        x, y = _xy(pos)
        lines.append(f'<text class="region" x="{_num(x)}" y="{_num(y)}" font-family="sans-serif" font-size="13" '
                     f'text-anchor="middle" fill="{col["text"]}">{text}</text>')
    for text, x, y, anchor in (("nu_1", MARGIN + SIZE / 2, MARGIN + SIZE + 32, "middle"),
                               ("nu_2", MARGIN - 30, MARGIN + SIZE / 2, "middle"),
                               ("0", MARGIN - 6, MARGIN + SIZE + 14, "end"),
                               ("1", MARGIN + SIZE, MARGIN + SIZE + 14, "middle"),
                               ("1", MARGIN - 6, MARGIN + 4, "end")):
        lines.append(f'<text x="{_num(x)}" y="{_num(y)}" font-family="sans-serif" font-size="12" '
                     f'text-anchor="{anchor}" fill="{col["text"]}">{text}</text>')

    pts: list = [tuple(F(x) for x in q) for q in points]
    if orbit is not None:
        for a, b, tag in _edges(orbit.root, orbit.prime):
            if a == b:
                x, y = _xy(a)
                lines.append(f'<circle class="loop" cx="{_num(x + 9)}" cy="{_num(y - 9)}" r="9" fill="none" '
                             f'stroke="{col["loop"]}" stroke-width="1.2"><title>{tag}</title></circle>')
            else:
                (x1, y1), (x2, y2) = _xy(a), _xy(b)
                lines.append(f'<line class="arrow" x1="{_num(x1)}" y1="{_num(y1)}" x2="{_num(x2)}" y2="{_num(y2)}" '
                             f'stroke="{col["arrow"]}" stroke-width="1" marker-end="url(#arrow)">'
                             f'<title>{tag}</title></line>')
            for q in (a, b):
                if q not in pts:
                    pts.append(q)
    for q in pts:
        if len(q) != 2:
            raise InputError("the square shows degree-two valuation data only")
        x, y = _xy(q)
        title = ",".join(f"{v.numerator}/{v.denominator}" for v in q)
        lines.append(f'<circle class="point" cx="{_num(x)}" cy="{_num(y)}" r="4" fill="{col["point"]}">'
                     f'<title>({title})</title></circle>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
