"""Newton polygons of polynomials with coefficients in k[[u]]."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .errors import DegenerateInput
from .rational import to_rat


def lower_hull(points: Sequence[tuple[int, Fraction]]) -> list[tuple[int, Fraction]]:
    """Vertices of the lower convex hull, left to right (monotone chain)."""
    pts = sorted(points)
    hull: list[tuple[int, Fraction]] = []
    for pt in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # drop the middle vertex unless it lies strictly below the chord
            if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    return hull


def newton_slopes(pairs: Iterable[tuple[int, Optional[object]]]) -> list[tuple[Fraction, int]]:
    """Root valuations and multiplicities from (exponent, coefficient valuation) pairs.

    A valuation of ``None`` marks a zero coefficient.  The result lists
    (root valuation, number of roots) segment by segment, from the largest
    root valuation to the smallest.
    """
    pairs = list(pairs)
    exps = [int(x) for x, _ in pairs]
    if len(set(exps)) != len(exps):
        raise DegenerateInput("repeated exponent in Newton polygon input")
    if any(x < 0 for x in exps):
        raise DegenerateInput("negative exponent in Newton polygon input")
    finite = [(int(x), to_rat(v)) for x, v in pairs if v is not None]
    if len(finite) < 2:
        raise DegenerateInput("need at least two coefficients of finite valuation")
    top = max(exps)
    if all(x != top for x, _ in finite):
        raise DegenerateInput("leading coefficient has infinite valuation")
    if min(x for x, _ in finite) != 0:
        raise DegenerateInput("constant term vanishes: zero is a root")
    hull = lower_hull(finite)
    out = []
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        out.append((-(y2 - y1) / (x2 - x1), x2 - x1))
    return out
