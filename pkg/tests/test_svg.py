from __future__ import annotations

import xml.etree.ElementTree as ET
from fractions import Fraction as F

import pytest

from hilbert_padic.errors import InputError
from hilbert_padic.hecke import ValPoint, orbit
from hilbert_padic.svg import MARGIN, SIZE, crossing_point, render_square

NS = "{http://www.w3.org/2000/svg}"


def parse(svg):
    return ET.fromstring(svg)


def test_deterministic():
    o = orbit(ValPoint.single((F(1, 2), F(3, 4))), 3, 2)
    a = render_square(3, [(1, 1)], orbit=o)
    b = render_square(3, [(1, 1)], orbit=orbit(ValPoint.single((F(1, 2), F(3, 4))), 3, 2))
    assert a == b


@pytest.mark.parametrize("p", [2, 3, 5])
def test_crossing_lies_on_both_segments(p):
    c1, c2 = crossing_point(p)
    assert c1 + p * c2 == 1 and p * c1 + c2 == 1


def test_segments_and_labels():
    root = parse(render_square(3))
    segs = [e for e in root.iter(f"{NS}line") if e.get("class") == "segment"]
    assert len(segs) == 2
    labels = sorted(e.text for e in root.iter(f"{NS}text") if e.get("class") == "region")
    assert labels == ["V_anti", "V_can", "W", "W"]


def test_point_marker_position():
    root = parse(render_square(3, [(1, 1)]))
    pts = [e for e in root.iter(f"{NS}circle") if e.get("class") == "point"]
    assert len(pts) == 1
    assert float(pts[0].get("cx")) == MARGIN + SIZE
    assert float(pts[0].get("cy")) == MARGIN
    assert pts[0].find(f"{NS}title").text == "(1/1,1/1)"


def test_superspecial_orbit_has_loop_and_fan():
    Q = ValPoint.single((0, 1), flag="superspecial", w=(1, 1))
    root = parse(render_square(3, orbit=orbit(Q, 3, 1)))
    loops = [e for e in root.iter(f"{NS}circle") if e.get("class") == "loop"]
    arrows = [e for e in root.iter(f"{NS}line") if e.get("class") == "arrow"]
    assert len(loops) == 1 and loops[0].find(f"{NS}title").text == "s-branch"
    assert len(arrows) == 1 and arrows[0].find(f"{NS}title").text == "circ-branch"


def test_style_and_errors():
    assert 'stroke="#000"' in render_square(2, style="mono")
    with pytest.raises(InputError):
        render_square(2, style="neon")
    with pytest.raises(InputError):
        render_square(2, [(F(1, 2),)])
