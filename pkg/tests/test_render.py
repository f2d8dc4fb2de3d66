from __future__ import annotations

import math
import re
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from lamina.angles import Chord
from lamina.parameter import Leaf, LaminationStore, get_store
from lamina.render import RenderSpec, geodesic, leaf_lamination_chords, render_chords, render_svg
from lamina.vistree import visibility_tree

PATH = re.compile(r'd="M (\S+) (\S+) (?:L (\S+) (\S+)|A (\S+) \S+ 0 0 ([01]) (\S+) (\S+))"')


def test_empty_picture_is_just_the_circle():
    svg = render_chords([])
    assert svg.count("<circle") == 1 and "<path" not in svg


def test_parameter_picture_counts():
    svg = render_svg(RenderSpec("parameter-lamination", 4), get_store(4))
    assert svg.count("<path") == 1 + 3 + 6


def test_diameter_is_a_straight_line():
    g = geodesic(Chord(F(1, 4), F(3, 4)))
    assert g[0] == "line"
    assert " L " in render_chords([Chord(F(1, 4), F(3, 4))])


def test_output_is_deterministic():
    S = Leaf.of(F(13, 31), F(18, 31))
    spec = RenderSpec("lamination-of-leaf", 5)
    assert render_svg(spec, S) == render_svg(spec, S)
    chords = leaf_lamination_chords(S, 5)
    assert render_chords(chords) == render_chords(list(reversed(chords)))


def test_spec_validation():
    with pytest.raises(ValueError):
        RenderSpec("bogus")
    with pytest.raises(ValueError):
        RenderSpec("lamination-of-leaf", 99)
    tree = visibility_tree(Leaf.of(F(1, 3), F(2, 3)), 1, 2)
    assert render_svg(RenderSpec("visibility-tree", 0), tree).count("<path") == 2


chords = st.integers(3, 400).flatmap(
    lambda den: st.lists(st.integers(0, den - 1), min_size=2, max_size=2, unique=True).map(
        lambda ks: Chord(F(min(ks), den), F(max(ks), den))))


@settings(max_examples=150, deadline=None)
@given(chords)
def test_arcs_are_orthogonal_and_bend_inwards(c):
    g = geodesic(c)
    if g[0] == "line":
        return
    (cx, cy), r = g[3], g[4]
    assert math.isclose(r * r + 1, cx * cx + cy * cy, rel_tol=1e-9)
    for p in (g[1], g[2]):
        assert math.isclose(math.hypot(p[0] - cx, p[1] - cy), r, rel_tol=1e-9)
    # rebuild the SVG arc from its endpoints, radius and sweep flag; its midpoint must lie inside the disc
    size = 600
    svg = render_chords([c], size_px=size)
    m = PATH.search(svg)
    x1, y1, x2, y2 = (float(m.group(i)) for i in (1, 2, 7, 8))
    rad, sweep = float(m.group(5)), int(m.group(6))
    mid, scale = size / 2, size / 2 - 10
    # endpoint-to-centre conversion from the SVG implementation notes (rx = ry, no rotation, small arc)
    xp, yp = (x1 - x2) / 2, (y1 - y2) / 2
    coef = math.sqrt(max(rad * rad - xp * xp - yp * yp, 0.0) / (xp * xp + yp * yp))
    sign = 1 if sweep != 0 else -1
    ccx, ccy = sign * coef * yp + (x1 + x2) / 2, -sign * coef * xp + (y1 + y2) / 2
    vx, vy = (x1 + x2) / 2 - ccx, (y1 + y2) / 2 - ccy
    n = math.hypot(vx, vy)
    px, py = ccx + rad * vx / n, ccy + rad * vy / n
    assert math.hypot(px - mid, py - mid) < scale
