"""SVG pictures of laminations with leaves drawn as hyperbolic geodesics."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .angles import Chord
from .parameter import Leaf

KINDS = ("lamination-of-leaf", "parameter-lamination", "visibility-tree")
MAX_DEPTH = 14
MAX_PERIOD = 14


@dataclass(frozen=True)
class RenderSpec:
    what: str
    depth: int = 6
    highlight: tuple[Chord, ...] = field(default_factory=tuple)
    size_px: int = 600

    def __post_init__(self):
        if self.what not in KINDS:
            raise ValueError(f"unknown picture kind {self.what!r}")
        limit = MAX_PERIOD if self.what == "parameter-lamination" else MAX_DEPTH
        if not 0 <= self.depth <= limit:
            raise ValueError(f"depth {self.depth} outside 0..{limit}")
        if self.size_px < 16:
            raise ValueError("size_px too small")


def _fmt(v: float) -> str:
    s = f"{v:.9f}"
    return "0.000000000" if s == "-0.000000000" else s


def _point(t: Fraction) -> tuple[float, float]:
    # unit-disc coordinates, y pointing up
    a = 2 * math.pi * float(t)
    return math.cos(a), math.sin(a)


def geodesic(c: Chord) -> tuple:
    """``("line", p1, p2)`` for diameters, else ``("arc", p1, p2, center, radius)``
    for the circle orthogonal to the unit circle through both ends."""
    p1, p2 = _point(c.a), _point(c.b)
    span = c.b - c.a
    if span == Fraction(1, 2):
        return ("line", p1, p2)
    lo, hi = c.minor_arc()
    width = (hi - lo) % 1
    mid = lo + width / 2
    half = math.pi * float(width)
    dist = 1 / math.cos(half)
    mx, my = _point(mid)
    return ("arc", p1, p2, (dist * mx, dist * my), math.tan(half))


class _Canvas:
    def __init__(self, size: int):
        self.size = size
        self.scale = size / 2 - 10
        self.mid = size / 2

    def xy(self, p: tuple[float, float]) -> tuple[str, str]:
        return _fmt(self.mid + self.scale * p[0]), _fmt(self.mid - self.scale * p[1])

    def path(self, c: Chord) -> str:
        g = geodesic(c)
        x1, y1 = self.xy(g[1])
        x2, y2 = self.xy(g[2])
        if g[0] == "line":
            return f"M {x1} {y1} L {x2} {y2}"
        cx, cy = g[3]
        r = g[4] * self.scale
        # screen coordinates flip y, so the orientation test uses flipped vectors
        ux, uy = g[1][0] - cx, -(g[1][1] - cy)
        vx, vy = g[2][0] - cx, -(g[2][1] - cy)
        sweep = 1 if ux * vy - uy * vx > 0 else 0
        return f"M {x1} {y1} A {_fmt(r)} {_fmt(r)} 0 0 {sweep} {x2} {y2}"


def render_chords(chords: Iterable[Chord], highlight: Iterable[Chord] = (), size_px: int = 600,
                  title: str | None = None) -> str:
    """SVG 1.1 document: the unit circle plus every chord as a geodesic."""
    cv = _Canvas(size_px)
    marked = list(dict.fromkeys(highlight))
    plain = [c for c in dict.fromkeys(chords) if c not in set(marked)]
    plain.sort(key=lambda c: (c.a, c.b))
    marked.sort(key=lambda c: (c.a, c.b))
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{size_px}" height="{size_px}" '
        f'viewBox="0 0 {size_px} {size_px}">',
    ]
    if title:
        lines.append(f"<title>{title}</title>")
    lines.append(f'<circle cx="{_fmt(cv.mid)}" cy="{_fmt(cv.mid)}" r="{_fmt(cv.scale)}" '
                 'fill="none" stroke="black" stroke-width="1"/>')
    for c in plain:
        lines.append(f'<path class="leaf" d="{cv.path(c)}" fill="none" stroke="#1f4e9c" stroke-width="0.6"/>')
    for c in marked:
        lines.append(f'<path class="highlight" d="{cv.path(c)}" fill="none" stroke="#c0392b" stroke-width="1.6"/>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def parameter_chords(store, max_period: int) -> list[Chord]:
    return [L.chord for L in store.up_to(max_period)]


def leaf_lamination_chords(S: Leaf, depth: int) -> list[Chord]:
    """The orbit of ``S`` and every pullback ``L_u(S)`` with ``|u| <= depth``."""
    from .dynamic import PullbackTable, context_of

    ctx = context_of(S)
    table = PullbackTable(ctx)
    table.extend_to(depth)
    out = [S.chord.iterate(i) for i in range(S.period)]
    for level in table.levels[1:]:
        out.extend(table[u] for u in sorted(level))
    return out


def render_svg(spec: RenderSpec, data) -> str:
    """``data``: a store (parameter lamination), a leaf (its dynamic lamination) or a tree."""
    if spec.what == "parameter-lamination":
        chords = parameter_chords(data, spec.depth)
        title = f"periodic parameter leaves up to period {spec.depth}"
    elif spec.what == "lamination-of-leaf":
        chords = leaf_lamination_chords(data, spec.depth)
        title = f"lamination of {data.chord} to depth {spec.depth}"
    else:
        chords = [L.chord for L in data.leaves()]
        title = f"visibility tree of {data.S.chord} in sublimb {data.p}/{data.q}"
    return render_chords(chords, spec.highlight, spec.size_px, title)
