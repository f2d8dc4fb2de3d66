"""Points of the circle R/Z, chords, and the angle-doubling map.

Angles are plain :class:`fractions.Fraction` values in ``[0, 1)``.  Every
positional predicate here works on exact rationals; nothing is ever
rounded.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Union

Angle = Fraction
HALF = Fraction(1, 2)


def angle(value) -> Fraction:
    """Coerce ``value`` (Fraction, int, or ``"a/b"`` string) to an angle in [0, 1)."""
    if isinstance(value, str):
        value = value.strip()
        if "/" in value:
            num, den = value.split("/", 1)
            value = Fraction(int(num), int(den))
        else:
            value = Fraction(int(value))
    elif not isinstance(value, Fraction):
        value = Fraction(value)
    return value % 1


def format_angle(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def double(x: Fraction) -> Fraction:
    return (2 * x) % 1


def iterate(x: Fraction, n: int) -> Fraction:
    return (x * (1 << n)) % 1


def multiplicative_order_of_two(odd: int) -> int:
    if odd == 1:
        return 1
    n, r = 1, 2 % odd
    while r != 1:
        r = (2 * r) % odd
        n += 1
    return n


def orbit_type(x: Fraction) -> tuple[int, int]:
    """Return ``(preperiod, period)`` of ``x`` under doubling."""
    den = x.denominator
    pre = 0
    while den % 2 == 0:
        den //= 2
        pre += 1
    return pre, multiplicative_order_of_two(den)


def is_periodic(x: Fraction) -> bool:
    return x.denominator % 2 == 1


def exact_period(x: Fraction) -> int | None:
    """Period of a periodic angle, ``None`` for strictly preperiodic ones."""
    if not is_periodic(x):
        return None
    return multiplicative_order_of_two(x.denominator)


def periodic_angles(n: int) -> list[Fraction]:
    """All angles of exact period ``n``, ascending."""
    den = (1 << n) - 1
    out = []
    for a in range(1, den) if n > 1 else [0]:
        x = Fraction(a, den)
        if multiplicative_order_of_two(x.denominator) == n:
            out.append(x)
    return out


def in_open_arc(x: Fraction, start: Fraction, end: Fraction) -> bool:
    """``x`` lies strictly inside the counter-clockwise arc from ``start`` to ``end``."""
    if start < end:
        return start < x < end
    return x > start or x < end


def in_closed_arc(x: Fraction, start: Fraction, end: Fraction) -> bool:
    return x == start or x == end or in_open_arc(x, start, end)


@dataclass(frozen=True, order=True)
class Chord:
    """Unordered pair of distinct angles, stored with ``a < b``."""

    a: Fraction
    b: Fraction

    def __post_init__(self):
        a, b = angle(self.a), angle(self.b)
        if a == b:
            raise ValueError(f"degenerate chord at {format_angle(a)}")
        if a > b:
            a, b = b, a
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @classmethod
    def parse(cls, text: str) -> "Chord":
        parts = text.replace(",", " ").replace("-", " ").split()
        if len(parts) != 2:
            raise ValueError(f"expected two angles, got {text!r}")
        return cls(angle(parts[0]), angle(parts[1]))

    @property
    def ends(self) -> tuple[Fraction, Fraction]:
        return self.a, self.b

    @property
    def length(self) -> Fraction:
        return chord_length(self)

    def image(self) -> "Chord | None":
        """``h`` applied to both ends; ``None`` when the image is a single point."""
        x, y = double(self.a), double(self.b)
        return None if x == y else Chord(x, y)

    def iterate(self, n: int) -> "Chord | None":
        x, y = iterate(self.a, n), iterate(self.b, n)
        return None if x == y else Chord(x, y)

    def minor_arc(self) -> tuple[Fraction, Fraction]:
        """Counter-clockwise (start, end) of the shorter arc; diameters rejected."""
        span = self.b - self.a
        if span == HALF:
            raise ValueError(f"{self} is a diameter: no smaller side")
        return (self.a, self.b) if span < HALF else (self.b, self.a)

    def __str__(self) -> str:
        return f"{format_angle(self.a)} {format_angle(self.b)}"

    def as_json(self) -> list[str]:
        return [format_angle(self.a), format_angle(self.b)]


def chord_length(c: Chord) -> Fraction:
    span = c.b - c.a
    return min(span, 1 - span)


def is_between(x: Fraction, c: Chord) -> bool:
    """``x`` lies on the open smaller arc cut off by ``c``."""
    start, end = c.minor_arc()
    return in_open_arc(x, start, end)


def crosses(c1: Chord, c2: Chord) -> bool:
    if c1 == c2 or set(c1.ends) & set(c2.ends):
        return False
    return (c1.a < c2.a < c1.b) != (c1.a < c2.b < c1.b)


ChordOrAngle = Union[Chord, Fraction]


def is_behind(target: ChordOrAngle, c: Chord) -> bool:
    """Whether ``target`` (an angle or a chord) lies behind ``c``.

    A chord is behind ``c`` when it differs from ``c`` and both of its ends
    sit on the closed smaller arc of ``c``; shared endpoints are allowed.
    """
    if isinstance(target, Chord):
        start, end = c.minor_arc()
        if target == c:
            return False
        return in_closed_arc(target.a, start, end) and in_closed_arc(target.b, start, end)
    return is_between(target, c)


def _side(s: Chord, x: ChordOrAngle) -> bool:
    if isinstance(x, Chord):
        return is_behind(x, s)
    if x in s.ends:
        raise ValueError(f"angle {format_angle(x)} is an end of {s}")
    return is_between(x, s)


def separates(s: Chord, c1: ChordOrAngle, c2: ChordOrAngle) -> bool:
    """``s`` separates ``c1`` from ``c2``: they sit on opposite sides of ``s``."""
    chords = [c for c in (s, c1, c2) if isinstance(c, Chord)]
    for i, p in enumerate(chords):
        for q in chords[i + 1:]:
            if crosses(p, q):
                raise ValueError(f"crossing chords {p} and {q}")
    if c1 == c2 or s == c1 or s == c2:
        return False
    return _side(s, c1) != _side(s, c2)


def between_chords(x: ChordOrAngle, b1: Chord, b2: Chord) -> bool:
    """``x`` lies in the closed region bounded by the disjoint chords ``b1``, ``b2``
    and is not contained in ``b1`` or ``b2``."""
    if crosses(b1, b2) or b1 == b2:
        raise ValueError("between_chords needs two distinct non-crossing chords")

    def outer_arc(c: Chord, other: Chord) -> tuple[Fraction, Fraction]:
        # open arc of c facing away from other
        if in_closed_arc(other.a, c.a, c.b) and in_closed_arc(other.b, c.a, c.b):
            return c.b, c.a
        return c.a, c.b

    arcs = [outer_arc(b1, b2), outer_arc(b2, b1)]

    def inside(p: Fraction) -> bool:
        return not any(in_open_arc(p, *arc) for arc in arcs)

    if isinstance(x, Chord):
        if x in (b1, b2):
            return False
        return inside(x.a) and inside(x.b)
    return inside(x) and x not in b1.ends + b2.ends


def angle_from_binary(prefix: str, repeat: str) -> Fraction:
    """The angle ``.prefix(repeat)(repeat)...`` in binary."""
    if not repeat:
        raise ValueError("repeat block must be non-empty")
    p, r = len(prefix), len(repeat)
    head = Fraction(int(prefix, 2) if prefix else 0, 1 << p)
    tail = Fraction(int(repeat, 2), ((1 << r) - 1) << p)
    return (head + tail) % 1


def binary_of(x: Fraction) -> tuple[str, str]:
    """Binary expansion as ``(prefix, repeat)``; dyadics get the ``...0000`` form."""
    pre, per = orbit_type(x)
    bits = []
    y = x
    for _ in range(pre + per):
        y2 = 2 * y
        bits.append("1" if y2 >= 1 else "0")
        y = y2 % 1
    word = "".join(bits)
    return word[:pre], word[pre:]


def binary_expansions(x: Fraction) -> list[tuple[str, str]]:
    """Both binary expansions of a dyadic angle (the ``...000`` one first);
    a single expansion otherwise."""
    prefix, repeat = binary_of(x)
    if repeat != "0":
        return [(prefix, repeat)]
    if x == 0:
        return [("", "0"), ("", "1")]
    last = prefix.rindex("1")
    return [(prefix[: last + 1], "0"), (prefix[:last] + "0", "1")]


def dyadic_level(x: Fraction) -> int | None:
    """``l`` such that ``x`` is first mapped to 0 after ``l`` doublings."""
    den = x.denominator
    if den & (den - 1):
        return None
    return den.bit_length() - 1


def common_denominator(*xs: Fraction) -> int:
    d = 1
    for x in xs:
        d = d * x.denominator // gcd(d, x.denominator)
    return d
