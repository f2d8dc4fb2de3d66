from __future__ import annotations

from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from lamina.angles import (
    Chord,
    angle,
    angle_from_binary,
    binary_expansions,
    binary_of,
    chord_length,
    crosses,
    double,
    dyadic_level,
    exact_period,
    is_behind,
    is_between,
    iterate,
    orbit_type,
    periodic_angles,
    separates,
)

angles = st.builds(lambda a, b: F(a, b), st.integers(0, 4000), st.integers(1, 4000)).map(lambda x: x % 1)


def test_angle_parsing():
    assert angle("13/31") == F(13, 31)
    assert angle("5/4") == F(1, 4)
    assert angle(F(-1, 3)) == F(2, 3)


def test_orbit_types():
    assert orbit_type(F(13, 31)) == (0, 5)
    assert orbit_type(F(5, 12)) == (2, 2)
    assert exact_period(F(1, 3)) == 2
    assert exact_period(F(1, 6)) is None
    assert dyadic_level(F(3, 8)) == 3 and dyadic_level(F(1, 3)) is None


def test_periodic_angle_counts():
    # angles of exact period n: sum over divisors by Moebius inversion
    assert [len(periodic_angles(n)) for n in range(2, 8)] == [2, 6, 12, 30, 54, 126]


def test_chord_normalizes_and_rejects_degenerate():
    c = Chord(F(2, 3), F(1, 3))
    assert (c.a, c.b) == (F(1, 3), F(2, 3))
    with pytest.raises(ValueError):
        Chord(F(1, 3), F(4, 3))
    assert Chord.parse("13/31 18/31") == Chord(F(13, 31), F(18, 31))
    assert str(Chord(F(5, 12), F(7, 12))) == "5/12 7/12"


def test_lengths_and_sides():
    c = Chord(F(1, 6), F(5, 6))
    assert chord_length(c) == F(1, 3)
    assert is_between(F(0), c) and not is_between(F(1, 2), c)
    with pytest.raises(ValueError):
        Chord(F(1, 4), F(3, 4)).minor_arc()


def test_behind_and_separation():
    S = Chord(F(1, 3), F(2, 3))
    Q = Chord(F(3, 7), F(4, 7))
    assert is_behind(Q, S) and not is_behind(S, Q)
    assert not is_behind(S, S)
    assert separates(S, Q, Chord(F(1, 7), F(2, 7)))
    assert not separates(S, Q, Chord(F(2, 5), F(3, 5)))
    assert crosses(Chord(F(1, 7), F(3, 7)), Chord(F(2, 7), F(4, 7)))
    with pytest.raises(ValueError):
        separates(S, Chord(F(1, 7), F(3, 7)), Chord(F(2, 7), F(4, 7)))


def test_image_of_diameter_degenerates():
    assert Chord(F(1, 4), F(3, 4)).image() is None
    assert Chord(F(1, 7), F(2, 7)).image() == Chord(F(2, 7), F(4, 7))


@given(angles)
def test_binary_round_trip(x):
    for prefix, repeat in binary_expansions(x):
        assert angle_from_binary(prefix, repeat) == x
    assert angle_from_binary(*binary_of(x)) == x


@given(angles, st.integers(0, 12))
def test_iterate_is_repeated_doubling(x, n):
    y = x
    for _ in range(n):
        y = double(y)
    assert iterate(x, n) == y


@given(angles, angles, angles, angles)
def test_crossing_is_symmetric(a, b, c, d):
    if len({a, b}) < 2 or len({c, d}) < 2:
        return
    c1, c2 = Chord(a, b), Chord(c, d)
    assert crosses(c1, c2) == crosses(c2, c1)
    if not crosses(c1, c2) and c1 != c2 and F(1, 2) not in (c1.b - c1.a,):
        # a chord behind another is never longer
        if is_behind(c2, c1):
            assert c2.length <= c1.length
