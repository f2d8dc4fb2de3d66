from __future__ import annotations

from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from lamina.angles import Chord, crosses, separates
from lamina.parameter import (
    Leaf,
    LaminationStore,
    brute_force_leaves,
    component_period,
    enumerate_leaves,
    get_store,
    in_entire_lamination,
    is_immediately_visible,
    is_visible,
    lavaurs_separator,
    partner,
    separating_components,
    visible_geometric,
    visible_symbolic,
)


def test_small_periods_by_hand():
    store = get_store(4)
    assert [str(L.chord) for L in store.by_period(2)] == ["1/3 2/3"]
    assert [str(L.chord) for L in store.by_period(3)] == ["1/7 2/7", "3/7 4/7", "5/7 6/7"]
    assert len(store.by_period(4)) == 6
    assert partner(F(13, 31)) == F(18, 31)
    assert partner(F(5, 31)) == F(6, 31)


def test_membership_examples():
    assert in_entire_lamination(Chord(F(13, 31), F(18, 31)))
    assert not in_entire_lamination(Chord(F(13, 31), F(14, 31)))
    assert in_entire_lamination(Chord(F(1, 3), F(2, 3)))


@pytest.mark.parametrize("n", range(2, 9))
def test_enumeration_matches_brute_force(n):
    assert sorted(brute_force_leaves(n)) == enumerate_leaves(8).by_period(n)


def test_store_to_twelve_is_a_perfect_noncrossing_matching():
    store = get_store(12)
    assert len(store) == 4015
    ends = [x for L in store for x in L.chord.ends]
    assert len(ends) == len(set(ends))
    for n in range(2, 13):
        from lamina.angles import periodic_angles

        assert {x for L in store.by_period(n) for x in L.chord.ends} == set(periodic_angles(n))
    small = store.up_to(9)
    for i, L in enumerate(small):
        for M in small[i + 1:]:
            assert not crosses(L.chord, M.chord)


def test_every_stored_leaf_passes_membership():
    for L in get_store(11):
        assert in_entire_lamination(L.chord)


def test_cache_round_trip(tmp_path):
    store = get_store(7, tmp_path)
    again = get_store(7, tmp_path)
    assert again == store
    text = (tmp_path / "bstar-7.txt").read_text()
    assert text.splitlines()[0] == "LAMINA v1 max_period=7"
    assert LaminationStore.loads(text).dumps() == text
    assert get_store(5, tmp_path / "bstar-7.txt") == get_store(5)


def test_visibility_examples():
    S = Leaf.of(F(1, 3), F(2, 3))
    assert is_visible(S, Leaf.of(F(3, 7), F(4, 7)))
    assert is_visible(Leaf.of(F(2, 5), F(3, 5)), Leaf.of(F(13, 31), F(18, 31)))
    assert is_immediately_visible(S, Leaf.of(F(2, 5), F(3, 5)), method="both")
    with pytest.raises(ValueError):
        is_visible(Leaf.of(F(3, 7), F(4, 7)), S)


def test_symbolic_and_geometric_visibility_agree_to_period_ten():
    store = get_store(10)
    checked = 0
    for S in store:
        for Q in store.behind(S):
            for strict in (True, False):
                sym = visible_symbolic(S, Q, strict)
                assert sym == visible_geometric(S, Q, store, strict)
            # "lower period" and "lower or equal period" define the same relation
            assert visible_symbolic(S, Q, True) == visible_symbolic(S, Q, False)
            checked += 1
    assert checked > 10000


def test_immediate_visibility_methods_agree():
    store = get_store(10)
    for S in store.up_to(5):
        for B in store.behind(S):
            assert is_immediately_visible(S, B, method="symbolic") == \
                is_immediately_visible(S, B, method="geometric")


def test_lavaurs_separator_examples():
    L = Leaf.of
    assert lavaurs_separator(L(F(11, 31), F(12, 31)), L(F(19, 31), F(20, 31))) == L(F(1, 3), F(2, 3))
    assert lavaurs_separator(L(F(13, 31), F(18, 31)), L(F(15, 31), F(16, 31))) == L(F(3, 7), F(4, 7))
    assert lavaurs_separator(L(F(14, 31), F(17, 31)), L(F(15, 31), F(16, 31))) == L(F(7, 15), F(8, 15))
    # no chord separates these two; the main component does
    assert lavaurs_separator(L(F(1, 7), F(2, 7)), L(F(5, 7), F(6, 7))) is None
    assert lavaurs_separator(L(F(1, 7), F(2, 7)), L(F(3, 7), F(4, 7))) is None
    with pytest.raises(ValueError):
        lavaurs_separator(L(F(1, 3), F(2, 3)), L(F(1, 3), F(2, 3)))


@settings(max_examples=60, deadline=None)
@given(st.integers(3, 8).flatmap(lambda n: st.tuples(st.sampled_from(get_store(8).by_period(n)),
                                                      st.sampled_from(get_store(8).by_period(n)))))
def test_separating_chords_match_geometry(pair):
    Q1, Q2 = pair
    if Q1 == Q2:
        return
    store = get_store(8)
    chords = {L for L in separating_components(Q1, Q2, store) if L is not None}
    geometric = {L for L in store if L not in (Q1, Q2) and separates(L.chord, Q1.chord, Q2.chord)}
    # the turning component, if any, does not separate the chords themselves
    assert geometric <= chords and len(chords - geometric) <= 1
    low = lavaurs_separator(Q1, Q2, store)
    assert component_period(low) < Q1.period
