from __future__ import annotations

from fractions import Fraction as F
from math import gcd

import pytest

from lamina.angles import is_behind
from lamina.kneading import address_from_kneading, kneading_of_angle
from lamina.parameter import Leaf, get_store
from lamina.principles import scan_translation
from lamina.tuning import sublimb
from lamina.vistree import sublimb_shift, trees_equivalent, visibility_tree

W = Leaf.of(F(13, 31), F(18, 31))
BASILICA = Leaf.of(F(1, 3), F(2, 3))


def test_basilica_trees():
    assert visibility_tree(BASILICA, 1, 2).canonical() == (4, ((3, ()),))
    assert visibility_tree(BASILICA, 1, 3).canonical() == (6, ((5, ()),))
    assert visibility_tree(BASILICA, 1, 3).root.children[0].leaf.chord.as_json() == ["11/31", "12/31"]


def test_counterexample_trees():
    t2 = visibility_tree(W, 1, 2)
    t3 = visibility_tree(W, 1, 3)
    assert t2.canonical() == (10, ((9, ((7, ((3, ()),)),)),))
    assert t3.canonical() == (15, ((14, ((12, ((8, ()), (11, ()))),)),))
    assert t3.periods() == [8, 11, 12, 14, 15]
    assert not trees_equivalent(t2, t3, sublimb_shift(t2, t3))
    mirror = visibility_tree(W, 2, 3)
    assert mirror.periods() == t3.periods()


def test_translation_holds_for_a_narrow_leaf():
    S = Leaf.of(F(5, 31), F(6, 31))
    t2, t3 = visibility_tree(S, 1, 2), visibility_tree(S, 1, 3)
    assert t2.periods() == [6, 7, 8, 9, 10]
    assert trees_equivalent(t2, t3, 5)
    assert trees_equivalent(t2, visibility_tree(S, 2, 3), 5)


def _oracle_leaves(S: Leaf, p: int, q: int, store) -> set:
    # visible leaves behind B straight from the global store
    B = sublimb(S, p, q).B
    behind = [L for L in store.up_to(B.period - 1) if is_behind(L.chord, B.chord)]
    out = set()
    for L in behind:
        if not any(X.period < L.period and X != L and is_behind(L.chord, X.chord) for X in behind):
            out.add(L)
    return out | {B}


CASES = [(S, p, q) for S in get_store(4) if S.b - S.a < F(1, 2)
         for q in (2, 3) for p in range(1, q) if gcd(p, q) == 1]


@pytest.mark.parametrize("case", CASES, ids=lambda c: f"{c[0]}-{c[1]}-{c[2]}")
def test_tree_matches_global_oracle(case):
    S, p, q = case
    store = get_store(12)
    t = visibility_tree(S, p, q)
    assert set(t.leaves()) == _oracle_leaves(S, p, q, store)
    prefix = address_from_kneading(kneading_of_angle(S.a), max_entry=S.period).entries
    for node in t.walk():
        assert node.period <= q * S.period
        if node.period > S.period:
            # lower-period leaves (the airplane behind 2/5 3/5) sit off the address tree of S
            a = address_from_kneading(kneading_of_angle(node.leaf.a), max_entry=node.period)
            assert a.entries[:len(prefix)] == prefix
        for child in node.children:
            assert child.period < node.period
            assert is_behind(child.leaf.chord, node.leaf.chord)


def test_scan_finds_only_the_counterexample_up_to_period_five():
    fails = scan_translation(get_store(5), 5, 3)
    assert [(str(S.chord), bad) for S, bad in fails] == [("13/31 18/31", [(1, 3), (2, 3)])]
