from __future__ import annotations

from fractions import Fraction as F

import pytest

from lamina.angles import Chord
from lamina.parameter import Leaf, get_store
from lamina.principles import (
    between_arcs,
    cached_sublimb,
    check_correspondence,
    check_gateway_kneading,
    check_lengths,
    check_pair_transfer,
    check_partial_translation,
    check_tree_hypothesis,
    gateway_pairs,
    original_translation_failures,
    q_map,
    sublimb_fractions,
)

BASILICA = Leaf.of(F(1, 3), F(2, 3))
W = Leaf.of(F(13, 31), F(18, 31))
NARROW = Leaf.of(F(5, 31), F(6, 31))


def test_sublimb_fractions():
    assert sublimb_fractions(2) == [(1, 2)]
    assert sublimb_fractions(4) == [(1, 4), (3, 4)]
    assert len(sublimb_fractions(7)) == 6


def test_q_map_example():
    d = cached_sublimb(BASILICA, 1, 3)
    (p,) = gateway_pairs(d)
    assert p.word == "0101" and p.s1 == Chord(F(17, 48), F(19, 48))
    assert q_map(d, p) == Leaf.of(F(11, 31), F(12, 31))


def test_between_arcs_are_the_two_mixed_arcs():
    arcs = between_arcs(Chord(F(17, 48), F(19, 48)), Chord(F(35, 96), F(37, 96)))
    assert sorted(arcs) == [(F(17, 48), F(35, 96)), (F(37, 96), F(19, 48))]


@pytest.mark.parametrize("S", [BASILICA, NARROW, W], ids=str)
@pytest.mark.parametrize("pq", [(1, 2), (1, 3), (2, 3), (1, 4)], ids=lambda t: f"{t[0]}-{t[1]}")
def test_correspondence_holds(S, pq):
    rep = check_correspondence(cached_sublimb(S, *pq))
    assert rep.holds, rep.failures
    d = rep.details
    assert d["injective"] and d["embedding"]
    if pq[1] >= 3:
        assert d["semi_bijective"] and d["semi_step_period"] and d["iterate_condition"]


def test_counterexample_map_misses_one_node():
    d = check_correspondence(cached_sublimb(W, 1, 3)).details
    assert d["surjective"] is False
    assert d["uncovered"] == ["11 867/2047 868/2047"]
    assert d["visible_pairs"] == 3 and d["tree_nodes"] == 4
    assert check_correspondence(cached_sublimb(NARROW, 1, 3)).details["surjective"]


def test_translation_failures():
    assert original_translation_failures(W, 3) == [(1, 3), (2, 3)]
    assert original_translation_failures(NARROW, 4) == []
    rep = check_partial_translation(W, 4)
    assert rep.holds
    assert rep.details["half_equivalent_to_third"] is False
    assert rep.details["matches"]["1/4"] == ["1/3"]


@pytest.mark.parametrize("S", [BASILICA, NARROW, W], ids=str)
def test_gateway_checks(S):
    for q in (2, 3, 4):
        assert check_lengths(S, q).holds
        for p in range(1, q):
            if (p, q) in sublimb_fractions(q):
                assert check_gateway_kneading(S, p, q).holds
    assert check_tree_hypothesis(S, 4).holds


def test_pair_transfer():
    rep = check_pair_transfer(NARROW, (1, 3), (1, 4))
    assert rep.holds
    inapplicable = [check_pair_transfer(S, (1, 3), (2, 3)) for S in get_store(4).up_to(4)
                    if S.b - S.a < F(1, 2)]
    assert all(r.holds for r in inapplicable)


def test_contract_entry_points():
    from lamina.principles import check_lemma_III, check_theorem_I, check_theorem_II

    assert check_theorem_I(W, 4).details == check_partial_translation(W, 4).details
    rep = check_theorem_II(NARROW, [((1, 3), (1, 4)), ((1, 3), (3, 4))])
    assert rep.holds and rep.details["hypothesis_held"] == 1
    assert check_lemma_III(NARROW, (1, 3), (1, 4)).details == {"applicable": True, "matched": 15}
