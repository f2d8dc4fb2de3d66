"""Checkers relating dynamic pairs behind a gateway to visible parameter leaves,
and comparing visibility trees across sublimbs."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd

from .angles import Chord, crosses, in_open_arc, is_behind, separates
from .dynamic import (
    DynamicPair,
    LeafContext,
    PullbackTable,
    context_of,
    gap_boundary_leaf,
    pair_is_behind,
    pairs_behind,
    pullback_word,
    visible_pairs,
)
from .kneading import just_behind, leaf_kneading, KneadingSequence
from .parameter import Leaf, LaminationStore, in_entire_lamination, nesting_parents, periodic_numerators
from .tuning import SublimbDesc, gateway_length, bifurcation_length, sublimb
from .vistree import VisTree, local_leaves, trees_equivalent, visibility_tree, visible_from_root

log = logging.getLogger(__name__)


def sublimb_fractions(q: int) -> list[tuple[int, int]]:
    return [(p, q) for p in range(1, q) if gcd(p, q) == 1]


def _flip(b: str) -> str:
    return "1" if b == "0" else "0"


# -- per-leaf caches -----------------------------------------------------------

@lru_cache(maxsize=256)
def _ctx(S: Leaf) -> LeafContext:
    return context_of(S)


@lru_cache(maxsize=256)
def _table(S: Leaf) -> PullbackTable:
    return PullbackTable(_ctx(S))


@lru_cache(maxsize=1024)
def _desc(S: Leaf, p: int, q: int) -> SublimbDesc:
    return sublimb(S, p, q, _ctx(S))


@lru_cache(maxsize=1024)
def _tree(S: Leaf, p: int, q: int) -> VisTree:
    return visibility_tree(S, p, q, _desc(S, p, q))


def gateway_pairs(desc: SublimbDesc) -> list[DynamicPair]:
    """Every dynamic pair behind ``R_B`` with step below ``qm``."""
    return pairs_behind(desc.ctx, desc.R_B, desc.q * desc.m - 1, _table(desc.S))


# -- Q map ---------------------------------------------------------------------

def between_arcs(c1: Chord, c2: Chord) -> list[tuple[Fraction, Fraction]]:
    """The two open arcs joining an end of ``c1`` to an end of ``c2`` that bound
    the region between them."""
    ends = sorted([(x, 0) for x in c1.ends] + [(x, 1) for x in c2.ends])
    arcs = []
    for i in range(4):
        (x, p), (y, r) = ends[i], ends[(i + 1) % 4]
        if p != r:
            arcs.append((x, y))
    return arcs


def _points_in_arc(lo: Fraction, hi: Fraction, n: int) -> list[Fraction]:
    D = (1 << n) - 1
    if lo < hi:
        return [Fraction(a, D) for a in periodic_numerators(n, lo, hi)]
    return ([Fraction(a, D) for a in periodic_numerators(n, lo, Fraction(1))]
            + [Fraction(a, D) for a in periodic_numerators(n, Fraction(0), hi)])


def q_map(desc: SublimbDesc, p: DynamicPair) -> Leaf:
    """The period-``step`` parameter leaf joining the two arcs between the members of ``p``."""
    n = p.step
    arcs = between_arcs(p.s1, p.s2)
    ends = []
    for lo, hi in arcs:
        span = hi - lo if lo < hi else hi + 1 - lo
        if span >= Fraction(1, 1 << n):
            raise ValueError(f"arc between members of pair {p.word} is not shorter than 1/2^{n}")
        for l in range(1, n):
            if _points_in_arc(lo, hi, l):
                raise ValueError(f"pair {p.word}: a point of period {l} lies between its members")
        pts = _points_in_arc(lo, hi, n)
        if len(pts) != 1:
            raise ValueError(f"pair {p.word}: {len(pts)} period-{n} points in an arc between members")
        ends.append(pts[0])
    Q = Leaf(n, Chord(*ends))
    if not in_entire_lamination(Q.chord):
        raise ValueError(f"{Q} is not a parameter leaf")
    return Q


# -- semi-visibility ---------------------------------------------------------

def chord_kneading(c: Chord) -> KneadingSequence:
    return leaf_kneading(c, check=False)


def pair_semi_visible(desc: SublimbDesc, p: DynamicPair) -> bool:
    """Both members are parameter leaves and the longer one's kneading sequence
    starts like ``(ve)^inf`` for ``step`` symbols."""
    if not pair_is_behind(p, desc.R_B):
        raise ValueError(f"pair {p.word} is not behind {desc.R_B}")
    if not (in_entire_lamination(p.s1) and in_entire_lamination(p.s2)):
        return False
    n = p.step
    ve = just_behind(desc.S.chord, check=False)
    if chord_kneading(p.s1).word(n) != ve.word(n):
        return False
    # consequences: step below qm, and the shorter member differs exactly at symbol n
    if n >= desc.q * desc.m:
        raise AssertionError(f"semi-visible pair {p.word} has step {n} >= {desc.q * desc.m}")
    k2 = chord_kneading(p.s2).word(n)
    expect = ve.word(n)
    if k2[:-1] != expect[:-1] or k2[-1] == expect[-1]:
        raise AssertionError(f"shorter member of semi-visible pair {p.word} has kneading {k2}")
    return True


def enumerate_semi_visible(desc: SublimbDesc) -> list[DynamicPair]:
    return [p for p in gateway_pairs(desc) if pair_semi_visible(desc, p)]


def _at_or_behind(x: Chord | None, R: Chord) -> bool:
    return x is not None and (x == R or is_behind(x, R))


def iterate_condition(desc: SublimbDesc, p: DynamicPair) -> bool:
    """The ``(q-3)m``-th iterate of ``p`` is behind ``R_{1/3}`` or ``R_{2/3}`` and every
    later iterate behind ``S`` is behind ``R_{1/2}``."""
    S = desc.S
    m, q = desc.m, desc.q
    r13, r23 = _desc(S, 1, 3).R_B, _desc(S, 2, 3).R_B
    r12 = _desc(S, 1, 2).R_B
    i0 = (q - 3) * m
    first = [c.iterate(i0) for c in p.members]
    if not any(all(_at_or_behind(x, R) for x in first) for R in (r13, r23)):
        return False
    for i in range(i0 + 1, p.step):
        for c in p.members:
            x = c.iterate(i)
            if x is not None and is_behind(x, S.chord) and not _at_or_behind(x, r12):
                return False
    return True


# -- reports -----------------------------------------------------------------

@dataclass
class Report:
    name: str
    holds: bool = True
    details: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)

    def fail(self, what) -> None:
        self.holds = False
        self.failures.append(what)

    def as_json(self) -> dict:
        return {"schema": "lamina/1", "check": self.name, "holds": self.holds,
                "details": self.details, "failures": self.failures}


def _splits(c: Chord, p: DynamicPair) -> bool:
    # a leaf crossing a member counts as splitting the pair
    if crosses(c, p.s1) or crosses(c, p.s2):
        return True
    return separates(c, p.s1, p.s2)


def _pair_forest(pairs: list[DynamicPair]) -> dict[DynamicPair, DynamicPair | None]:
    parent = {}
    for p in pairs:
        best = None
        for r in pairs:
            if r is p or r == p:
                continue
            if is_behind(p.s1, r.s1) and (best is None or r.s1.length < best.s1.length):
                best = r
        parent[p] = best
    return parent


def check_correspondence(desc: SublimbDesc) -> Report:
    """Visible pairs behind ``R_B`` against the visibility tree of the sublimb.

    (a) injective, step-to-period and embedding-preserving map into the tree;
    (b) surjectivity onto the non-root nodes (may fail);
    (c) for ``q >= 3``, the semi-visible pairs map bijectively onto the non-root nodes.
    """
    S, q, m = desc.S, desc.q, desc.m
    rep = Report(f"correspondence {S} {desc.p}/{q}")
    tree = _tree(S, desc.p, q)
    nodes = set(tree.leaves()) - {desc.B}
    pool = gateway_pairs(desc)
    vis = visible_pairs(desc.R_B, pool)
    images = {}
    for p in vis:
        Q = q_map(desc, p)
        images[p] = Q
        if Q.period != p.step:
            rep.fail({"pair": p.word, "problem": "period differs from step"})
        if Q not in nodes:
            rep.fail({"pair": p.word, "problem": "image not in tree", "leaf": str(Q)})
        seps = [L for L in nodes if _splits(L.chord, p)]
        if seps != [Q]:
            rep.fail({"pair": p.word, "problem": "image is not the only visible separator"})
    injective = len(set(images.values())) == len(images)
    if not injective:
        rep.fail({"problem": "not injective"})
    embedding = _embedding_preserved(desc, vis, images)
    if not embedding:
        rep.fail({"problem": "embedding not preserved"})
    missing = sorted(nodes - set(images.values()))
    rep.details.update({
        "visible_pairs": len(vis),
        "tree_nodes": len(nodes),
        "injective": injective,
        "embedding": embedding,
        "surjective": not missing,
        "uncovered": [f"{L.period} {L.chord}" for L in missing],
    })
    if q >= 3:
        semi = [p for p in pool if pair_semi_visible(desc, p)]
        simg = [q_map(desc, p) for p in semi]
        bij = len(set(simg)) == len(simg) and set(simg) == nodes
        steps = all(Q.period == p.step for p, Q in zip(semi, simg))
        contains = set(vis) <= set(semi)
        iterates = all(iterate_condition(desc, p) for p in semi)
        rep.details.update({"semi_visible_pairs": len(semi), "semi_bijective": bij,
                            "semi_step_period": steps, "visible_within_semi": contains,
                            "iterate_condition": iterates})
        for ok, what in ((bij, "semi-visible map not bijective"), (steps, "semi-visible step/period"),
                         (contains, "visible pair not semi-visible"), (iterates, "iterate condition")):
            if not ok:
                rep.fail({"problem": what})
    return rep


def _embedding_preserved(desc: SublimbDesc, vis: list[DynamicPair], images: dict) -> bool:
    pforest = _pair_forest(vis)
    leaves = list(images.values())
    if len(set(leaves)) != len(leaves):
        return False
    lparent = nesting_parents(leaves) if leaves else {}
    kids_p: dict = {}
    kids_l: dict = {}
    for p in vis:
        par = pforest[p]
        if lparent[images[p]] != (images[par] if par is not None else None):
            return False
        kids_p.setdefault(par, []).append(p)
    for L in leaves:
        kids_l.setdefault(lparent[L], []).append(L)
    for par, kids in kids_p.items():
        order_p = [images[c] for c in sorted(kids, key=lambda c: c.s1.a)]
        key = images[par] if par is not None else None
        if order_p != sorted(kids_l.get(key, []), key=lambda L: L.a):
            return False
    return True


def tree_for(S: Leaf, p: int, q: int) -> VisTree:
    return _tree(S, p, q)


def original_translation_failures(S: Leaf, q_max: int) -> list[tuple[int, int]]:
    """Sublimbs whose tree is not the shifted ``1/2`` tree."""
    m = S.period
    ref = _tree(S, 1, 2)
    bad = []
    for q in range(3, q_max + 1):
        for p, _ in sublimb_fractions(q):
            if not trees_equivalent(ref, _tree(S, p, q), (q - 2) * m):
                bad.append((p, q))
    return bad


def scan_translation(store: LaminationStore, max_period: int, q_max: int) -> list[tuple[Leaf, list]]:
    """Leaves up to ``max_period`` for which some sublimb tree with denominator at most
    ``q_max`` differs from the shifted ``1/2`` tree."""
    out = []
    for S in store.up_to(max_period):
        bad = original_translation_failures(S, q_max)
        if bad:
            out.append((S, bad))
    return out


def check_partial_translation(S: Leaf, q_max: int) -> Report:
    """Every tree with denominator ``3 <= q <= q_max`` matches the ``1/3`` or ``2/3`` tree."""
    m = S.period
    rep = Report(f"partial translation {S} q<={q_max}")
    t13, t23 = _tree(S, 1, 3), _tree(S, 2, 3)
    matches = {}
    for q in range(3, q_max + 1):
        for p, _ in sublimb_fractions(q):
            t = _tree(S, p, q)
            which = [name for name, ref in (("1/3", t13), ("2/3", t23))
                     if trees_equivalent(ref, t, (q - 3) * m)]
            matches[f"{p}/{q}"] = which
            if not which:
                rep.fail(f"{p}/{q}")
    rep.details["matches"] = matches
    rep.details["half_equivalent_to_third"] = trees_equivalent(_tree(S, 1, 2), t13, m)
    return rep


def gateway_image(S: Leaf, p: int, q: int) -> Chord:
    """``h^{(q-3)m}(R_{p/q})``."""
    return _desc(S, p, q).R_B.iterate((q - 3) * S.period)


def check_tree_hypothesis(S: Leaf, q_max: int) -> Report:
    """Equal ``(q-3)m``-th gateway iterates force equivalent trees, over all sublimbs with ``q <= q_max``."""
    fr = [pq for q in range(3, q_max + 1) for pq in sublimb_fractions(q)]
    rep = check_theorem_II(S, [(a, b) for i, a in enumerate(fr) for b in fr[i + 1:]])
    rep.name += f" q<={q_max}"
    return rep


def check_gateway_kneading(S: Leaf, p: int, q: int, sample_period: int | None = None) -> Report:
    """Kneading of ``R_{p/q}``, kneading prefixes behind it, and its iterate into the
    ``e v e`` / ``(1-e) v e`` leaves."""
    ctx = _ctx(S)
    d = _desc(S, p, q)
    R = d.R_B
    v, e = ctx.v, ctx.e
    m = ctx.m
    rep = Report(f"gateway kneading {S} {p}/{q}")
    expect = KneadingSequence.make((v + e) * (q - 1), v + _flip(e))
    got = chord_kneading(R)
    if got != expect:
        rep.fail({"problem": "kneading of gateway", "got": str(got), "expected": str(expect)})
    prefix = (v + e) * (q - 2)
    top = sample_period or min(q * m + 2, 16)
    from .kneading import kneading_of_angle
    sample = []
    for n in range(2, top + 1):
        D = (1 << n) - 1
        sample += [Fraction(a, D) for a in periodic_numerators(n, R.a, R.b)]
    for x in sample:
        if kneading_of_angle(x).word(len(prefix)) != prefix:
            rep.fail({"problem": "angle behind gateway", "angle": str(x)})
    if q >= 3:
        targets = [pullback_word(ctx, S.chord, b + v + e) for b in (e, _flip(e))]
        img = R.iterate((q - 2) * m - 1)
        if img not in targets:
            rep.fail({"problem": "iterate of gateway", "image": str(img)})
        for x in sample:
            y = (x * (1 << ((q - 2) * m - 1))) % 1
            if not any(in_open_arc(y, *T.minor_arc()) for T in targets):
                rep.fail({"problem": "iterate of angle behind gateway", "angle": str(x)})
    rep.details["sampled_angles"] = len(sample)
    return rep


def check_pair_transfer(S: Leaf, pq1: tuple[int, int], pq2: tuple[int, int]) -> Report:
    """Pairs behind two gateways with a common iterate: step difference and semi-visibility agree."""
    m = S.period
    (p1, q1), (p2, q2) = pq1, pq2
    rep = Report(f"pair transfer {S} {p1}/{q1} {p2}/{q2}")
    if gateway_image(S, p1, q1) != gateway_image(S, p2, q2):
        rep.details["applicable"] = False
        return rep
    d1, d2 = _desc(S, p1, q1), _desc(S, p2, q2)
    i1, i2 = (q1 - 3) * m, (q2 - 3) * m

    def keyed(d, i):
        out = {}
        for p in gateway_pairs(d):
            out[frozenset((p.s1.iterate(i), p.s2.iterate(i)))] = p
        return out

    k1, k2 = keyed(d1, i1), keyed(d2, i2)
    matched = 0
    for key, p in k1.items():
        r = k2.get(key)
        if r is None:
            continue
        matched += 1
        if r.step - p.step != (q2 - q1) * m:
            rep.fail({"pairs": [p.word, r.word], "problem": "step difference"})
        if pair_semi_visible(d1, p) != pair_semi_visible(d2, r):
            rep.fail({"pairs": [p.word, r.word], "problem": "semi-visibility differs"})
    rep.details.update({"applicable": True, "matched": matched})
    return rep


def check_lengths(S: Leaf, q: int) -> Report:
    ctx = _ctx(S)
    rep = Report(f"lengths {S} q={q}")
    d = _desc(S, 1, q)
    lb, lr = d.B.length, d.R_B.length
    if lb != bifurcation_length(ctx, q):
        rep.fail("bifurcation leaf length")
    if lr != gateway_length(ctx, q):
        rep.fail("gateway length")
    if not lb - lr < Fraction(1, (1 << (q * ctx.m)) - 1):
        rep.fail("length difference")
    return rep


def visible_semi_visible(desc: SublimbDesc) -> tuple[list[DynamicPair], list[DynamicPair]]:
    pool = gateway_pairs(desc)
    return visible_pairs(desc.R_B, pool), [p for p in pool if pair_semi_visible(desc, p)]


def cached_sublimb(S: Leaf, p: int, q: int) -> SublimbDesc:
    return _desc(S, p, q)


# entry points under the names used by the command line and the contracts
def check_theorem_I(S: Leaf, q_max: int) -> Report:
    return check_partial_translation(S, q_max)


def check_theorem_II(S: Leaf, pairs: list[tuple[tuple[int, int], tuple[int, int]]]) -> Report:
    """Tree equivalence for the given sublimb pairs whose shifted gateway iterates agree."""
    m = S.period
    rep = Report(f"gateway iterate implies equivalence {S}")
    held = 0
    for (p1, q1), (p2, q2) in pairs:
        if gateway_image(S, p1, q1) != gateway_image(S, p2, q2):
            continue
        held += 1
        if not trees_equivalent(_tree(S, p1, q1), _tree(S, p2, q2), (q2 - q1) * m):
            rep.fail(f"{p1}/{q1} vs {p2}/{q2}")
    rep.details["hypothesis_held"] = held
    return rep


def check_lemma_III(S: Leaf, pq1: tuple[int, int], pq2: tuple[int, int]) -> Report:
    return check_pair_transfer(S, pq1, pq2)


__all__ = [
    "Report",
    "between_arcs",
    "cached_sublimb",
    "check_correspondence",
    "check_gateway_kneading",
    "check_lemma_III",
    "check_lengths",
    "check_pair_transfer",
    "check_partial_translation",
    "check_theorem_I",
    "check_theorem_II",
    "check_tree_hypothesis",
    "enumerate_semi_visible",
    "gateway_image",
    "gateway_pairs",
    "iterate_condition",
    "original_translation_failures",
    "pair_semi_visible",
    "q_map",
    "scan_translation",
    "sublimb_fractions",
    "tree_for",
    "visible_semi_visible",
]
