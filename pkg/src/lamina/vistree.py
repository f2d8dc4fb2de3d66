"""Visibility trees of a periodic leaf inside one of its sublimbs."""
from __future__ import annotations

import json
from dataclasses import dataclass, field

from .angles import Chord
from .parameter import Leaf, nesting_parents, pair_region, periodic_points
from .tuning import SublimbDesc, sublimb


def local_leaves(outer: Chord, max_period: int) -> list[Leaf]:
    """Periodic parameter leaves of period at most ``max_period`` lying behind ``outer``.

    Leaves of the parameter lamination never cross, so pairing the periodic
    points of the arc behind ``outer`` as one region reproduces the global
    pairing there as long as ``outer`` itself has larger period.
    """
    pts = periodic_points(outer.a, outer.b, max_period)
    return pair_region(pts)


def visible_from_root(leaves: list[Leaf]) -> tuple[list[Leaf], dict[Leaf, Leaf | None]]:
    """Leaves not separated from the outer boundary by a leaf of smaller period,
    and each one's nearest visible ancestor (``None`` for the root)."""
    parent = nesting_parents(leaves)
    visible: list[Leaf] = []
    vis_parent: dict[Leaf, Leaf | None] = {}
    for L in sorted(leaves, key=lambda x: (x.chord.b - x.chord.a), reverse=True):
        anc = parent[L]
        blocked = False
        nearest = None
        while anc is not None:
            if anc.period < L.period:
                blocked = True
                break
            if nearest is None and anc in vis_parent:
                nearest = anc
            anc = parent[anc]
        if not blocked:
            visible.append(L)
            vis_parent[L] = nearest
    return visible, vis_parent


def visible_leaves_behind(desc: SublimbDesc) -> list[Leaf]:
    """Leaves behind ``B`` visible from ``S``, sorted by period then position."""
    B = desc.B
    leaves = local_leaves(B.chord, B.period - 1)
    visible, _ = visible_from_root(leaves)
    return sorted(visible)


@dataclass
class VisNode:
    leaf: Leaf
    children: list["VisNode"] = field(default_factory=list)

    @property
    def period(self) -> int:
        return self.leaf.period

    def as_json(self) -> dict:
        return {
            "period": self.period,
            "leaf": self.leaf.chord.as_json(),
            "children": [c.as_json() for c in self.children],
        }

    def shape(self, shift: int = 0) -> tuple:
        return (self.period + shift, tuple(c.shape(shift) for c in self.children))

    def walk(self):
        yield self
        for c in self.children:
            yield from c.walk()


@dataclass
class VisTree:
    S: Leaf
    p: int
    q: int
    root: VisNode

    def nodes(self) -> list[VisNode]:
        return list(self.root.walk())

    def periods(self) -> list[int]:
        return sorted(n.period for n in self.walk())

    def walk(self):
        return self.root.walk()

    def leaves(self) -> list[Leaf]:
        return [n.leaf for n in self.walk()]

    def canonical(self, shift: int = 0) -> tuple:
        """Depth-first (period, children) nesting, children in circular order."""
        return self.root.shape(shift)

    def as_json(self) -> dict:
        return {"root": self.root.as_json()}

    def to_json(self) -> str:
        return json.dumps(self.as_json(), sort_keys=True)

    def render_text(self) -> str:
        lines = []

        def rec(node: VisNode, depth: int) -> None:
            lines.append(f"{'  ' * depth}{node.period}  {node.leaf.chord}")
            for c in node.children:
                rec(c, depth + 1)

        rec(self.root, 0)
        return "\n".join(lines)


def build_tree(B: Leaf, visible: list[Leaf], vis_parent: dict[Leaf, Leaf | None]) -> VisNode:
    nodes = {L: VisNode(L) for L in visible}
    root = VisNode(B)
    for L in visible:
        par = vis_parent[L]
        (root if par is None else nodes[par]).children.append(nodes[L])
    for n in [root, *nodes.values()]:
        n.children.sort(key=lambda c: c.leaf.a)
    return root


def visibility_tree(S: Leaf, p: int, q: int, desc: SublimbDesc | None = None) -> VisTree:
    desc = desc or sublimb(S, p, q)
    B = desc.B
    leaves = local_leaves(B.chord, B.period - 1)
    visible, vis_parent = visible_from_root(leaves)
    return VisTree(desc.S, p, q, build_tree(B, visible, vis_parent))


def trees_equivalent(t1: VisTree, t2: VisTree, shift: int) -> bool:
    """Equal planar shapes once ``shift`` is added to every period of ``t1``."""
    return t1.canonical(shift) == t2.canonical(0)


def sublimb_shift(t1: VisTree, t2: VisTree) -> int:
    return (t2.q - t1.q) * t1.S.period
