"""The dynamic lamination generated by a periodic parameter leaf.

For a leaf ``S`` of period ``m`` the two preimages of ``S`` (one with
periodic, one with preperiodic ends) cut out the critical strip; every
other leaf is reached from ``S`` by the pullbacks ``L_0`` and ``L_1``.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from .angles import (
    HALF,
    Chord,
    between_chords,
    crosses,
    in_open_arc,
    is_behind,
    separates,
)
from .kneading import v_e_of
from .parameter import Leaf, as_chord

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class LeafContext:
    S: Leaf
    dotS: Chord
    ddotS: Chord
    v: str
    e: str
    d: Fraction
    alpha: Fraction

    @property
    def m(self) -> int:
        return self.S.period

    @property
    def chord(self) -> Chord:
        return self.S.chord


def _critical_pairings(S: Chord) -> tuple[Chord, Chord]:
    # (L_0 candidate, L_1 candidate) of S itself
    alpha, gamma = S.a, S.b
    return Chord((alpha + 1) / 2, gamma / 2), Chord(alpha / 2, (gamma + 1) / 2)


def context_of(S: Leaf, check: bool = True) -> LeafContext:
    """Critical-strip data for ``S``; raises if ``S`` is not a periodic parameter leaf."""
    if not isinstance(S, Leaf):
        S = Leaf.of(S.a, S.b)
    if S.b - S.a >= HALF:
        raise ValueError(f"{S} has 0 on its smaller side")
    v, e = v_e_of(S.chord, check=check)
    p0, p1 = _critical_pairings(S.chord)
    dot = S.chord.iterate(S.period - 1)
    if dot == p0:
        ddot, e_geo = p1, "1"
    elif dot == p1:
        ddot, e_geo = p0, "0"
    else:
        raise AssertionError(f"h^(m-1)(S) for {S} is neither critical preimage")
    if e_geo != e:
        raise AssertionError(f"symbol e for {S}: pairing gives {e_geo}, orbit gives {e}")
    return LeafContext(S, dot, ddot, v, e, S.length, S.a)


# -- pullbacks -----------------------------------------------------------------
#
# Leaves of the dynamic lamination have denominators dividing 2^k (2^m - 1),
# so pullbacks run on integer numerators over that scale.

def _scale_of(ctx: LeafContext, x: Fraction) -> int:
    den = x.denominator
    k = 0
    while den % 2 == 0:
        den //= 2
        k += 1
    if ((1 << ctx.m) - 1) % den:
        raise ValueError(f"{x} cannot be an end of a leaf of the dynamic lamination of {ctx.S}")
    return k


def _arc_closed(x: int, lo: int, hi: int) -> bool:
    return lo <= x <= hi if lo <= hi else x >= lo or x <= hi


def _cross_int(x1: int, y1: int, x2: int, y2: int) -> bool:
    if x1 == x2 or x1 == y2 or y1 == x2 or y1 == y2:
        return False
    return (x1 < x2 < y1) != (x1 < y2 < y1)


@dataclass(frozen=True)
class _Kernel:
    N: int
    alpha: int      # alpha = alpha / N
    dot: tuple[int, int]   # over 2N
    ddot: tuple[int, int]
    strip: tuple[tuple[int, int], tuple[int, int]]  # closed arcs over 2N

    @classmethod
    def of(cls, ctx: LeafContext) -> "_Kernel":
        N = (1 << ctx.m) - 1
        two = 2 * N
        dot = (int(ctx.dotS.a * two), int(ctx.dotS.b * two))
        ddot = (int(ctx.ddotS.a * two), int(ctx.ddotS.b * two))
        ends = sorted([(x, 0) for x in dot] + [(x, 1) for x in ddot])
        arcs = []
        for i in range(4):
            (x, p), (y, q) = ends[i], ends[(i + 1) % 4]
            if p != q:
                arcs.append((x, y))
        if len(arcs) != 2:
            raise AssertionError("critical leaves are not parallel")
        return cls(N, int(ctx.alpha * N), dot, ddot, (arcs[0], arcs[1]))

    def pullback(self, x: int, y: int, k: int, bit: str) -> tuple[int, int]:
        """Preimage ``L_bit`` of the chord ``x/(2^k N), y/(2^k N)``; result over ``2^(k+1) N``."""
        half = self.N << k
        M = 2 * half
        f = 1 << k
        lo = self.alpha * f
        hi = lo + half
        dx, dy = self.dot[0] * f, self.dot[1] * f
        ex, ey = self.ddot[0] * f, self.ddot[1] * f
        crit = (dx, dy, ex, ey)
        max_span = min(dy - dx, M - (dy - dx))
        arcs = [(a * f, b * f) for a, b in self.strip]

        def in_bit(z: int) -> bool:
            inside = lo < z < hi
            return inside if bit == "0" else (z != lo and z != hi and not inside)

        found = []
        for u in (x, x + half):
            for w in (y, y + half):
                if u == w:
                    continue
                a, b = (u, w) if u < w else (w, u)
                if not (in_bit(a) or in_bit(b)):
                    continue
                if _cross_int(a, b, dx, dy) or _cross_int(a, b, ex, ey):
                    continue
                if min(b - a, M - (b - a)) > max_span:
                    continue
                if (a in crit or b in crit) and (a, b) not in ((dx, dy), (ex, ey)):
                    in_strip = all(any(_arc_closed(z, *arc) for arc in arcs) for z in (a, b))
                    if in_strip:
                        continue
                found.append((a, b))
        if len(found) != 1:
            raise ValueError(f"pullback L_{bit} not unique: {len(found)} candidates")
        return found[0]


_KERNELS: dict[LeafContext, _Kernel] = {}


def _kernel(ctx: LeafContext) -> _Kernel:
    k = _KERNELS.get(ctx)
    if k is None:
        k = _KERNELS[ctx] = _Kernel.of(ctx)
    return k


def _to_int(ctx: LeafContext, R: Chord) -> tuple[int, int, int]:
    k = max(_scale_of(ctx, R.a), _scale_of(ctx, R.b))
    scale = ((1 << ctx.m) - 1) << k
    return int(R.a * scale), int(R.b * scale), k


def _to_chord(ctx: LeafContext, x: int, y: int, k: int) -> Chord:
    scale = ((1 << ctx.m) - 1) << k
    return Chord(Fraction(x, scale), Fraction(y, scale))


def pullback(ctx: LeafContext, R: Chord, bit: str) -> Chord:
    """The preimage ``L_bit(R)`` of ``R`` inside the dynamic lamination.

    Of the four chords joining preimages of the ends, exactly one has an end
    on the ``bit`` side of the critical diameter, crosses neither critical
    leaf, is no longer than them and does not touch them from inside the
    critical strip.
    """
    R = as_chord(R)
    x, y, k = _to_int(ctx, R)
    try:
        a, b = _kernel(ctx).pullback(x, y, k, bit)
    except ValueError as exc:
        raise ValueError(f"L_{bit}({R}) for S={ctx.S}: {exc}") from None
    return _to_chord(ctx, a, b, k + 1)


def _pullback_oracle(ctx: LeafContext, R: Chord, bit: str) -> Chord:
    # literal Fraction version of the same rule, for tests
    found = []
    for x in (R.a / 2, (R.a + 1) / 2):
        for y in (R.b / 2, (R.b + 1) / 2):
            if x == y:
                continue
            c = Chord(x, y)
            lo, hi = ctx.alpha / 2, (ctx.alpha + 1) / 2
            side = (lambda z: in_open_arc(z, lo, hi)) if bit == "0" else (lambda z: in_open_arc(z, hi, lo))
            if not (side(x) or side(y)):
                continue
            dot, ddot = ctx.dotS, ctx.ddotS
            if crosses(c, dot) or crosses(c, ddot) or c.length > dot.length:
                continue
            if between_chords(c, dot, ddot) and set(c.ends) & set(dot.ends + ddot.ends):
                continue
            found.append(c)
    if len(found) != 1:
        raise ValueError(f"L_{bit}({R}) is not unique: {len(found)} candidates")
    return found[0]


def pullback_word(ctx: LeafContext, R: Chord, w: str) -> Chord:
    """``L_w(R)``: the rightmost symbol of ``w`` is applied first."""
    c = as_chord(R)
    for bit in reversed(w):
        c = pullback(ctx, c, bit)
    return c


def word_of(ctx: LeafContext, R: Chord, max_len: int = 64) -> str:
    """The shortest ``w`` with ``L_w(S) = R``; raises when ``R`` is not reached."""
    R = as_chord(R)
    chain = [R]
    while chain[-1] != ctx.chord:
        if len(chain) > max_len:
            raise ValueError(f"{R} does not reach S within {max_len} iterates")
        nxt = chain[-1].image()
        if nxt is None:
            raise ValueError(f"{R} collapses before reaching S")
        chain.append(nxt)
    bits = []
    for i in range(len(chain) - 1):
        for bit in "01":
            try:
                if pullback(ctx, chain[i + 1], bit) == chain[i]:
                    bits.append(bit)
                    break
            except ValueError:
                pass
        else:
            raise ValueError(f"{R} is not in the dynamic lamination of {ctx.S}")
    return "".join(bits)


def gap_word(ctx: LeafContext, s: str) -> str:
    return "".join(ctx.v + c for c in s) + ctx.v + ctx.e


def gap_boundary_leaf(ctx: LeafContext, s: str = "") -> Chord:
    """Boundary leaf ``L_{v s1 v s2 ... v sl v e}(S)`` of the critical value gap."""
    return pullback_word(ctx, ctx.chord, gap_word(ctx, s))


def gap_leaf_length(ctx: LeafContext, l: int) -> Fraction:
    """Length of every gap boundary leaf with ``l`` inserted symbols."""
    m = ctx.m
    return Fraction((1 << m) - 2, 1 << ((l + 1) * m)) * ctx.d


def gap_symbols(ctx: LeafContext, word: str) -> str | None:
    """``s`` if ``word`` is ``v s1 ... v sl v e``, else ``None``."""
    m = ctx.m
    if len(word) % m or not word.endswith(ctx.v + ctx.e):
        return None
    s = []
    for i in range(0, len(word) - m, m):
        block = word[i:i + m]
        if block[:-1] != ctx.v:
            return None
        s.append(block[-1])
    return "".join(s)


# -- dynamic pairs -----------------------------------------------------------

@dataclass(frozen=True, eq=False)
class DynamicPair:
    """``s1`` is the longer member; ``tied`` records an equal-length tie-break."""

    s1: Chord
    s2: Chord
    step: int
    word: str
    tied: bool = field(default=False)

    def __eq__(self, other) -> bool:
        if not isinstance(other, DynamicPair):
            return NotImplemented
        return self.word == other.word

    def __hash__(self) -> int:
        return hash(self.word)

    @property
    def members(self) -> tuple[Chord, Chord]:
        return self.s1, self.s2


def _ends_with_v(ctx: LeafContext, w: str) -> bool:
    return len(w) >= len(ctx.v) and w.endswith(ctx.v)


def _make_pair(w: str, c0: Chord, c1: Chord) -> DynamicPair:
    l0, l1 = c0.length, c1.length
    tied = l0 == l1
    if l0 > l1 or (tied and c0.a < c1.a):
        s1, s2 = c0, c1
    else:
        s1, s2 = c1, c0
    return DynamicPair(s1, s2, len(w) + 1, w, tied)


def dynamic_pair(ctx: LeafContext, w: str) -> DynamicPair:
    if set(w) - {"0", "1"}:
        raise ValueError(f"not a 0-1 word: {w!r}")
    if _ends_with_v(ctx, w):
        raise ValueError(f"word {w} ends with v={ctx.v}")
    S = ctx.chord
    return _make_pair(w, pullback_word(ctx, S, w + "0"), pullback_word(ctx, S, w + "1"))


class PullbackTable:
    """All ``L_u(S)`` for words ``u`` up to a length, built by prepending symbols."""

    def __init__(self, ctx: LeafContext):
        self.ctx = ctx
        x, y, k = _to_int(ctx, ctx.chord)
        assert k == 0
        self.levels: list[dict[str, tuple[int, int]]] = [{"": (x, y)}]
        self._chords: dict[str, Chord] = {}
        self.scans: dict[tuple[Chord, int], list[DynamicPair]] = {}

    def extend_to(self, n: int) -> None:
        if len(self.levels) > n:
            return
        kernel = _kernel(self.ctx)
        while len(self.levels) <= n:
            k = len(self.levels) - 1
            nxt = {}
            for u, (x, y) in self.levels[-1].items():
                for bit in "01":
                    nxt[bit + u] = kernel.pullback(x, y, k, bit)
            self.levels.append(nxt)

    def __getitem__(self, u: str) -> Chord:
        c = self._chords.get(u)
        if c is None:
            self.extend_to(len(u))
            x, y = self.levels[len(u)][u]
            c = self._chords[u] = _to_chord(self.ctx, x, y, len(u))
        return c


    def behind_test(self, R: Chord):
        """Predicate ``(u, mode)`` on table words: ``mode="at"`` also accepts ``L_u(S) == R``."""
        R = as_chord(R)
        start, end = R.minor_arc()
        N = (1 << self.ctx.m) - 1
        s0, e0 = Fraction(start) * N, Fraction(end) * N
        ra, rb = R.a * N, R.b * N

        def test(u: str, mode: str = "behind") -> bool:
            n = len(u)
            x, y = self.levels[n][u]
            sc = 1 << n
            lo, hi = s0 * sc, e0 * sc
            if x == ra * sc and y == rb * sc:
                return mode == "at"
            if lo <= hi:
                return lo <= x <= hi and lo <= y <= hi
            return (x >= lo or x <= hi) and (y >= lo or y <= hi)

        return test


def enumerate_pairs(ctx: LeafContext, max_step: int, table: PullbackTable | None = None) -> list[DynamicPair]:
    """Every dynamic pair of step at most ``max_step``, ordered by step then word."""
    table = table or PullbackTable(ctx)
    table.extend_to(max_step)
    out = []
    for n in range(1, max_step + 1):
        for bits in product("01", repeat=n - 1):
            w = "".join(bits)
            if _ends_with_v(ctx, w):
                continue
            out.append(_make_pair(w, table[w + "0"], table[w + "1"]))
    return out


def pair_is_behind(p: DynamicPair, R: Chord) -> bool:
    # the longer member may coincide with R itself
    return is_behind(p.s2, R) and (p.s1 == R or is_behind(p.s1, R))


def pairs_behind(ctx: LeafContext, R: Chord, max_step: int, table: PullbackTable | None = None,
                 method: str = "translate") -> list[DynamicPair]:
    """Dynamic pairs with both members behind the gap boundary leaf ``R``.

    ``method="scan"`` filters the full enumeration; ``"translate"`` pulls back
    the pairs behind ``L_{ve}(S)`` along the gap word of ``R``.
    """
    R = as_chord(R)
    if method == "scan":
        table = table or PullbackTable(ctx)
        if (R, max_step) in table.scans:
            return list(table.scans[(R, max_step)])
        table.extend_to(max_step)
        test = table.behind_test(R)
        out = []
        for n in range(1, max_step + 1):
            for bits in product("01", repeat=n - 1):
                w = "".join(bits)
                if _ends_with_v(ctx, w):
                    continue
                u0, u1 = w + "0", w + "1"
                if (test(u0) and (test(u1) or test(u1, "at"))) or (test(u1) and test(u0, "at")):
                    p = _make_pair(w, table[u0], table[u1])
                    if pair_is_behind(p, R):
                        out.append(p)
        table.scans[(R, max_step)] = out
        return list(out)
    word = word_of(ctx, R)
    s = gap_symbols(ctx, word)
    if s is None:
        raise ValueError(f"{R} is not a boundary leaf of the critical value gap")
    shift = len(s) * ctx.m
    table = table or PullbackTable(ctx)
    base = pairs_behind(ctx, gap_boundary_leaf(ctx), max_step - shift, table, method="scan")
    if not s:
        return base
    prefix = word[:shift]
    out = []
    for p in base:
        w = prefix + p.word
        if _ends_with_v(ctx, w):
            raise AssertionError(f"pulled back word {w} ends with v")
        c0 = pullback_word(ctx, table[p.word + "0"], prefix)
        c1 = pullback_word(ctx, table[p.word + "1"], prefix)
        out.append(_make_pair(w, c0, c1))
    return out


def visible_pairs(R: Chord, pairs: list[DynamicPair]) -> list[DynamicPair]:
    """Pairs from ``pairs`` visible from ``R``; ``pairs`` must contain every pair
    behind ``R`` of step below the largest step considered."""
    R = as_chord(R)
    ordered = sorted(pairs, key=lambda p: (p.step, p.word))
    out = []
    for p in ordered:
        if not is_behind(p.s2, R):
            continue
        if not any(q.step < p.step and _blocks(q, R, p) for q in ordered):
            out.append(p)
    return out


def _blocks(q: DynamicPair, R: Chord, p: DynamicPair) -> bool:
    if q.s1 == R:
        return True
    if crosses(q.s1, R) or crosses(q.s1, p.s1):
        return False
    return separates(q.s1, R, p.s1)


def pair_visible(ctx: LeafContext, R: Chord, p: DynamicPair, pool: list[DynamicPair] | None = None) -> bool:
    """No pair of smaller step has its longer member equal to ``R`` or
    separating ``R`` from ``p.s1``.  ``R`` must be a preperiodic gap boundary leaf."""
    R = as_chord(R)
    if R == ctx.chord or gap_symbols(ctx, word_of(ctx, R)) is None:
        raise ValueError(f"{R} is not a preperiodic boundary leaf of the critical value gap")
    if not is_behind(p.s2, R):
        return False
    if pool is None:
        pool = pairs_behind(ctx, R, p.step - 1)
    return not any(q.step < p.step and _blocks(q, R, p) for q in pool)


def translate_pair(ctx: LeafContext, l: int, p: DynamicPair) -> DynamicPair:
    """Image of ``p`` under ``h^{lm}``, for ``p`` behind a gap boundary leaf with ``l`` blocks."""
    if l == 0:
        return p
    shift = l * ctx.m
    head = p.word[:shift]
    s = gap_symbols(ctx, head + ctx.v + ctx.e)
    if s is None or len(s) != l:
        raise ValueError(f"pair {p.word} does not start with a gap word of {l} blocks")
    R = gap_boundary_leaf(ctx, s)
    if not pair_is_behind(p, R):
        raise ValueError(f"pair {p.word} is not behind {R}")
    a, b = p.s1.iterate(shift), p.s2.iterate(shift)
    q = dynamic_pair(ctx, p.word[shift:])
    if {a, b} != {q.s1, q.s2}:
        raise AssertionError(f"h^{shift} of pair {p.word} is not pair {q.word}")
    return q
