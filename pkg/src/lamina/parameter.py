"""The periodic parameter lamination: membership, enumeration, visibility."""
from __future__ import annotations

import logging
import os
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd
from pathlib import Path
from typing import Iterable, Iterator

from .angles import (
    Chord,
    common_denominator,
    exact_period,
    format_angle,
    angle,
    separates,
)
from .kneading import just_before, just_behind

log = logging.getLogger(__name__)

CACHE_HEADER = "LAMINA v1 max_period="


@dataclass(frozen=True, order=True)
class Leaf:
    """A leaf of the periodic parameter lamination; both ends have period ``period``."""

    period: int
    chord: Chord

    @classmethod
    def of(cls, x, y) -> "Leaf":
        c = Chord(angle(x), angle(y))
        p = exact_period(c.a)
        if p is None or exact_period(c.b) != p:
            raise ValueError(f"{c} does not have periodic ends of equal period")
        return cls(p, c)

    @property
    def a(self) -> Fraction:
        return self.chord.a

    @property
    def b(self) -> Fraction:
        return self.chord.b

    @property
    def length(self) -> Fraction:
        return self.chord.length

    def __str__(self) -> str:
        return str(self.chord)


def as_chord(x) -> Chord:
    return x.chord if isinstance(x, Leaf) else x


# -- membership in the entire parameter lamination ---------------------------

def _cross(p: tuple[int, int], q: tuple[int, int]) -> bool:
    x1, y1 = p
    x2, y2 = q
    if x1 == x2 or x1 == y2 or y1 == x2 or y1 == y2:
        return False
    return (x1 < x2 < y1) != (x1 < y2 < y1)


def _member(A: int, G: int, M: int) -> bool:
    # angles are A/M, G/M with M even and A, G even
    half = M // 2
    d1 = (A // 2, A // 2 + half)
    d2 = (G // 2, G // 2 + half)
    orbit: list[tuple[int, int]] = []
    seen = set()
    x, y = A, G
    while True:
        c = (x, y) if x < y else (y, x)
        if c in seen:
            break
        seen.add(c)
        if x != y:
            if _cross(c, d1) or _cross(c, d2):
                return False
            orbit.append(c)
        x, y = (2 * x) % M, (2 * y) % M
    for i, p in enumerate(orbit):
        for q in orbit[i + 1:]:
            if _cross(p, q):
                return False
    return True


def in_entire_lamination(c: Chord) -> bool:
    """Whether ``c`` belongs to the entire parameter lamination.

    The forward iterates of ``c`` must be pairwise non-crossing and none of
    them may cross the diameters through the halves of either end.  Rational
    ends make the orbit finite, so the test always terminates.
    """
    c = as_chord(c)
    M = 2 * common_denominator(c.a, c.b)
    return _member(int(c.a * M), int(c.b * M), M)


# -- periodic angles ---------------------------------------------------------

def _prime_factors(n: int) -> list[int]:
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def periodic_numerators(n: int, lo: Fraction = Fraction(0), hi: Fraction = Fraction(1)) -> Iterator[int]:
    """Numerators ``a`` with ``a/(2^n-1)`` of exact period ``n`` strictly inside ``(lo, hi)``."""
    D = (1 << n) - 1
    checks = [(1 << (n // p)) - 1 for p in _prime_factors(n)]
    start = (lo.numerator * D) // lo.denominator + 1
    stop = -((-hi.numerator * D) // hi.denominator)  # ceil(hi * D)
    for a in range(max(start, 1), min(stop, D)):
        if all((a * k) % D for k in checks):
            yield a


def periodic_points(lo: Fraction, hi: Fraction, max_period: int, min_period: int = 2) -> list[tuple[Fraction, int]]:
    """All ``(angle, period)`` with ``min_period <= period <= max_period`` in ``(lo, hi)``, sorted."""
    pts = []
    for n in range(min_period, max_period + 1):
        D = (1 << n) - 1
        pts.extend((Fraction(a, D), n) for a in periodic_numerators(n, lo, hi))
    pts.sort()
    return pts


def pair_region(points: list[tuple[Fraction, int]]) -> list[Leaf]:
    """Lavaurs pairing of the sorted periodic ``points`` of one complementary region.

    Periods are handled in increasing order; inside a region (the part of
    the disk cut out by already placed leaves) the points of the current
    period are joined consecutively, which is exactly where Lavaurs'
    greedy rule puts them.
    """
    leaves: list[Leaf] = []
    stack = [points]
    while stack:
        region = stack.pop()
        while region:
            r = min(n for _, n in region)
            idx = [i for i, (_, n) in enumerate(region) if n == r]
            if len(idx) % 2:
                raise AssertionError(f"odd number of period-{r} points in a region")
            keep = []
            prev = 0
            for j in range(0, len(idx), 2):
                i1, i2 = idx[j], idx[j + 1]
                keep.extend(region[prev:i1])
                leaves.append(Leaf(r, Chord(region[i1][0], region[i2][0])))
                if i2 > i1 + 1:
                    stack.append(region[i1 + 1:i2])
                prev = i2 + 1
            keep.extend(region[prev:])
            region = keep
    leaves.sort()
    return leaves


def nesting_parents(leaves: Iterable[Leaf]) -> dict[Leaf, Leaf | None]:
    """Innermost enclosing leaf of each leaf (``None`` at top level).

    Assumes 0 is on the larger side of every leaf and no two leaves share an end.
    """
    events = []
    for L in leaves:
        events.append((L.a, 0, L))
        events.append((L.b, 1, L))
    events.sort(key=lambda t: (t[0], t[1]))
    parent: dict[Leaf, Leaf | None] = {}
    stack: list[Leaf] = []
    for _, kind, L in events:
        if kind == 0:
            parent[L] = stack[-1] if stack else None
            stack.append(L)
        else:
            if stack.pop() != L:
                raise AssertionError("crossing leaves in nesting sweep")
    return parent


# -- the store ---------------------------------------------------------------

@dataclass
class LaminationStore:
    """All periodic parameter leaves of period ``2..max_period``."""

    max_period: int
    leaves: tuple[Leaf, ...]
    _by_end: dict[Fraction, Leaf] = field(default_factory=dict, repr=False)
    _parent: dict[Leaf, Leaf | None] = field(default_factory=dict, repr=False)
    _ancestors: dict[Leaf, tuple[Leaf, ...]] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self.leaves = tuple(sorted(self.leaves))
        self._by_end = {}
        for L in self.leaves:
            for x in L.chord.ends:
                if x in self._by_end:
                    raise ValueError(f"angle {format_angle(x)} ends two leaves")
                self._by_end[x] = L
        self._parent = nesting_parents(self.leaves)

    def __len__(self) -> int:
        return len(self.leaves)

    def __iter__(self):
        return iter(self.leaves)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LaminationStore):
            return NotImplemented
        return self.max_period == other.max_period and self.leaves == other.leaves

    def by_period(self, n: int) -> list[Leaf]:
        return [L for L in self.leaves if L.period == n]

    def up_to(self, n: int) -> list[Leaf]:
        return [L for L in self.leaves if L.period <= n]

    def leaf_of(self, x: Fraction) -> Leaf:
        x = angle(x)
        p = exact_period(x)
        if p is None or p < 2:
            raise ValueError(f"{format_angle(x)} is not periodic of period >= 2")
        if p > self.max_period:
            raise ValueError(f"period {p} exceeds store depth {self.max_period}")
        return self._by_end[x]

    def find(self, c) -> Leaf | None:
        c = as_chord(c)
        L = self._by_end.get(c.a)
        return L if L is not None and L.chord == c else None

    def partner(self, x: Fraction) -> Fraction:
        L = self.leaf_of(x)
        return L.b if L.a == angle(x) else L.a

    def parent(self, L: Leaf) -> Leaf | None:
        return self._parent[L]

    def ancestors(self, L: Leaf) -> tuple[Leaf, ...]:
        """Leaves having ``L`` behind them, outermost first."""
        if L not in self._ancestors:
            p = self._parent[L]
            self._ancestors[L] = () if p is None else self.ancestors(p) + (p,)
        return self._ancestors[L]

    def behind(self, S: Leaf) -> list[Leaf]:
        return [L for L in self.leaves if S.a < L.a and L.b < S.b]

    def tree_separators(self, Q1: Leaf, Q2: Leaf) -> list[Leaf]:
        """Stored leaves separating two stored leaves, via the nesting tree."""
        a1, a2 = self.ancestors(Q1), self.ancestors(Q2)
        k = 0
        while k < min(len(a1), len(a2)) and a1[k] == a2[k]:
            k += 1
        seps = set(a1[k:]) | set(a2[k:])
        seps.discard(Q1)
        seps.discard(Q2)
        return sorted(seps)

    def scan_separators(self, c1, c2, max_period: int | None = None) -> list[Leaf]:
        """Stored leaves separating ``c1`` and ``c2``, by direct geometric test."""
        c1, c2 = as_chord(c1), as_chord(c2)
        bound = self.max_period if max_period is None else max_period
        return [L for L in self.leaves if L.period <= bound and separates(L.chord, c1, c2)]

    # -- cache file ----------------------------------------------------------

    def dumps(self) -> str:
        lines = [f"{CACHE_HEADER}{self.max_period}"]
        for L in self.leaves:
            lines.append(f"{L.period} {format_angle(L.a)} {format_angle(L.b)}")
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text: str) -> "LaminationStore":
        lines = text.splitlines()
        if not lines or not lines[0].startswith(CACHE_HEADER):
            raise ValueError("not a lamina cache file")
        n = int(lines[0][len(CACHE_HEADER):])
        leaves = []
        for line in lines[1:]:
            if not line.strip():
                continue
            p, x, y = line.split()
            L = Leaf(int(p), Chord(angle(x), angle(y)))
            if exact_period(L.a) != L.period or exact_period(L.b) != L.period:
                raise ValueError(f"bad cache line {line!r}")
            leaves.append(L)
        return cls(n, tuple(leaves))

    def save(self, path) -> None:
        Path(path).write_text(self.dumps(), encoding="ascii")

    @classmethod
    def load(cls, path) -> "LaminationStore":
        return cls.loads(Path(path).read_text(encoding="ascii"))


def enumerate_leaves(max_period: int) -> LaminationStore:
    """Every periodic parameter leaf of period at most ``max_period``."""
    if max_period < 2:
        raise ValueError("max_period must be at least 2")
    pts = periodic_points(Fraction(0), Fraction(1), max_period)
    store = LaminationStore(max_period, tuple(pair_region(pts)))
    if len(store._by_end) != len(pts):
        raise AssertionError("imperfect matching")
    return store


@lru_cache(maxsize=8)
def _memory_store(max_period: int) -> LaminationStore:
    return enumerate_leaves(max_period)


def cache_dir() -> Path:
    return Path(os.environ.get("LAMINA_CACHE_DIR", Path.home() / ".cache" / "lamina"))


def get_store(max_period: int, cache: str | os.PathLike | None = None) -> LaminationStore:
    """Store of depth ``max_period``, reusing a cache file when one is given.

    A cached store of larger depth is truncated rather than recomputed.
    """
    if cache is None:
        return _memory_store(max_period)
    path = Path(cache)
    if path.is_dir():
        path = path / f"bstar-{max_period}.txt"
    if path.exists():
        store = LaminationStore.load(path)
        if store.max_period >= max_period:
            if store.max_period == max_period:
                return store
            return LaminationStore(max_period, tuple(store.up_to(max_period)))
        log.info("cache %s too shallow (%d), recomputing", path, store.max_period)
    store = enumerate_leaves(max_period)
    path.parent.mkdir(parents=True, exist_ok=True)
    store.save(path)
    return store


def store_for(period: int, store: LaminationStore | None) -> LaminationStore:
    if store is not None and store.max_period >= period:
        return store
    if store is not None:
        raise ValueError(f"store depth {store.max_period} below required {period}")
    return get_store(max(period, 2))


# -- brute-force oracle --------------------------------------------------------

def brute_force_leaves(n: int) -> list[Leaf]:
    """Period-``n`` leaves found by testing every pair of period-``n`` angles for
    membership, then checking the survivors form a perfect non-crossing matching."""
    D = (1 << n) - 1
    M = 2 * D
    nums = list(periodic_numerators(n))
    found = []
    for i, a in enumerate(nums):
        A = 2 * a
        for b in nums[i + 1:]:
            if _member(A, 2 * b, M):
                found.append(Leaf(n, Chord(Fraction(a, D), Fraction(b, D))))
    used = [x for L in found for x in L.chord.ends]
    if len(used) != len(set(used)) or len(used) != len(nums):
        raise AssertionError(f"period {n}: membership test does not give a perfect matching")
    return found


# -- partner, visibility, separators -----------------------------------------

def partner(x, store: LaminationStore | None = None) -> Fraction:
    x = angle(x)
    p = exact_period(x)
    if p is None or p < 2:
        raise ValueError(f"{format_angle(x)} has no partner (period-1 or preperiodic)")
    return store_for(p, store).partner(x)


def _require_behind(S: Leaf, Q: Leaf) -> None:
    if not (S.a <= Q.a and Q.b <= S.b and S != Q):
        raise ValueError(f"{Q} is not behind {S}")


def visible_symbolic(S: Leaf, Q: Leaf, strict: bool = True) -> bool:
    n = Q.period - 1 if strict else Q.period
    return just_behind(S.chord, check=False).word(n) == just_before(Q.chord, check=False).word(n)


def visible_geometric(S: Leaf, Q: Leaf, store: LaminationStore | None = None, strict: bool = True) -> bool:
    bound = Q.period - 1 if strict else Q.period
    st = store_for(Q.period, store)
    if st.find(S) and st.find(Q):
        seps = st.tree_separators(S, Q)
    else:
        seps = st.scan_separators(S, Q, bound)
    return not any(L.period <= bound for L in seps)


def is_visible(S: Leaf, Q: Leaf, store: LaminationStore | None = None, method: str = "both") -> bool:
    """No leaf of lower period separates ``S`` and ``Q`` (``Q`` behind ``S``)."""
    _require_behind(S, Q)
    if method == "symbolic":
        return visible_symbolic(S, Q)
    if method == "geometric":
        return visible_geometric(S, Q, store)
    sym, geo = visible_symbolic(S, Q), visible_geometric(S, Q, store)
    if sym != geo:
        raise AssertionError(f"visibility of {Q} from {S}: symbolic {sym}, geometric {geo}")
    return sym


def immediate_separator_bound(S: Leaf, Q: Leaf) -> int:
    """Past this period no new separator of ``S`` and ``Q`` can appear: the two
    periodic comparison words agree forever once they agree this far."""
    return S.period + Q.period - gcd(S.period, Q.period)


def is_immediately_visible(S: Leaf, B: Leaf, store: LaminationStore | None = None,
                           method: str = "symbolic") -> bool:
    """No leaf of any period separates ``S`` and ``B``."""
    _require_behind(S, B)
    sym = just_behind(S.chord, check=False) == just_before(B.chord, check=False)
    if method == "symbolic":
        return sym
    st = store_for(immediate_separator_bound(S, B), store)
    if st.find(S) and st.find(B):
        geo = not st.tree_separators(S, B)
    else:
        geo = not st.scan_separators(S, B)
    if method == "geometric":
        return geo
    if sym != geo:
        raise AssertionError(f"immediate visibility of {B} from {S}: symbolic {sym}, geometric {geo}")
    return sym


def separating_components(Q1: Leaf, Q2: Leaf, store: LaminationStore | None = None) -> list[Leaf | None]:
    """Components separating two stored leaves: every leaf strictly between them,
    plus the leaf whose gap they hang off in different directions when neither
    lies behind the other (``None`` stands for the period-1 main component)."""
    st = store_for(max(Q1.period, Q2.period), store)
    c1 = (None, *st.ancestors(Q1), Q1)
    c2 = (None, *st.ancestors(Q2), Q2)
    k = 0
    while k < min(len(c1), len(c2)) and c1[k] == c2[k]:
        k += 1
    out: list[Leaf | None] = list(c1[k:-1]) + list(c2[k:-1])
    if k < len(c1) and k < len(c2):
        out.append(c1[k - 1])
    return out


def component_period(L: Leaf | None) -> int:
    return 1 if L is None else L.period


def lavaurs_separator(Q1: Leaf, Q2: Leaf, store: LaminationStore | None = None) -> Leaf | None:
    """The unique lowest-period component separating two equal-period leaves
    (``None`` for the main component)."""
    if Q1 == Q2:
        raise ValueError("identical leaves are not separated")
    if Q1.period != Q2.period:
        raise ValueError("leaves of different periods")
    seps = separating_components(Q1, Q2, store)
    lower = [L for L in seps if component_period(L) < Q1.period]
    if not lower:
        raise AssertionError(f"no lower-period separator for {Q1} and {Q2}")
    low = min(component_period(L) for L in lower)
    best = [L for L in lower if component_period(L) == low]
    if len(best) != 1:
        raise AssertionError(f"{len(best)} separators of minimal period {low}")
    return best[0]
