"""Kneading sequences over {0, 1, *} and internal addresses."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .angles import Chord, exact_period, iterate, orbit_type

STAR = "*"


def _flip(bit: str) -> str:
    return "1" if bit == "0" else "0"


@dataclass(frozen=True)
class KneadingSequence:
    """Eventually periodic word ``prefix (block)^inf`` in canonical form.

    Build instances through :meth:`make`; the block is reduced to a primitive
    word and the prefix is shortened as far as rotation allows, so equality
    of instances is equality of the infinite sequences.
    """

    prefix: str
    block: str

    @classmethod
    def make(cls, prefix: str, block: str) -> "KneadingSequence":
        if not block:
            raise ValueError("empty periodic block")
        if set(prefix + block) - {"0", "1", STAR}:
            raise ValueError(f"bad symbols in {prefix!r}/{block!r}")
        n = len(block)
        for p in range(1, n + 1):
            if n % p == 0 and block[:p] * (n // p) == block:
                block = block[:p]
                break
        while prefix and prefix[-1] == block[-1]:
            prefix = prefix[:-1]
            block = block[-1] + block[:-1]
        return cls(prefix, block)

    @classmethod
    def periodic(cls, block: str) -> "KneadingSequence":
        return cls.make("", block)

    @classmethod
    def parse(cls, text: str) -> "KneadingSequence":
        """Accepts ``"0100*"`` (purely periodic), ``"(0100*)^inf"`` or ``"01(10)^inf"``."""
        text = text.strip().replace("∗", STAR)
        if "(" in text:
            prefix, rest = text.split("(", 1)
            block = rest.split(")", 1)[0]
            return cls.make(prefix, block)
        return cls.periodic(text)

    def symbol(self, i: int) -> str:
        """The ``i``-th symbol, counting from 1."""
        if i < 1:
            raise IndexError(i)
        p = len(self.prefix)
        if i <= p:
            return self.prefix[i - 1]
        return self.block[(i - p - 1) % len(self.block)]

    def word(self, n: int) -> str:
        p = len(self.prefix)
        if n <= p:
            return self.prefix[:n]
        reps = (n - p) // len(self.block) + 1
        return (self.prefix + self.block * reps)[:n]

    @property
    def has_star(self) -> bool:
        return STAR in self.block

    def __str__(self) -> str:
        return f"{self.prefix}({self.block})^inf"


@dataclass(frozen=True)
class InternalAddress:
    entries: tuple[int, ...]

    def __post_init__(self):
        e = tuple(int(x) for x in self.entries)
        if not e or e[0] != 1:
            raise ValueError(f"internal address must start with 1: {e}")
        if any(x >= y for x, y in zip(e, e[1:])):
            raise ValueError(f"internal address must increase strictly: {e}")
        object.__setattr__(self, "entries", e)

    @classmethod
    def parse(cls, text: str) -> "InternalAddress":
        parts = text.replace("→", "-").replace("->", "-").replace(",", "-").split("-")
        return cls(tuple(int(p) for p in parts if p.strip()))

    @property
    def period(self) -> int:
        return self.entries[-1]

    def extend(self, n: int) -> "InternalAddress":
        return InternalAddress(self.entries + (n,))

    def __str__(self) -> str:
        return "-".join(map(str, self.entries))

    def __len__(self) -> int:
        return len(self.entries)


def kneading_of_angle(x: Fraction) -> KneadingSequence:
    """Itinerary of the orbit of ``x`` relative to the diameter through ``x/2``.

    Symbol ``i`` is ``0`` on the open arc from ``x/2`` to ``(x+1)/2``, ``1`` on
    the complementary open arc and ``*`` on the two boundary points.  The
    angle 0 degenerates to ``(*)^inf``, which stands for the main component.
    """
    pre, per = orbit_type(x)
    den = x.denominator
    mod = 2 * den
    lo, hi = x.numerator, x.numerator + den  # x/2 and (x+1)/2 in units of 1/(2 den)
    y = 2 * x.numerator
    out = []
    for _ in range(pre + per):
        if y == lo or y == hi:
            out.append(STAR)
        elif lo < y < hi:
            out.append("0")
        else:
            out.append("1")
        y = (2 * y) % mod
    word = "".join(out)
    return KneadingSequence.make(word[:pre], word[pre:])


def _check_parameter_leaf(S: Chord) -> None:
    from .parameter import in_entire_lamination

    if not in_entire_lamination(S):
        raise ValueError(f"{S} is not a parameter leaf")


def leaf_kneading(S: Chord, check: bool = True) -> KneadingSequence:
    """Kneading sequence shared by both ends of a parameter leaf."""
    if check:
        _check_parameter_leaf(S)
    ka, kb = kneading_of_angle(S.a), kneading_of_angle(S.b)
    if ka != kb:
        n = max(len(ka.prefix), len(kb.prefix)) + len(ka.block) * len(kb.block)
        for i in range(1, n + 1):
            x, y = ka.symbol(i), kb.symbol(i)
            if STAR not in (x, y) and x != y:
                raise ValueError(f"ends of {S} disagree at symbol {i}")
    return ka


def v_e_of(S: Chord, check: bool = True) -> tuple[str, str]:
    """The word ``v`` (length m-1) and symbol ``e`` with ``(v e)^inf`` just behind ``S``."""
    if check:
        _check_parameter_leaf(S)
    m = exact_period(S.a)
    if m is None or exact_period(S.b) != m:
        raise ValueError(f"{S} does not have periodic ends of equal period")
    if S.b - S.a >= Fraction(1, 2):
        raise ValueError(f"{S} has 0 on its smaller side")
    alpha = S.a
    v = kneading_of_angle(alpha).word(m - 1)
    landing = iterate(alpha, m - 1)
    if landing == alpha / 2:
        e = "0"
    elif landing == (alpha + 1) / 2:
        e = "1"
    else:
        raise AssertionError(f"orbit of {alpha} misses the critical diameter")
    return v, e


def just_behind(S: Chord, check: bool = True) -> KneadingSequence:
    if exact_period(S.a) is None:
        return leaf_kneading(S, check)
    v, e = v_e_of(S, check)
    return KneadingSequence.periodic(v + e)


def just_before(S: Chord, check: bool = True) -> KneadingSequence:
    if exact_period(S.a) is None:
        return leaf_kneading(S, check)
    v, e = v_e_of(S, check)
    return KneadingSequence.periodic(v + _flip(e))


def _agreement_horizon(k: KneadingSequence, n: int) -> int:
    # two eventually periodic words agreeing this far agree forever
    L = len(k.block)
    return len(k.prefix) + L * n // gcd(L, n) + n


def address_from_kneading(k: KneadingSequence, max_entry: int | None = None) -> InternalAddress:
    """Internal address read off a kneading sequence.

    Reaching ``*`` terminates the address; so does agreeing forever with the
    current periodic comparison word.  For sequences whose address is
    infinite, ``max_entry`` truncates it (default: 256).
    """
    limit = 256 if max_entry is None else max_entry
    entries = [1]
    if k.symbol(1) == STAR:
        return InternalAddress(tuple(entries))
    n = 1
    while True:
        w = k.word(n)
        horizon = _agreement_horizon(k, n)
        p = n + 1
        while p <= horizon and k.symbol(p) == w[(p - 1) % n]:
            p += 1
        if p > horizon or p > limit:
            break
        entries.append(p)
        if k.symbol(p) == STAR:
            break
        n = p
    return InternalAddress(tuple(entries))


def kneading_from_address(a: InternalAddress) -> KneadingSequence:
    """Inverse of :func:`address_from_kneading` on ``*``-periodic sequences."""
    entries = a.entries
    if len(entries) == 1:
        return KneadingSequence.periodic(STAR)
    block = "0"
    for i, n in enumerate(entries[1:], start=2):
        word = (block * (n // len(block) + 1))[:n]
        last = STAR if i == len(entries) else _flip(word[-1])
        block = word[:-1] + last
    return KneadingSequence.periodic(block)
