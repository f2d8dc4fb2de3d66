"""Tuning into the critical value gap, internal angles, and sublimb gateways."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .angles import (
    Chord,
    angle,
    angle_from_binary,
    binary_expansions,
    dyadic_level,
    exact_period,
    iterate,
    periodic_angles,
)
from .dynamic import LeafContext, context_of
from .parameter import Leaf, as_chord


def _series(bits: str, m: int) -> Fraction:
    # sum of bits[i] * 2^{-(i+1) m}
    total = 0
    for b in bits:
        total = (total << m) | int(b)
    return Fraction(total, 1 << (m * len(bits))) if bits else Fraction(0)


def tune_expansion(ctx: LeafContext, prefix: str, repeat: str) -> Fraction:
    """``f(.prefix (repeat)^inf) = alpha + (2^m - 1) d sum b_i 2^{-im}`` in closed form."""
    m = ctx.m
    head = _series(prefix, m)
    block = _series(repeat, m)
    tail = block / (1 - Fraction(1, 1 << (m * len(repeat)))) / (1 << (m * len(prefix)))
    return ctx.alpha + ((1 << m) - 1) * ctx.d * (head + tail)


def tune(ctx: LeafContext, beta, expansion: int = 0) -> Fraction:
    """Tuned image of ``beta``; for dyadic ``beta`` pick expansion 0 (``...1000``) or 1 (``...0111``)."""
    beta = angle(beta)
    exps = binary_expansions(beta)
    if expansion >= len(exps):
        raise ValueError(f"{beta} has a single binary expansion")
    return tune_expansion(ctx, *exps[expansion])


def tune_dyadic(ctx: LeafContext, beta) -> Chord:
    """Boundary leaf of the critical value gap spanned by both expansions of a dyadic ``beta``."""
    beta = angle(beta)
    if dyadic_level(beta) is None:
        raise ValueError(f"{beta} is not dyadic")
    return Chord(tune(ctx, beta, 0), tune(ctx, beta, 1))


def tune_chord(ctx: LeafContext, c: Chord) -> Chord:
    """Tuned image of a chord whose ends have unique binary expansions."""
    c = as_chord(c)
    for x in c.ends:
        if dyadic_level(x) is not None:
            raise ValueError(f"end {x} is dyadic; use tune_dyadic")
    return Chord(tune(ctx, c.a), tune(ctx, c.b))


def untune(ctx: LeafContext, x) -> Fraction:
    """Inverse of :func:`tune` on its image; raises off the image."""
    x = angle(x)
    m = ctx.m
    y = (x - ctx.alpha) / (((1 << m) - 1) * ctx.d)
    if not 0 <= y <= Fraction(1, (1 << m) - 1):
        raise ValueError(f"{x} is outside the tuned arc of {ctx.S}")
    base = 1 << m
    digits: list[str] = []
    seen: dict[Fraction, int] = {}
    while y not in seen:
        seen[y] = len(digits)
        y *= base
        dgt = y.numerator // y.denominator
        if dgt not in (0, 1):
            raise ValueError(f"{x} is not in the image of tuning for {ctx.S}")
        digits.append(str(dgt))
        y -= dgt
    start = seen[y]
    word = "".join(digits)
    return angle_from_binary(word[:start], word[start:])


# -- rotation numbers and limbs -----------------------------------------------

def rotation_number(x) -> tuple[int, int]:
    """``(p, q)`` when the doubling orbit of ``x`` is cyclically ordered like a rotation."""
    x = angle(x)
    q = exact_period(x)
    if q is None:
        raise ValueError(f"{x} is not periodic")
    orbit = [iterate(x, i) for i in range(q)]
    ranked = sorted(orbit)
    index = {y: i for i, y in enumerate(ranked)}
    shifts = {(index[orbit[(i + 1) % q]] - index[orbit[i]]) % q for i in range(q)}
    if len(shifts) != 1:
        raise ValueError(f"orbit of {x} is not ordered like a rotation")
    p = shifts.pop()
    if q == 1:
        return 0, 1
    if gcd(p, q) != 1:
        raise ValueError(f"orbit of {x} is not ordered like a rotation")
    return p, q


def rotation_orbit_angle(p: int, q: int) -> Fraction:
    """Smallest angle of the period-``q`` orbit with rotation number ``p/q``."""
    # binary digit t of the first point is 1 exactly when t p mod q lands in the last p slots
    bits = "".join("1" if ((t + 1) * p) % q >= q - p else "0" for t in range(q))
    bits = bits[-1] + bits[:-1]
    x = angle_from_binary("", bits)
    orbit = [iterate(x, i) for i in range(q)]
    return min(orbit)


def _check_pq(p: int, q: int) -> None:
    if q < 2 or not 0 < p < q or gcd(p, q) != 1:
        raise ValueError(f"{p}/{q} is not a reduced fraction with 0 < p < q, q >= 2")


def limb_leaf(p: int, q: int) -> Leaf:
    """Period-``q`` leaf on the ``p/q`` rotation orbit bounding its shortest gap."""
    _check_pq(p, q)
    x0 = rotation_orbit_angle(p, q)
    orbit = sorted(iterate(x0, i) for i in range(q))
    best = None
    for i in range(q):
        a, b = orbit[i], orbit[(i + 1) % q]
        span = (b - a) % 1
        if best is None or span < best[0]:
            best = (span, a, b)
    return Leaf(q, Chord(best[1], best[2]))


def limb_leaf_by_search(p: int, q: int) -> Leaf:
    """Same leaf found by testing every period-``q`` angle; used as a cross-check."""
    _check_pq(p, q)
    hits = [x for x in periodic_angles(q) if _safe_rotation(x) == (p, q)]
    if len(hits) != q:
        raise AssertionError(f"{len(hits)} angles of rotation number {p}/{q}")
    gaps = [((hits[(i + 1) % q] - hits[i]) % 1, hits[i], hits[(i + 1) % q]) for i in range(q)]
    span, a, b = min(gaps)
    return Leaf(q, Chord(a, b))


def _safe_rotation(x):
    try:
        return rotation_number(x)
    except ValueError:
        return None


def bifurcation_leaf(S: Leaf, p: int, q: int, ctx: LeafContext | None = None) -> Leaf:
    """The period-``qm`` leaf bifurcating from ``S`` at internal angle ``p/q``."""
    ctx = ctx or context_of(S)
    L = limb_leaf(p, q)
    return Leaf(q * ctx.m, tune_chord(ctx, L.chord))


def internal_angle(ctx: LeafContext, B: Leaf) -> tuple[int, int]:
    """Rotation number of the untuned ends of an immediately visible ``B``."""
    ra = rotation_number(untune(ctx, B.a))
    rb = rotation_number(untune(ctx, B.b))
    if ra != rb:
        raise AssertionError(f"ends of {B} untune to different rotation numbers")
    return ra


def lowest_dyadic(lo: Fraction, hi: Fraction) -> Fraction:
    """The dyadic of least level strictly between ``lo < hi``."""
    if not lo < hi:
        raise ValueError("empty interval")
    level = 0
    while True:
        scale = 1 << level
        k = (lo * scale).__floor__() + 1
        if Fraction(k, scale) < hi:
            return Fraction(k, scale)
        level += 1


def gateway(S: Leaf, B: Leaf, ctx: LeafContext | None = None) -> Chord:
    """The gap boundary leaf ``R_B`` behind ``B`` screening everything visible behind ``B``."""
    ctx = ctx or context_of(S)
    if B.period % ctx.m:
        raise ValueError(f"period of {B} is not a multiple of {ctx.m}")
    q = B.period // ctx.m
    g, dlt = sorted((untune(ctx, B.a), untune(ctx, B.b)))
    lo, hi = (g, dlt) if dlt - g < Fraction(1, 2) else (dlt, g + 1)
    beta = lowest_dyadic(lo, hi) % 1
    if dyadic_level(beta) != q - 1:
        raise AssertionError(f"gateway dyadic {beta} has level {dyadic_level(beta)}, expected {q - 1}")
    return tune_dyadic(ctx, beta)


@dataclass(frozen=True)
class SublimbDesc:
    S: Leaf
    p: int
    q: int
    B: Leaf
    R_B: Chord
    ctx: LeafContext

    @property
    def m(self) -> int:
        return self.S.period


def sublimb(S: Leaf, p: int, q: int, ctx: LeafContext | None = None) -> SublimbDesc:
    ctx = ctx or context_of(S)
    B = bifurcation_leaf(S, p, q, ctx)
    if internal_angle(ctx, B) != (p, q):
        raise AssertionError(f"bifurcation leaf {B} has the wrong internal angle")
    return SublimbDesc(S, p, q, B, gateway(S, B, ctx), ctx)


def bifurcation_length(ctx: LeafContext, q: int) -> Fraction:
    m = ctx.m
    return Fraction(((1 << m) - 1) ** 2, (1 << (q * m)) - 1) * ctx.d


def gateway_length(ctx: LeafContext, q: int) -> Fraction:
    m = ctx.m
    return Fraction((1 << m) - 2, 1 << ((q - 1) * m)) * ctx.d

