"""Admissibility of internal addresses, narrow leaves and the address-level
translation check."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .kneading import InternalAddress, address_from_kneading, kneading_of_angle
from .parameter import Leaf, LaminationStore, get_store, periodic_numerators

ADMISSIBILITY_BOUND = 24


def _address_of_angle(x: Fraction, n: int) -> InternalAddress:
    return address_from_kneading(kneading_of_angle(x), max_entry=n)


def is_admissible(a: InternalAddress | str, bound: int = ADMISSIBILITY_BOUND) -> Fraction | None:
    """Smallest angle ``k/(2^n - 1)`` of exact period ``n`` realizing the address, or ``None``."""
    if isinstance(a, str):
        a = InternalAddress.parse(a)
    n = a.period
    if n > bound:
        raise ValueError(f"address ends at {n}, above the search bound {bound}")
    if n == 1:
        return Fraction(0)
    D = (1 << n) - 1
    for k in periodic_numerators(n):
        x = Fraction(k, D)
        if _address_of_angle(x, n) == a:
            return x
    return None


def address_of_leaf(S: Leaf) -> InternalAddress:
    return _address_of_angle(S.a, S.period)


def is_narrow(S: Leaf, store: LaminationStore | None = None) -> bool:
    """Length ``1/(2^m - 1)``, checked against the absence of visible leaves of smaller period."""
    m = S.period
    by_length = S.length == Fraction(1, (1 << m) - 1)
    if store is not None or m <= 12:
        by_definition = not visible_smaller(S, store or get_store(max(m, 2)))
        if by_definition != by_length:
            raise AssertionError(f"narrowness of {S}: length says {by_length}, visibility says {by_definition}")
    return by_length


def visible_smaller(S: Leaf, store: LaminationStore) -> list[Leaf]:
    """Leaves behind ``S`` of period below ``m`` not screened from ``S`` by a leaf of smaller period."""
    m = S.period
    out = []
    for L in store.up_to(m - 1):
        if not (S.a < L.a and L.b < S.b):
            continue
        seps = [X for X in store.up_to(L.period - 1) if S.a < X.a and X.b < S.b
                and X.a < L.a and L.b < X.b]
        if not seps:
            out.append(L)
    return out


@dataclass
class CorollaryReport:
    prefix: str
    r: int
    multiples: dict[int, bool] = field(default_factory=dict)
    shifted: dict[int, bool] = field(default_factory=dict)
    first_shift: bool | None = None

    @property
    def multiples_hold(self) -> bool:
        return all(self.multiples.values())

    @property
    def shifted_uniform(self) -> bool:
        return len(set(self.shifted.values())) <= 1

    @property
    def holds(self) -> bool:
        return self.multiples_hold and self.shifted_uniform

    @property
    def first_shift_consistent(self) -> bool:
        """Whether the ``j = 1`` case agrees with the ``j >= 2`` cases."""
        if self.first_shift is None or not self.shifted:
            return True
        return self.first_shift == next(iter(self.shifted.values()))

    def as_json(self) -> dict:
        return {
            "schema": "lamina/1",
            "check": "corollary-I",
            "prefix": self.prefix,
            "r": self.r,
            "multiples": {str(j): v for j, v in self.multiples.items()},
            "shifted": {str(j): v for j, v in self.shifted.items()},
            "j1": self.first_shift,
            "holds": self.holds,
        }


def check_corollary_I(prefix: InternalAddress | str, r: int, j_range=range(2, 4),
                      bound: int = ADMISSIBILITY_BOUND) -> CorollaryReport:
    """``prefix -> jm`` admissible for all ``j``, and ``prefix -> jm + r`` admissible for all
    ``j >= 2`` or for none; the ``j = 1`` case is reported on its own."""
    if isinstance(prefix, str):
        prefix = InternalAddress.parse(prefix)
    m = prefix.period
    if not 0 < r < m:
        raise ValueError(f"r={r} must lie in 1..{m - 1}")
    if is_admissible(prefix, bound) is None:
        raise ValueError(f"prefix {prefix} is not admissible")
    rep = CorollaryReport(str(prefix), r)
    for j in j_range:
        if j < 2:
            continue
        if j * m <= bound:
            rep.multiples[j] = is_admissible(prefix.extend(j * m), bound) is not None
        if j * m + r <= bound:
            rep.shifted[j] = is_admissible(prefix.extend(j * m + r), bound) is not None
    if m + r <= bound:
        rep.first_shift = is_admissible(prefix.extend(m + r), bound) is not None
    return rep
