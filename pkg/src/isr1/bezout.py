"""Linear Diophantine helpers around the Bezout identity ``a*x + b*z = 1``.

The central piece is :func:`solve_shifted_product`, which turns the question
"does some member of the infinite solution family satisfy ``z | x - 1``"
into a finite divisor enumeration.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd, isqrt
from typing import List, Optional, Tuple, Union

from .errors import NotCoprime


@dataclass(frozen=True)
class BezoutFamily:
    """Solutions of ``a*x + b*z = g`` with ``g = gcd(|a|, |b|)``.

    When ``g == 1`` every solution is ``member(k)`` for exactly one ``k``.
    """

    a: int
    b: int
    g: int
    x0: int
    z0: int

    def member(self, k: int) -> Tuple[int, int]:
        if self.g == 0:
            return (self.x0, self.z0)
        return (self.x0 + k * (self.b // self.g), self.z0 - k * (self.a // self.g))

    def index_of(self, x: int, z: int) -> Optional[int]:
        """Return k with ``member(k) == (x, z)``, or None if (x, z) is not in the family."""
        if self.a * x + self.b * z != self.g or self.g == 0:
            return None
        bg = self.b // self.g
        if bg == 0:
            k, r = divmod(self.z0 - z, self.a // self.g)
        else:
            k, r = divmod(x - self.x0, bg)
        if r or self.member(k) != (x, z):
            return None
        return k


@dataclass(frozen=True)
class MinimalPair:
    x: int
    z: int


@dataclass(frozen=True)
class ZeroProductFamily:
    """All solutions of ``(a*k - z0) * (a*l + b) == 0``.

    ``k`` (resp. ``l``) is the value that zeroes the first (resp. second)
    factor, with the other unknown free; None when that factor never vanishes.
    """

    k: Optional[int]
    l: Optional[int]

    @property
    def is_empty(self) -> bool:
        return self.k is None and self.l is None

    def __contains__(self, kl: Tuple[int, int]) -> bool:
        k, l = kl
        return k == self.k or l == self.l


ShiftedProductSolutions = Union[List[Tuple[int, int]], ZeroProductFamily]


def ext_gcd(a: int, b: int) -> BezoutFamily:
    """Extended Euclid on arbitrary-sign integers.

    >>> f = ext_gcd(240, 46)
    >>> f.g, 240 * f.x0 + 46 * f.z0
    (2, 2)
    """
    old_r, r = abs(a), abs(b)
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r == 0:
        return BezoutFamily(a, b, 0, 0, 0)
    x0 = old_s if a >= 0 else -old_s
    z0 = old_t if b >= 0 else -old_t
    return BezoutFamily(a, b, old_r, x0, z0)


def _require_coprime(a: int, b: int) -> None:
    if gcd(a, b) != 1:
        raise NotCoprime(f"gcd({a}, {b}) = {gcd(a, b)} != 1")


def minimal_pairs(a: int, b: int) -> List[MinimalPair]:
    """Solutions of ``a*x + b*z = 1`` with ``|x| <= b`` and ``|z| <= a``.

    For ``a, b >= 2`` the bounds are strict automatically and there are
    exactly two pairs of opposite sign patterns. When ``a == 1`` or ``b == 1``
    the non-strict bounds still admit exactly two solutions. Sorted by ``x``.
    """
    if a < 1 or b < 1:
        raise ValueError("minimal_pairs expects positive integers")
    _require_coprime(a, b)
    fam = ext_gcd(a, b)
    # |x| <= b pins x to at most three residues around x0 mod b
    base = fam.x0 % b
    pairs = []
    for x in (base - b, base, base + b):
        z, r = divmod(1 - a * x, b)
        if r == 0 and abs(x) <= b and abs(z) <= a:
            pairs.append(MinimalPair(x, z))
    return sorted(set(pairs), key=lambda p: (p.x, p.z))


def divisors(n: int) -> List[int]:
    """Positive divisors of ``|n|`` in increasing order; ``n`` must be nonzero."""
    n = abs(n)
    if n == 0:
        raise ValueError("0 has infinitely many divisors")
    return list(_divisors(n))


@lru_cache(maxsize=4096)
def _divisors(n: int) -> Tuple[int, ...]:
    small, large = [], []
    for d in range(1, isqrt(n) + 1):
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
    return tuple(small + large[::-1])


def solve_shifted_product(a: int, z0: int, b: int, target: int) -> ShiftedProductSolutions:
    """All integer (k, l) with ``(a*k - z0) * (a*l + b) == target``.

    A nonzero target gives a finite, lexicographically sorted list. A zero
    target gives a :class:`ZeroProductFamily` describing the two lines.
    """
    if a < 1:
        raise ValueError("a must be positive")
    if target == 0:
        k = z0 // a if z0 % a == 0 else None
        l = -b // a if b % a == 0 else None
        return ZeroProductFamily(k, l)
    sols = []
    for d in _divisors(abs(target)):
        for d1 in (d, -d):
            d2 = target // d1
            if (d1 + z0) % a == 0 and (d2 - b) % a == 0:
                sols.append(((d1 + z0) // a, (d2 - b) // a))
    return sorted(sols)


def _nonempty(sols: ShiftedProductSolutions) -> bool:
    if isinstance(sols, ZeroProductFamily):
        return not sols.is_empty
    return bool(sols)


@dataclass(frozen=True)
class DivisibilityResult:
    """Outcome of the divisibility test with its supporting solution sets.

    ``minus`` solves for ``z | x - 1`` (target ``a - 1``), ``plus`` for
    ``z | x + 1`` (target ``-(a + 1)``).
    """

    a: int
    b: int
    family: BezoutFamily
    minus: ShiftedProductSolutions
    plus: ShiftedProductSolutions

    @property
    def holds(self) -> bool:
        return _nonempty(self.minus) or _nonempty(self.plus)

    def solution(self) -> Optional[Tuple[int, int, int]]:
        """A concrete (x, z, sign) from the family: sign +1 means z | x-1, -1 means z | x+1."""
        for sols, sign in ((self.minus, 1), (self.plus, -1)):
            if isinstance(sols, ZeroProductFamily):
                if sols.k is not None:
                    return (*self.family.member(sols.k), sign)
                if sols.l is not None:
                    # second factor vanishes: any k works
                    return (*self.family.member(0), sign)
            elif sols:
                return (*self.family.member(sols[0][0]), sign)
        return None


def divisibility_check(a: int, b: int) -> DivisibilityResult:
    if a < 1 or b < 1:
        raise ValueError("divisibility_check expects positive integers")
    _require_coprime(a, b)
    fam = ext_gcd(a, b)
    minus = solve_shifted_product(a, fam.z0, b, a - 1)
    plus = solve_shifted_product(a, fam.z0, b, -(a + 1))
    return DivisibilityResult(a, b, fam, minus, plus)


def divisibility_isr1(a: int, b: int) -> bool:
    """True iff some solution of ``a*x + b*z = 1`` has ``z | x - 1`` or ``z | x + 1``.

    Divisibility by 0 means equality with 0, which only arises for ``a == 1``.
    """
    return divisibility_check(a, b).holds
