"""Exact 2x2 integer matrices.

Entries are Python ints, so everything is arbitrary precision. Besides the
usual ring operations this module provides the pieces needed to move a
rank-one matrix into zero-second-row form by unimodular similarity.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from math import gcd
from typing import Iterator, List, Sequence, Tuple

from .bezout import ext_gcd
from .errors import NotNilpotent, NotPrimitive, NotRankOne, NotUnimodular


@dataclass(frozen=True)
class Mat2:
    a11: int
    a12: int
    a21: int
    a22: int

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "Mat2":
        (p, q), (r, s) = rows
        return cls(int(p), int(q), int(r), int(s))

    def rows(self) -> List[List[int]]:
        return [[self.a11, self.a12], [self.a21, self.a22]]

    def __iter__(self) -> Iterator[int]:
        return iter((self.a11, self.a12, self.a21, self.a22))

    def __add__(self, other: "Mat2") -> "Mat2":
        return Mat2(self.a11 + other.a11, self.a12 + other.a12,
                    self.a21 + other.a21, self.a22 + other.a22)

    def __sub__(self, other: "Mat2") -> "Mat2":
        return Mat2(self.a11 - other.a11, self.a12 - other.a12,
                    self.a21 - other.a21, self.a22 - other.a22)

    def __neg__(self) -> "Mat2":
        return Mat2(-self.a11, -self.a12, -self.a21, -self.a22)

    def __matmul__(self, other: "Mat2") -> "Mat2":
        p, q, r, s = self
        e, f, g, h = other
        return Mat2(p * e + q * g, p * f + q * h, r * e + s * g, r * f + s * h)

    def __mul__(self, c: int) -> "Mat2":
        return Mat2(c * self.a11, c * self.a12, c * self.a21, c * self.a22)

    __rmul__ = __mul__

    def __str__(self) -> str:
        return format_matrix(self)


I2 = Mat2(1, 0, 0, 1)
ZERO = Mat2(0, 0, 0, 0)
E11 = Mat2(1, 0, 0, 0)
E12 = Mat2(0, 1, 0, 0)
E21 = Mat2(0, 0, 1, 0)
E22 = Mat2(0, 0, 0, 1)
SWAP = E12 + E21
FLIP = Mat2(1, 0, 0, -1)


_ENTRY = r"\s*([+-]?\d+)\s*"
_MATRIX_RE = re.compile(rf"^{_ENTRY},{_ENTRY};{_ENTRY},{_ENTRY}$")


def parse_matrix(text: str) -> Mat2:
    """Parse ``"a11,a12;a21,a22"``; whitespace around entries is ignored."""
    m = _MATRIX_RE.match(text)
    if m is None:
        raise ValueError(f"cannot parse matrix {text!r}; expected 'a11,a12;a21,a22'")
    return Mat2(*(int(g) for g in m.groups()))


def format_matrix(A: Mat2) -> str:
    return f"{A.a11},{A.a12};{A.a21},{A.a22}"


def det(A: Mat2) -> int:
    return A.a11 * A.a22 - A.a12 * A.a21


def trace(A: Mat2) -> int:
    return A.a11 + A.a22


def adjugate(A: Mat2) -> Mat2:
    return Mat2(A.a22, -A.a12, -A.a21, A.a11)


def content(A: Mat2) -> int:
    """gcd of the four entries; 0 for the zero matrix."""
    return gcd(A.a11, A.a12, A.a21, A.a22)


def is_idempotent(A: Mat2) -> bool:
    return A @ A == A


def is_nilpotent(A: Mat2) -> bool:
    return trace(A) == 0 and det(A) == 0


def is_unimodular(A: Mat2) -> bool:
    return det(A) in (1, -1)


def inverse_unimodular(T: Mat2) -> Mat2:
    d = det(T)
    if d not in (1, -1):
        raise NotUnimodular(f"det({T}) = {d}")
    return adjugate(T) * d


def conjugate(A: Mat2, T: Mat2) -> Mat2:
    """``T^-1 @ A @ T`` for unimodular ``T``."""
    return inverse_unimodular(T) @ A @ T


def unimodular_from_primitive(u: Tuple[int, int]) -> Mat2:
    """A unimodular U with ``U @ u == (1, 0)``, built from extended Euclid."""
    u1, u2 = u
    fam = ext_gcd(u1, u2)
    if fam.g != 1:
        raise NotPrimitive(f"gcd{tuple(u)} = {fam.g}")
    return Mat2(fam.x0, fam.z0, -u2, u1)


@dataclass(frozen=True)
class Rank1Factorization:
    """``A = c * u @ v^T`` with primitive u, v and c = content(A) > 0."""

    c: int
    u: Tuple[int, int]
    v: Tuple[int, int]

    def expand(self) -> Mat2:
        (u1, u2), (v1, v2) = self.u, self.v
        return Mat2(u1 * v1, u1 * v2, u2 * v1, u2 * v2) * self.c


def rank1_factor(A: Mat2) -> Rank1Factorization:
    """Factor a nonzero determinant-zero matrix through primitive vectors.

    Normalized so that the first nonzero entry of ``v`` is positive, which
    makes the factorization unique.
    """
    if det(A) != 0 or A == ZERO:
        raise NotRankOne(f"{A} is not of rank one")
    c = content(A)
    # every nonzero row is a multiple of v
    row = (A.a11, A.a12) if (A.a11, A.a12) != (0, 0) else (A.a21, A.a22)
    g = gcd(*row)
    v = (row[0] // g, row[1] // g)
    if v[0] < 0 or (v[0] == 0 and v[1] < 0):
        v = (-v[0], -v[1])
    # column k of A equals c * v[k] * u
    k = 0 if v[0] != 0 else 1
    col = (A.a11, A.a21) if k == 0 else (A.a12, A.a22)
    u = (col[0] // (c * v[k]), col[1] // (c * v[k]))
    fact = Rank1Factorization(c, u, v)
    assert fact.expand() == A
    return fact


@dataclass(frozen=True)
class NilpotentClass:
    """``m`` with ``T`` similar to ``m * E12``; ``cert`` satisfies
    ``conjugate(T, cert) == m * E12`` (None for the zero matrix)."""

    m: int
    cert: Mat2 | None


def nilpotent_class(T: Mat2) -> NilpotentClass:
    if not is_nilpotent(T):
        raise NotNilpotent(f"{T} is not nilpotent")
    if T == ZERO:
        return NilpotentClass(0, None)
    f = rank1_factor(T)
    U = unimodular_from_primitive(f.u)
    P = inverse_unimodular(U)
    R = conjugate(T, P)  # second row zero, trace zero: [[0, w], [0, 0]]
    if R.a12 < 0:
        P = P @ FLIP
        R = conjugate(T, P)
    assert R == E12 * f.c
    return NilpotentClass(f.c, P)
