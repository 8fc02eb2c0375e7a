"""Exhaustive checks of the ring-theoretic definitions over M_2(Z/n).

Everything is brute force: matrices are rows of a ``(count, 4)`` int64 array
in row-major entry order, and quantifiers become ``any``/``all`` reductions
over broadcast axes. Matrices are enumerated lexicographically by
``(a11, a12, a21, a22)``, which fixes the order in which counterexamples are
reported.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .errors import ModulusTooLarge

MAX_MODULUS = 12
MAX_FULL_MODULUS = 4
MAX_SR1_MODULUS = 6  # sweeps over all E or Y are n**8 per matrix

C1 = "c1"  # A + E(XA - I)
C2 = "c2"  # A + E(I - XA)
CONVENTIONS = (C1, C2)


@dataclass(frozen=True)
class ModMat:
    n: int
    entries: Tuple[int, int, int, int]

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("modulus must be at least 2")
        object.__setattr__(self, "entries", tuple(int(e) % self.n for e in self.entries))

    @classmethod
    def of(cls, n: int, a11: int, a12: int, a21: int, a22: int) -> "ModMat":
        return cls(n, (a11, a12, a21, a22))

    @property
    def det(self) -> int:
        p, q, r, s = self.entries
        return (p * s - q * r) % self.n

    @property
    def is_unit(self) -> bool:
        return gcd(self.det, self.n) == 1

    def __matmul__(self, other: "ModMat") -> "ModMat":
        p, q, r, s = self.entries
        e, f, g, h = other.entries
        return ModMat(self.n, (p * e + q * g, p * f + q * h, r * e + s * g, r * f + s * h))

    def rows(self) -> List[List[int]]:
        p, q, r, s = self.entries
        return [[p, q], [r, s]]

    def __str__(self) -> str:
        p, q, r, s = self.entries
        return f"{p},{q};{r},{s}"


def _check_modulus(n: int, limit: int = MAX_MODULUS) -> None:
    if n < 2:
        raise ValueError(f"modulus {n} must be at least 2")
    if n > limit:
        raise ModulusTooLarge(f"modulus {n} exceeds {limit}")


# Vectorized helpers. Arrays have shape (..., 4).

def _mul(P: np.ndarray, Q: np.ndarray, n: int) -> np.ndarray:
    p, q, r, s = (P[..., i] for i in range(4))
    e, f, g, h = (Q[..., i] for i in range(4))
    return np.stack([p * e + q * g, p * f + q * h, r * e + s * g, r * f + s * h], axis=-1) % n


def _det(P: np.ndarray, n: int) -> np.ndarray:
    return (P[..., 0] * P[..., 3] - P[..., 1] * P[..., 2]) % n


def _trace(P: np.ndarray, n: int) -> np.ndarray:
    return (P[..., 0] + P[..., 3]) % n


def _adj(P: np.ndarray, n: int) -> np.ndarray:
    return np.stack([P[..., 3], -P[..., 1], -P[..., 2], P[..., 0]], axis=-1) % n


@lru_cache(maxsize=None)
def _unit_table(n: int) -> np.ndarray:
    return np.array([gcd(v, n) == 1 for v in range(n)])


@lru_cache(maxsize=None)
def all_matrices(n: int) -> np.ndarray:
    _check_modulus(n)
    grid = np.indices((n, n, n, n)).reshape(4, -1).T
    grid = grid.astype(np.int64)
    grid.setflags(write=False)
    return grid


@lru_cache(maxsize=None)
def _idempotent_array(n: int) -> np.ndarray:
    M = all_matrices(n)
    out = M[np.all(_mul(M, M, n) == M, axis=1)]
    out.setflags(write=False)
    return out


def _as_modmats(n: int, arr: np.ndarray) -> List[ModMat]:
    return [ModMat(n, tuple(int(v) for v in row)) for row in arr]


def enumerate_idempotents(n: int) -> List[ModMat]:
    """All idempotents of M_2(Z/n) in lexicographic entry order."""
    _check_modulus(n)
    return _as_modmats(n, _idempotent_array(n))


def trace_one_idempotents(n: int) -> List[ModMat]:
    """0, I and the idempotents ``[[x, y], [z, 1-x]]`` with ``x(1-x) = yz``.

    Over a ring without nontrivial idempotents (such as Z) these are all the
    idempotents; over Z/n with two or more prime factors they are not.
    """
    _check_modulus(n)
    arr = _idempotent_array(n)
    keep = (_trace(arr, n) == 1) | np.all(arr == 0, axis=1) | np.all(arr == _identity(n), axis=1)
    return _as_modmats(n, arr[keep])


def _identity(n: int) -> np.ndarray:
    return np.array([1, 0, 0, 1], dtype=np.int64)


@dataclass(frozen=True)
class PredicateResult:
    """Outcome of a "for all X there is E" predicate; falsy results carry the failing X."""

    holds: bool
    failing_x: Optional[ModMat] = None

    def __bool__(self) -> bool:
        return self.holds


def _forall_exists(n: int, values: np.ndarray, Xs: np.ndarray) -> PredicateResult:
    """``values`` has shape (len(Xs), candidates); true where the candidate works."""
    ok = np.any(_unit_table(n)[values], axis=1)
    if ok.all():
        return PredicateResult(True)
    i = int(np.argmin(ok))
    return PredicateResult(False, ModMat(n, tuple(int(v) for v in Xs[i])))


_CHUNK = 1 << 21  # bound the (X, E) broadcast to a few tens of MB


def _stable_range_sweep(A: ModMat, candidates: np.ndarray, convention: str, side: str) -> PredicateResult:
    n = A.n
    a = np.array(A.entries, dtype=np.int64)
    Xs = all_matrices(n)
    I = _identity(n)
    if side == "left":
        XA = _mul(Xs, a, n)
    else:
        XA = _mul(a, Xs, n)
    B = (XA - I) % n if convention == C1 else (I - XA) % n
    step = max(1, _CHUNK // max(1, len(candidates)))
    for lo in range(0, len(Xs), step):
        Bc = B[lo:lo + step, None, :]
        if side == "left":
            EB = _mul(candidates[None, :, :], Bc, n)
        else:
            EB = _mul(Bc, candidates[None, :, :], n)
        res = _forall_exists(n, _det((a + EB) % n, n), Xs[lo:lo + step])
        if not res:
            return res
    return PredicateResult(True)


def _check_convention(convention: str) -> None:
    if convention not in CONVENTIONS:
        raise ValueError(f"unknown convention {convention!r}")


def _candidate_array(n: int, idempotents: Optional[Sequence[ModMat]]) -> np.ndarray:
    if idempotents is None:
        return _idempotent_array(n)
    return np.array([E.entries for E in idempotents], dtype=np.int64).reshape(-1, 4)


def is_left_isr1_def(A: ModMat, convention: str = C1,
                     idempotents: Optional[Sequence[ModMat]] = None) -> PredicateResult:
    """For every X some idempotent E makes ``A + E(XA - I)`` (c1) or ``A + E(I - XA)`` (c2) a unit.

    ``idempotents`` restricts the inner sweep to a subfamily; by default all
    idempotents of M_2(Z/n) are tried.
    """
    _check_modulus(A.n)
    _check_convention(convention)
    return _stable_range_sweep(A, _candidate_array(A.n, idempotents), convention, "left")


def is_right_isr1_def(A: ModMat, convention: str = C1,
                      idempotents: Optional[Sequence[ModMat]] = None) -> PredicateResult:
    """Mirror image: ``A + (AX - I)E`` (c1) or ``A + (I - AX)E`` (c2)."""
    _check_modulus(A.n)
    _check_convention(convention)
    return _stable_range_sweep(A, _candidate_array(A.n, idempotents), convention, "right")


def is_sr1_def(A: ModMat) -> PredicateResult:
    """The c1 sweep with E ranging over all matrices (for unrestricted E, c1 and c2 coincide)."""
    _check_modulus(A.n, MAX_SR1_MODULUS)
    return _stable_range_sweep(A, all_matrices(A.n), C1, "left")


def _clean_candidates(A: ModMat) -> Tuple[np.ndarray, np.ndarray]:
    n = A.n
    a = np.array(A.entries, dtype=np.int64)
    Es = _idempotent_array(n)
    U = (a - Es) % n
    return Es[_unit_table(n)[_det(U, n)]], U[_unit_table(n)[_det(U, n)]]


def is_clean(A: ModMat) -> bool:
    _check_modulus(A.n)
    Es, _ = _clean_candidates(A)
    return len(Es) > 0


def is_strongly_clean(A: ModMat) -> bool:
    _check_modulus(A.n)
    Es, U = _clean_candidates(A)
    return bool(np.any(np.all(_mul(Es, U, A.n) == _mul(U, Es, A.n), axis=1)))


def thm1_expression(A: ModMat, X: ModMat, Y: ModMat) -> int:
    """``det Y (det X det A - Tr XA + 1) + det(A (Tr XY + 1)) - Tr(A adj Y)`` mod n.

    The middle term is evaluated literally as the determinant of a scaled matrix.
    """
    n = A.n
    a, x, y = (np.array(M.entries, dtype=np.int64) for M in (A, X, Y))
    s = int(_trace(_mul(x, y, n), n)) + 1
    first = int(_det(y, n)) * (int(_det(x, n)) * int(_det(a, n)) - int(_trace(_mul(x, a, n), n)) + 1)
    middle = int(_det((a * s) % n, n))
    last = int(_trace(_mul(a, _adj(y, n), n), n))
    return (first + middle - last) % n


def _thm1_values(A: ModMat, Xs: np.ndarray, Ys: np.ndarray) -> np.ndarray:
    """Vectorized expression with shape (len(Xs), len(Ys)), middle term as ``(Tr XY + 1)**2 det A``."""
    n = A.n
    a = np.array(A.entries, dtype=np.int64)
    det_a = int(_det(a, n))
    det_x = _det(Xs, n)[:, None]
    tr_xa = _trace(_mul(Xs, a, n), n)[:, None]
    det_y = _det(Ys, n)[None, :]
    tr_xy = _trace(_mul(Xs[:, None, :], Ys[None, :, :], n), n)
    tr_a_adj_y = _trace(_mul(a, _adj(Ys, n), n), n)[None, :]
    return (det_y * (det_x * det_a - tr_xa + 1) + (tr_xy + 1) ** 2 * det_a - tr_a_adj_y) % n


def _thm1_predicate(A: ModMat, Ys: np.ndarray) -> PredicateResult:
    Xs = all_matrices(A.n)
    step = max(1, _CHUNK // max(1, len(Ys)))
    for lo in range(0, len(Xs), step):
        res = _forall_exists(A.n, _thm1_values(A, Xs[lo:lo + step], Ys), Xs[lo:lo + step])
        if not res:
            return res
    return PredicateResult(True)


def thm1_sr1_predicate(A: ModMat) -> PredicateResult:
    _check_modulus(A.n, MAX_SR1_MODULUS)
    return _thm1_predicate(A, all_matrices(A.n))


def thm1_isr1_predicate(A: ModMat) -> PredicateResult:
    _check_modulus(A.n)
    return _thm1_predicate(A, _idempotent_array(A.n))


# Reports

# claims whose failure is expected to be possible; they are reported but do not fail a run
OPEN_QUESTION_CLAIMS = frozenset({
    "sr1_def_matches_thm1",
    "isr1_def_matches_thm1",
    "c1_matches_c2",
})


@dataclass
class Classification:
    matrix: ModMat
    unit: bool
    idempotent: bool
    clean: bool
    strongly_clean: bool
    left_isr1: Dict[str, PredicateResult]
    right_isr1: Dict[str, PredicateResult]
    sr1: Optional[PredicateResult] = None
    thm1_sr1: Optional[PredicateResult] = None
    thm1_isr1: Optional[PredicateResult] = None

    def to_dict(self) -> dict:
        def pr(r: Optional[PredicateResult]):
            if r is None:
                return None
            return {"holds": r.holds, "failing_x": r.failing_x.rows() if r.failing_x else None}

        return {
            "matrix": self.matrix.rows(),
            "unit": self.unit,
            "idempotent": self.idempotent,
            "clean": self.clean,
            "strongly_clean": self.strongly_clean,
            "left_isr1": {c: pr(r) for c, r in self.left_isr1.items()},
            "right_isr1": {c: pr(r) for c, r in self.right_isr1.items()},
            "sr1": pr(self.sr1),
            "thm1_sr1": pr(self.thm1_sr1),
            "thm1_isr1": pr(self.thm1_isr1),
        }


def classify(A: ModMat, conventions: Iterable[str] = (C1,), with_sr1: Optional[bool] = None) -> Classification:
    """Evaluate every predicate on one matrix.

    The all-matrix sweeps (sr1 and its determinant-expansion counterpart) run only for
    moduli up to 6 unless ``with_sr1`` says otherwise.
    """
    conventions = sorted(set(conventions))
    if with_sr1 is None:
        with_sr1 = A.n <= MAX_SR1_MODULUS
    a = np.array(A.entries, dtype=np.int64)
    return Classification(
        matrix=A,
        unit=A.is_unit,
        idempotent=bool(np.all(_mul(a, a, A.n) == a)),
        clean=is_clean(A),
        strongly_clean=is_strongly_clean(A),
        left_isr1={c: is_left_isr1_def(A, c) for c in conventions},
        right_isr1={c: is_right_isr1_def(A, c) for c in conventions},
        sr1=is_sr1_def(A) if with_sr1 else None,
        thm1_sr1=thm1_sr1_predicate(A) if with_sr1 else None,
        thm1_isr1=thm1_isr1_predicate(A),
    )


@dataclass
class Violation:
    claim: str
    matrices: List[ModMat]
    detail: str = ""

    def to_dict(self) -> dict:
        return {"claim": self.claim, "matrices": [m.rows() for m in self.matrices], "detail": self.detail}


@dataclass
class OracleReport:
    n: int
    mode: str
    conventions: List[str]
    counts: Dict[str, int]
    claims: Dict[str, bool]
    violations: List[Violation] = field(default_factory=list)
    elements: List[Classification] = field(default_factory=list)

    @property
    def unexpected_violations(self) -> List[Violation]:
        return [v for v in self.violations if v.claim not in OPEN_QUESTION_CLAIMS]

    def to_dict(self, include_elements: bool = False) -> dict:
        out = {
            "n": self.n,
            "mode": self.mode,
            "conventions": self.conventions,
            "counts": self.counts,
            "claims": self.claims,
            "open_question_claims": sorted(OPEN_QUESTION_CLAIMS & set(self.claims)),
            "violations": [v.to_dict() for v in self.violations],
        }
        if include_elements or self.mode == "targeted":
            out["elements"] = [c.to_dict() for c in self.elements]
        return out

    def to_json(self, include_elements: bool = False) -> str:
        return json.dumps(self.to_dict(include_elements), indent=2)


def _check(report_claims: Dict[str, bool], violations: List[Violation], claim: str,
           bad: Sequence[Tuple[List[ModMat], str]]) -> None:
    report_claims[claim] = not bad
    if bad:
        # first in enumeration order is the minimal counterexample
        mats, detail = bad[0]
        violations.append(Violation(claim, mats, detail))


def _assess(elements: List[Classification], conventions: List[str]) -> Tuple[Dict[str, bool], List[Violation]]:
    claims: Dict[str, bool] = {}
    violations: List[Violation] = []
    for c in conventions:
        _check(claims, violations, f"left_right_symmetry_{c}", [
            ([e.matrix], f"left={e.left_isr1[c].holds} right={e.right_isr1[c].holds}")
            for e in elements if e.left_isr1[c].holds != e.right_isr1[c].holds])
        _check(claims, violations, f"units_and_zero_isr1_{c}", [
            ([e.matrix], "unit or zero without isr1")
            for e in elements
            if (e.unit or not any(e.matrix.entries)) and not e.left_isr1[c].holds])
        _check(claims, violations, f"isr1_subset_clean_{c}", [
            ([e.matrix], "isr1 but not clean")
            for e in elements if e.left_isr1[c].holds and not e.clean])
    if len(conventions) == 2:
        _check(claims, violations, "c1_matches_c2", [
            ([e.matrix], f"c1={e.left_isr1[C1].holds} c2={e.left_isr1[C2].holds}")
            for e in elements if e.left_isr1[C1].holds != e.left_isr1[C2].holds])
    if C1 in conventions:
        _check(claims, violations, "isr1_def_matches_thm1", [
            ([e.matrix] + [r.failing_x for r in (e.left_isr1[C1], e.thm1_isr1) if r.failing_x],
             f"definition={e.left_isr1[C1].holds} thm1={e.thm1_isr1.holds}")
            for e in elements if e.left_isr1[C1].holds != e.thm1_isr1.holds])
    if all(e.sr1 is not None for e in elements):
        _check(claims, violations, "sr1_def_matches_thm1", [
            ([e.matrix] + [r.failing_x for r in (e.sr1, e.thm1_sr1) if r.failing_x],
             f"definition={e.sr1.holds} thm1={e.thm1_sr1.holds}")
            for e in elements if e.sr1.holds != e.thm1_sr1.holds])
    return claims, violations


def _counts(elements: List[Classification], conventions: List[str]) -> Dict[str, int]:
    counts = {
        "matrices": len(elements),
        "units": sum(e.unit for e in elements),
        "idempotents": sum(e.idempotent for e in elements),
        "clean": sum(e.clean for e in elements),
        "strongly_clean": sum(e.strongly_clean for e in elements),
    }
    for c in conventions:
        counts[f"left_isr1_{c}"] = sum(e.left_isr1[c].holds for e in elements)
        counts[f"right_isr1_{c}"] = sum(e.right_isr1[c].holds for e in elements)
    if elements and all(e.sr1 is not None for e in elements):
        counts["sr1"] = sum(e.sr1.holds for e in elements)
        counts["thm1_sr1"] = sum(e.thm1_sr1.holds for e in elements)
    counts["thm1_isr1"] = sum(e.thm1_isr1.holds for e in elements)
    return counts


def oracle_report(n: int, conventions: Iterable[str] = (C1, C2),
                  matrices: Optional[Sequence[ModMat]] = None) -> OracleReport:
    """Classify all of M_2(Z/n) (``matrices=None``, n <= 4) or just the given matrices (n <= 12)."""
    conventions = sorted(set(conventions))
    for c in conventions:
        _check_convention(c)
    if matrices is None:
        _check_modulus(n, MAX_FULL_MODULUS)
        mode = "full"
        targets = _as_modmats(n, all_matrices(n))
    else:
        _check_modulus(n)
        mode = "targeted"
        targets = [m if m.n == n else ModMat(n, m.entries) for m in matrices]
    elements = [classify(A, conventions) for A in targets]
    claims, violations = _assess(elements, conventions)
    return OracleReport(n, mode, conventions, _counts(elements, conventions), claims, violations, elements)
