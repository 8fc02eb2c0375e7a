"""Decide idempotent stable range one for 2x2 integer matrices.

A determinant-zero matrix with coprime entries is carried by unimodular
similarity (and, if needed, negation) to ``[[a, b], [0, 0]]`` with
``a, b >= 0``. There the Euclidean-style reduction shrinks ``b`` until
``a >= 2b``, where the answer is ``a = +-1 (mod b)``. Accepted inputs get a
witness built at the terminal pair and transported back step by step; every
witness is re-verified before it is returned.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from math import gcd
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import (
    CriterionFails,
    DivisibilityFails,
    NotApplicable,
    NotCoprime,
    VerificationFailed,
)
from .mat2 import (
    FLIP,
    I2,
    ZERO,
    Mat2,
    adjugate,
    conjugate,
    content,
    det,
    inverse_unimodular,
    is_idempotent,
    rank1_factor,
    trace,
    unimodular_from_primitive,
)


@dataclass(frozen=True)
class Witness:
    """A nontrivial idempotent ``E`` with ``trace(A @ E) == sign``.

    The unitizer proper is ``Y = adjugate(E)``.
    """

    E: Mat2
    sign: int

    @property
    def Y(self) -> Mat2:
        return adjugate(self.E)


# Reduction steps. Each maps the current matrix to the next one in the chain.

@dataclass(frozen=True)
class Conjugate:
    """``A -> T^-1 A T``."""
    T: Mat2


@dataclass(frozen=True)
class Shift:
    """``[[a, b], [0, 0]] -> [[a, b - q*a], [0, 0]]``."""
    q: int


@dataclass(frozen=True)
class FlipSecondEntry:
    """``[[a, b], [0, 0]] -> [[a, -b], [0, 0]]``, i.e. conjugation by diag(1, -1)."""


@dataclass(frozen=True)
class Negate:
    """``A -> -A``; witnesses carry over with their sign flipped."""


ReductionStep = Union[Conjugate, Shift, FlipSecondEntry, Negate]


def apply_step(A: Mat2, step: ReductionStep) -> Mat2:
    if isinstance(step, Conjugate):
        return conjugate(A, step.T)
    if isinstance(step, Shift):
        if (A.a21, A.a22) != (0, 0):
            raise ValueError("Shift needs a zero second row")
        return Mat2(A.a11, A.a12 - step.q * A.a11, 0, 0)
    if isinstance(step, FlipSecondEntry):
        return conjugate(A, FLIP)
    if isinstance(step, Negate):
        return -A
    raise TypeError(step)


@dataclass(frozen=True)
class CriterionResult:
    accepted: bool
    steps: Tuple[ReductionStep, ...]
    terminal: Tuple[int, int]


def euclidean_criterion(a: int, b: int) -> CriterionResult:
    """Reduce ``(a, b)`` until ``b == 0`` or ``a >= 2b`` and test ``a = +-1 (mod b)``.

    ``a == 0`` is accepted as input (then coprimality forces ``b == 1`` and
    the pair is already terminal).
    """
    if a < 0 or b < 0:
        raise ValueError("euclidean_criterion expects nonnegative integers")
    if gcd(a, b) != 1:
        raise NotCoprime(f"gcd({a}, {b}) = {gcd(a, b)} != 1")
    steps: List[ReductionStep] = []
    while a > 0 and b > 0 and a < 2 * b:
        if a <= b:
            q = b // a
            steps.append(Shift(q))
            b -= q * a
        else:
            steps.append(Shift(1))
            steps.append(FlipSecondEntry())
            b = a - b
    if b == 0:
        accepted = a == 1
    else:
        accepted = a % b in (1 % b, b - 1)
    return CriterionResult(accepted, tuple(steps), (a, b))


def construct_witness_terminal(a: int, b: int, sign: int) -> Witness:
    """``E = [[1, 0], [z, 0]]`` with ``a + b*z == sign``."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    if b == 0:
        if a != sign:
            raise CriterionFails(f"[[{a}, 0], [0, 0]] has no terminal witness")
        z = 0
    else:
        z, r = divmod(sign - a, b)
        if r:
            raise CriterionFails(f"{a} is not {sign:+d} mod {b}")
    return Witness(Mat2(1, 0, z, 0), sign)


def construct_witness_from_solution(a: int, b: int, x: int, z: int) -> Witness:
    """Complete the Bezout column ``(x, z)`` to an idempotent witness for ``[[a, b], [0, 0]]``."""
    if a * x + b * z != 1:
        raise ValueError(f"({x}, {z}) does not solve {a}x + {b}z = 1")
    if z != 0 and (x - 1) % z == 0:
        k = (x - 1) // z
        return Witness(Mat2(x, -k * x, z, -k * z), 1)
    if z != 0 and (x + 1) % z == 0:
        k = (x + 1) // z
        return Witness(Mat2(-x, k * x, -z, k * z), -1)
    raise DivisibilityFails(f"{z} divides neither {x} - 1 nor {x} + 1")


def shift_witness(w: Witness, q: int) -> Witness:
    """Move a witness for ``[[a, b], [0, 0]]`` to one for ``[[a, b - q*a], [0, 0]]``.

    The first column becomes ``(x + q*z, z)``; the top-right entry is the
    one idempotency forces, ``y + q*(1 - 2x) - q**2 * z``.
    """
    x, y, z, _ = w.E
    xn = x + q * z
    yn = y + q * (1 - 2 * x) - q * q * z
    return Witness(Mat2(xn, yn, z, 1 - xn), w.sign)


def _undo_step(w: Witness, step: ReductionStep) -> Witness:
    if isinstance(step, Conjugate):
        T = step.T
        return Witness(T @ w.E @ inverse_unimodular(T), w.sign)
    if isinstance(step, Shift):
        return shift_witness(w, -step.q)
    if isinstance(step, FlipSecondEntry):
        return Witness(FLIP @ w.E @ FLIP, w.sign)
    if isinstance(step, Negate):
        return Witness(w.E, -w.sign)
    raise TypeError(step)


def witness_problems(A: Mat2, w: Witness) -> List[str]:
    """List every witness invariant that fails for ``A`` (empty means valid)."""
    E = w.E
    problems = []
    if w.sign not in (1, -1):
        problems.append(f"sign {w.sign} not in {{+1, -1}}")
    if not is_idempotent(E):
        problems.append("E is not idempotent")
    if E in (ZERO, I2):
        problems.append("E is trivial")
    if trace(E) != 1 or det(E) != 0:
        problems.append("E does not have trace 1 and det 0")
    if trace(A @ E) != w.sign:
        problems.append(f"trace(A E) = {trace(A @ E)} != sign {w.sign}")
    if not is_idempotent(w.Y):
        problems.append("Y is not idempotent")
    return problems


def transport_witness(w: Witness, steps: Sequence[ReductionStep], original: Optional[Mat2] = None) -> Witness:
    """Carry a witness for the reduced matrix back through ``steps``.

    If ``original`` is given the result is re-verified against it.
    """
    for step in reversed(steps):
        w = _undo_step(w, step)
    if original is not None:
        problems = witness_problems(original, w)
        if problems:
            raise VerificationFailed(f"transported witness for {original}: {'; '.join(problems)}")
    return w


# Decisions

UNIT = "unit"
ISR1 = "isr1"
NOT_SR1 = "not_sr1"
NOT_ISR1 = "not_isr1"

CONTENT_NOT_ONE = "content_not_one"
CLEAN_CRITERION_FAILS = "clean_criterion_fails"


@dataclass(frozen=True)
class Decision:
    """Verdict on one matrix with its certificate.

    ``unitizer`` is filled for every positive answer: the trivial idempotent
    for units (0) and for the zero matrix (I), ``adjugate(witness.E)``
    otherwise.
    """

    matrix: Mat2
    status: str
    det: int
    content: int
    witness: Optional[Witness] = None
    unitizer: Optional[Mat2] = None
    reason: Optional[str] = None
    terminal_pair: Optional[Tuple[int, int]] = None
    steps: Tuple[ReductionStep, ...] = field(default=(), compare=False)

    @property
    def is_isr1(self) -> bool:
        return self.status in (UNIT, ISR1)

    def to_dict(self) -> dict:
        w = self.witness
        return {
            "input": self.matrix.rows(),
            "status": self.status,
            "det": self.det,
            "content": self.content,
            "witness_E": w.E.rows() if w else None,
            "unitizer_Y": self.unitizer.rows() if self.unitizer is not None else None,
            "sign": w.sign if w else None,
            "reason": self.reason,
            "terminal_pair": list(self.terminal_pair) if self.terminal_pair else None,
        }


def reduce_rank_one(A: Mat2) -> Tuple[List[ReductionStep], Mat2]:
    """Steps taking a content-1, det-0 matrix to ``[[a, b], [0, 0]]`` with ``a, b >= 0``."""
    steps: List[ReductionStep] = []
    M = A
    # trace is a similarity invariant, so a < 0 can only be fixed by negation
    if trace(M) < 0:
        steps.append(Negate())
        M = -M
    if (M.a21, M.a22) != (0, 0):
        U = unimodular_from_primitive(rank1_factor(M).u)
        T = inverse_unimodular(U)
        steps.append(Conjugate(T))
        M = conjugate(M, T)
    if M.a12 < 0:
        steps.append(FlipSecondEntry())
        M = apply_step(M, FlipSecondEntry())
    assert M.a21 == 0 and M.a22 == 0 and M.a11 >= 0 and M.a12 >= 0
    return steps, M


def decide_isr1(A: Mat2) -> Decision:
    d, c = det(A), content(A)
    if d in (1, -1):
        return Decision(A, UNIT, d, c, unitizer=ZERO)
    if d != 0:
        return Decision(A, NOT_SR1, d, c)
    if A == ZERO:
        return Decision(A, ISR1, d, c, unitizer=I2)
    if c != 1:
        return Decision(A, NOT_ISR1, d, c, reason=CONTENT_NOT_ONE)
    steps, M = reduce_rank_one(A)
    crit = euclidean_criterion(M.a11, M.a12)
    steps.extend(crit.steps)
    if not crit.accepted:
        return Decision(A, NOT_ISR1, d, c, reason=CLEAN_CRITERION_FAILS,
                        terminal_pair=crit.terminal, steps=tuple(steps))
    a, b = crit.terminal
    sign = 1 if b == 0 or (a - 1) % b == 0 else -1
    w = transport_witness(construct_witness_terminal(a, b, sign), steps, original=A)
    return Decision(A, ISR1, d, c, witness=w, unitizer=w.Y,
                    terminal_pair=crit.terminal, steps=tuple(steps))


def recheck_negative(decision: Decision) -> bool:
    """Re-derive a NotIsr1 verdict from its certificate alone."""
    if decision.status != NOT_ISR1:
        return False
    if decision.reason == CONTENT_NOT_ONE:
        return content(decision.matrix) == decision.content != 1
    a, b = decision.terminal_pair
    M = decision.matrix
    for step in decision.steps:
        M = apply_step(M, step)
    if M != Mat2(a, b, 0, 0):
        return False
    return not euclidean_criterion(a, b).accepted and (b == 0 or a >= 2 * b)


def clean_decompose(A: Mat2) -> Tuple[Mat2, Mat2]:
    """Split an isr1 det-0 matrix as idempotent + unit, using the unitizer as the idempotent.

    ``det(A - Y) == -trace(A @ E) == -sign``.
    """
    dec = decide_isr1(A)
    if dec.status != ISR1 or dec.witness is None:
        raise NotApplicable(f"{A} has no nontrivial isr1 witness (status {dec.status})")
    Y = dec.witness.Y
    U = A - Y
    if det(U) != -dec.witness.sign or not is_idempotent(Y) or Y + U != A:
        raise VerificationFailed(f"clean decomposition of {A} did not verify")
    return Y, U


@dataclass(frozen=True)
class WitnessCheck:
    ok: bool
    failure: Optional[str] = None
    dets: Tuple[int, ...] = ()


def verify_witness(A: Mat2, w: Witness, x_samples: Iterable[Mat2]) -> WitnessCheck:
    """Check the witness invariants and ``det(A + Y(XA - I)) == -sign`` for every sample X."""
    if det(A) != 0:
        return WitnessCheck(False, "det(A) != 0")
    problems = witness_problems(A, w)
    if problems:
        return WitnessCheck(False, problems[0])
    Y = w.Y
    dets = []
    for X in x_samples:
        value = det(A + Y @ (X @ A - I2))
        dets.append(value)
        if value != -w.sign:
            return WitnessCheck(False, f"det(A + Y(XA - I)) = {value} for X = {X}", tuple(dets))
    return WitnessCheck(True, None, tuple(dets))


def sample_matrices(rng: random.Random, count: int, bound: int = 100) -> List[Mat2]:
    return [Mat2(*(rng.randint(-bound, bound) for _ in range(4))) for _ in range(count)]


def brute_force_witness(a: int, b: int, bound: Optional[int] = None) -> Optional[Witness]:
    """Search idempotents ``[[x, y], [z, 1-x]]`` with ``|x|, |z| <= bound`` directly.

    Looks for ``a*x + b*z == +-1`` with ``x*(1-x) == y*z``; shares no code
    with the reduction path. For each z only the x solving the linear
    condition is tested. Default bound is ``a + b``.
    """
    if bound is None:
        bound = abs(a) + abs(b)
    if bound > 10**6 or a == 0:
        return _brute_force_scalar(a, b, bound)
    z = np.arange(-bound, bound + 1, dtype=np.int64)
    for s in (1, -1):
        num = s - b * z
        x = num // a
        p = x * (1 - x)
        zsafe = np.where(z == 0, 1, z)
        ok = (num % a == 0) & (np.abs(x) <= bound) & np.where(z == 0, p == 0, p % zsafe == 0)
        hits = np.flatnonzero(ok)
        if hits.size:
            i = hits[0]
            zi, xi = int(z[i]), int(x[i])
            y = 0 if zi == 0 else xi * (1 - xi) // zi
            return Witness(Mat2(xi, y, zi, 1 - xi), s)
    return None


def _brute_force_scalar(a: int, b: int, bound: int) -> Optional[Witness]:
    for s in (1, -1):
        for z in range(-bound, bound + 1):
            for x in range(-bound, bound + 1):
                if a * x + b * z != s:
                    continue
                p = x * (1 - x)
                if z == 0:
                    if p == 0:
                        return Witness(Mat2(x, 0, 0, 1 - x), s)
                elif p % z == 0:
                    return Witness(Mat2(x, p // z, z, 1 - x), s)
    return None
