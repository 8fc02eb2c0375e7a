import itertools
import json
from math import gcd

import pytest
from hypothesis import given, strategies as st

from isr1.errors import ModulusTooLarge
from isr1.modring import (
    C1,
    C2,
    ModMat,
    all_matrices,
    classify,
    enumerate_idempotents,
    is_clean,
    is_left_isr1_def,
    is_right_isr1_def,
    is_sr1_def,
    is_strongly_clean,
    oracle_report,
    thm1_expression,
    thm1_isr1_predicate,
    thm1_sr1_predicate,
    trace_one_idempotents,
)


def tuples(n):
    return list(itertools.product(range(n), repeat=4))


def mul(P, Q, n):
    return ((P[0] * Q[0] + P[1] * Q[2]) % n, (P[0] * Q[1] + P[1] * Q[3]) % n,
            (P[2] * Q[0] + P[3] * Q[2]) % n, (P[2] * Q[1] + P[3] * Q[3]) % n)


def unit(P, n):
    return gcd(P[0] * P[3] - P[1] * P[2], n) == 1


def naive_left_isr1(A, n, sign=1):
    """Plain-Python quantifier sweep, independent of the vectorised code."""
    idem = [E for E in tuples(n) if mul(E, E, n) == E]
    I = (1, 0, 0, 1)
    for X in tuples(n):
        XA = mul(X, A, n)
        B = tuple(sign * (xa - i) % n for xa, i in zip(XA, I))
        if not any(unit(tuple((a + eb) % n for a, eb in zip(A, mul(E, B, n))), n) for E in idem):
            return False
    return True


@pytest.mark.parametrize("n,count", [(2, 8), (3, 14), (4, 26), (5, 32), (12, 364)])
def test_idempotent_counts(n, count):
    assert len(enumerate_idempotents(n)) == count


@pytest.mark.parametrize("n", [2, 3, 4])
def test_idempotents_match_naive(n):
    naive = [E for E in tuples(n) if mul(E, E, n) == E]
    assert [E.entries for E in enumerate_idempotents(n)] == naive


def test_all_matrices_lexicographic():
    arr = all_matrices(3)
    assert [tuple(int(v) for v in r) for r in arr] == tuples(3)


def test_trace_one_family_at_12():
    fam = trace_one_idempotents(12)
    assert ModMat.of(12, 0, 0, 0, 0) in fam and ModMat.of(12, 1, 0, 0, 1) in fam
    for E in fam:
        if E.entries in ((0, 0, 0, 0), (1, 0, 0, 1)):
            continue
        assert (E.entries[0] + E.entries[3]) % 12 == 1 and E.det == 0
    # diag(9, 1) is idempotent mod 12 but lies outside the family
    assert ModMat.of(12, 9, 0, 0, 1) in enumerate_idempotents(12)
    assert ModMat.of(12, 9, 0, 0, 1) not in fam


@pytest.mark.parametrize("n", [2, 3])
@pytest.mark.parametrize("convention,sign", [(C1, 1), (C2, -1)])
def test_left_isr1_matches_naive(n, convention, sign):
    for A in tuples(n):
        assert bool(is_left_isr1_def(ModMat(n, A), convention)) == naive_left_isr1(A, n, sign), A


@pytest.mark.parametrize("n", [2, 3, 5, 12])
def test_units_and_zero_are_isr1(n):
    for A in (ModMat.of(n, 0, 0, 0, 0), ModMat.of(n, 1, 0, 0, 1)):
        for c in (C1, C2):
            assert is_left_isr1_def(A, c) and is_right_isr1_def(A, c)


@pytest.mark.parametrize("n", [2, 3])
def test_left_right_agree_and_isr1_is_clean(n):
    for A in tuples(n):
        M = ModMat(n, A)
        left = bool(is_left_isr1_def(M))
        assert left == bool(is_right_isr1_def(M))
        if left:
            assert is_clean(M) and bool(is_sr1_def(M))


def test_failing_x_is_reported():
    res = is_left_isr1_def(ModMat.of(12, 2, 0, 0, 0), idempotents=trace_one_idempotents(12))
    assert not res
    assert res.failing_x == ModMat.of(12, 1, 0, 0, 0)


def test_two_e11_mod_12():
    A = ModMat.of(12, 2, 0, 0, 0)
    assert is_clean(A) and is_strongly_clean(A)
    # the full idempotent sweep succeeds: diag(9, 1) rescues X = diag(1, 0)
    assert is_left_isr1_def(A) and is_right_isr1_def(A)
    X = ModMat.of(12, 1, 0, 0, 0)
    E = ModMat.of(12, 9, 0, 0, 1)
    I = ModMat.of(12, 1, 0, 0, 1)
    XA_I = ModMat(12, tuple(p - q for p, q in zip((X @ A).entries, I.entries)))
    rescued = ModMat(12, tuple(p + q for p, q in zip(A.entries, (E @ XA_I).entries)))
    assert rescued.is_unit and rescued.det == 1


def test_two_e11_mod_12_fails_for_trace_one_family():
    A = ModMat.of(12, 2, 0, 0, 0)
    X = ModMat.of(12, 1, 0, 0, 0)
    for E in trace_one_idempotents(12):
        XA_I = ModMat(12, tuple(p - q for p, q in zip((X @ A).entries, (1, 0, 0, 1))))
        assert not ModMat(12, tuple(p + q for p, q in zip(A.entries, (E @ XA_I).entries))).is_unit


def test_isr1_implies_clean_mod_12_sample():
    for A in [(2, 0, 0, 0), (3, 0, 0, 0), (2, 1, 0, 0), (6, 0, 0, 6), (4, 2, 2, 1)]:
        M = ModMat(12, A)
        if is_left_isr1_def(M):
            assert is_clean(M)


@pytest.mark.parametrize("A,X,Y,value", [
    ((0, 0, 0, 0), (0, 0, 0, 0), (0, 0, 0, 0), 0),
    ((1, 0, 0, 1), (0, 0, 0, 0), (0, 0, 0, 0), 1),
    ((1, 0, 0, 1), (0, 0, 0, 0), (1, 0, 0, 1), 0),
])
def test_thm1_expression_examples(A, X, Y, value):
    assert thm1_expression(ModMat(5, A), ModMat(5, X), ModMat(5, Y)) == value


matrix5 = st.tuples(*[st.integers(0, 4)] * 4)


@given(matrix5, matrix5, matrix5)
def test_thm1_middle_term_is_squared(A, X, Y):
    # det(s A) = s^2 det A for 2x2 matrices, so the literal and expanded forms coincide
    n = 5
    s = (X[0] * Y[0] + X[1] * Y[2] + X[2] * Y[1] + X[3] * Y[3] + 1) % n
    detA = (A[0] * A[3] - A[1] * A[2]) % n
    detY = (Y[0] * Y[3] - Y[1] * Y[2]) % n
    detX = (X[0] * X[3] - X[1] * X[2]) % n
    trXA = (X[0] * A[0] + X[1] * A[2] + X[2] * A[1] + X[3] * A[3]) % n
    adjY = (Y[3], -Y[1], -Y[2], Y[0])
    trAadjY = (A[0] * adjY[0] + A[1] * adjY[2] + A[2] * adjY[1] + A[3] * adjY[3]) % n
    expected = (detY * (detX * detA - trXA + 1) + s * s * detA - trAadjY) % n
    assert thm1_expression(ModMat(n, A), ModMat(n, X), ModMat(n, Y)) == expected


@pytest.mark.parametrize("n", [2, 3])
def test_thm1_predicates_agree_with_definitions(n):
    for A in tuples(n):
        M = ModMat(n, A)
        assert bool(thm1_isr1_predicate(M)) == bool(is_left_isr1_def(M))
        assert bool(thm1_sr1_predicate(M)) == bool(is_sr1_def(M))


def test_classify_fields():
    c = classify(ModMat.of(3, 1, 0, 0, 0), conventions=(C1, C2))
    d = c.to_dict()
    assert d["idempotent"] and d["clean"] and d["strongly_clean"] and not d["unit"]
    assert d["left_isr1"]["c1"]["holds"] and d["right_isr1"]["c2"]["holds"]
    assert classify(ModMat.of(12, 2, 0, 0, 0)).sr1 is None


@pytest.mark.parametrize("n", [2, 3])
def test_full_report_claims(n):
    rep = oracle_report(n)
    assert rep.mode == "full"
    assert all(rep.claims.values()), rep.claims
    assert rep.violations == []
    assert rep.counts["matrices"] == n ** 4
    assert rep.counts["idempotents"] == {2: 8, 3: 14}[n]


def test_report_is_deterministic():
    first = oracle_report(2).to_json(include_elements=True)
    assert first == oracle_report(2).to_json(include_elements=True)
    assert json.loads(first)["n"] == 2


def test_targeted_report():
    rep = oracle_report(12, conventions=(C1,), matrices=[ModMat.of(12, 2, 0, 0, 0)])
    assert rep.mode == "targeted"
    d = rep.to_dict()
    assert d["elements"][0]["left_isr1"]["c1"]["holds"] is True
    assert d["elements"][0]["sr1"] is None


def test_modulus_limits():
    with pytest.raises(ModulusTooLarge):
        oracle_report(5)
    with pytest.raises(ModulusTooLarge):
        is_left_isr1_def(ModMat.of(13, 1, 0, 0, 0))
    with pytest.raises(ModulusTooLarge):
        is_sr1_def(ModMat.of(7, 1, 0, 0, 0))
    with pytest.raises(ValueError):
        is_left_isr1_def(ModMat.of(3, 1, 0, 0, 0), convention="c3")
