from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lpptour.recurrence import expected_weight, pgf
from lpptour.series import (
    TruncatedSeries,
    compositions,
    g_by_compositions,
    g_by_triangular_sum,
    h_by_compositions,
    one,
    reciprocal,
    series_A,
    series_B,
    series_G,
    series_H,
    series_Z,
)

HALF = Fraction(1, 2)
QS = [Fraction(1, 2), Fraction(1, 3), Fraction(9, 10)]


def test_series_A_B_examples():
    assert series_A(HALF, 3).coeffs == (1, 1, Fraction(1, 2), Fraction(1, 8))
    assert series_B(HALF, 2).coeffs == (1, Fraction(1, 2), Fraction(1, 8))
    assert series_B(0, 2).coeffs == (1, 0, 0)


@pytest.mark.parametrize("q", QS)
def test_shift_identity(q):
    A, B = series_A(q, 128), series_B(q, 128)
    assert (one(128) + B.shift()).truncate(128) == A


def test_reciprocal_examples():
    # h_1 = -q, h_2 = q**2 - q**3
    assert reciprocal(series_B(HALF, 2)).coeffs == (1, Fraction(-1, 2), Fraction(1, 8))
    assert reciprocal(TruncatedSeries.of([1])).coeffs == (1,)
    assert reciprocal(series_B(Fraction(2, 3), 1)).coeffs == (1, Fraction(-2, 3))


def test_reciprocal_rejects_zero_constant():
    with pytest.raises(ZeroDivisionError):
        reciprocal(TruncatedSeries.of([0, 1]))


series_st = st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=20), min_size=1, max_size=12).filter(
    lambda cs: cs[0] != 0
)


@settings(max_examples=60)
@given(series_st)
def test_reciprocal_is_involution_and_inverse(cs):
    s = TruncatedSeries.of(cs)
    r = reciprocal(s)
    assert reciprocal(r) == s
    assert s * r == one(s.order)


def test_series_order_follows_shorter_operand():
    a, b = series_A(HALF, 5), series_B(HALF, 3)
    assert (a * b).order == 3 and (a + b).order == 3 and (a - b).order == 3


def test_series_G_examples():
    G = series_G(HALF, 6)
    assert G[3] == Fraction(17, 8)
    assert G[1] == 1
    assert G[6] == 1 + Fraction(96735, 32768)
    assert series_G(Fraction(1, 3), 4)[1] == 1


@pytest.mark.parametrize("q", [Fraction(1, 2), Fraction(2, 3), Fraction(1, 4)])
def test_series_G_matches_recurrence(q):
    G = series_G(q, 20)
    assert G[0] == 1
    for n in range(1, 21):
        assert G[n] == 1 + expected_weight(n, 1 - q)


def test_series_Z_examples():
    Z = series_Z(HALF, 3)
    assert Z[0].coeffs == (1,)
    assert Z[1].coeffs == (1,)
    assert Z[2].coeffs == (Fraction(1, 2), Fraction(1, 2))
    assert Z[3].coeffs == (Fraction(1, 8), Fraction(5, 8), Fraction(1, 4))


@pytest.mark.parametrize("q", [Fraction(1, 2), Fraction(2, 3)])
def test_series_Z_matches_pgf(q):
    Z = series_Z(q, 15)
    for n in range(1, 16):
        assert Z[n] == pgf(n, 1 - q)
        assert Z[n](Fraction(1)) == 1
        assert all(c >= 0 for c in Z[n].coeffs)


def test_compositions_enumeration():
    assert list(compositions(0)) == [()]
    assert sorted(compositions(3)) == [(1, 1, 1), (1, 2), (2, 1), (3,)]
    for n in range(1, 13):
        cs = list(compositions(n))
        assert len(cs) == 2 ** (n - 1) == len(set(cs))
        assert all(sum(a) == n and min(a) >= 1 for a in cs)


def test_h_by_compositions_examples():
    q = Fraction(2, 5)
    assert h_by_compositions(2, q) == q**2 - q**3
    assert h_by_compositions(0, q) == 1
    assert h_by_compositions(1, HALF) == Fraction(-1, 2)


@pytest.mark.parametrize("q", [Fraction(1, 2), Fraction(1, 3), Fraction(4, 5)])
def test_h_by_compositions_matches_reciprocal(q):
    H = series_H(q, 16)
    for n in range(17):
        assert h_by_compositions(n, q) == H[n]


def test_g_by_compositions_examples():
    assert g_by_compositions(3, HALF) == Fraction(17, 8)
    assert g_by_compositions(1, Fraction(1, 3)) == 1
    assert g_by_compositions(5, HALF) == 1 + Fraction(2399, 1024)
    assert g_by_compositions(0, HALF) == 1


@pytest.mark.parametrize("q", [Fraction(1, 2), Fraction(1, 3)])
def test_triangular_sum_agrees(q):
    for n in range(13):
        assert g_by_triangular_sum(n, q) == g_by_compositions(n, q)


def test_composition_limit_is_enforced():
    with pytest.raises(ValueError):
        h_by_compositions(25, HALF)
    with pytest.raises(ValueError):
        g_by_compositions(8, HALF, limit=5)


def test_series_json_round_trip():
    s = series_G(Fraction(1, 3), 6)
    assert TruncatedSeries.from_json(s.to_json()) == s
    with pytest.raises(ValueError):
        TruncatedSeries.from_json('{"order": 3, "coeffs": ["1"]}')
