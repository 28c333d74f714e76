import json
from fractions import Fraction

import numpy as np
import pytest

from lpptour.recurrence import (
    PolyInT,
    WeightDistribution,
    distribution,
    expected_weight,
    moments,
    moments_float,
    pgf,
)
from oracles import law_by_enumeration, mean, second_moment

HALF = Fraction(1, 2)
TABLE_1 = {3: Fraction(9, 8), 4: Fraction(111, 64), 5: Fraction(2399, 1024), 6: Fraction(96735, 32768), 7: Fraction(7468479, 2097152)}
PS = [Fraction(1, 2), Fraction(1, 3), Fraction(3, 4)]


@pytest.mark.parametrize("n, value", sorted(TABLE_1.items()))
def test_expected_weight_table(n, value):
    assert expected_weight(n, HALF) == value


@pytest.mark.parametrize("p", PS + [Fraction(0), Fraction(1)])
def test_expected_weight_boundary(p):
    assert expected_weight(0, p) == 0
    assert expected_weight(1, p) == 0
    assert expected_weight(2, p) == p


def test_expected_weight_degenerate_p():
    assert [expected_weight(n, 1) for n in range(1, 8)] == list(range(7))
    assert expected_weight(9, 0) == 0


def test_expected_weight_n8_has_power_of_two_denominator():
    f8 = expected_weight(8, HALF)
    assert f8 == Fraction(1119481727, 268435456)
    assert f8.denominator == 2**28 != 26843456


def test_pgf_small_cases():
    assert pgf(1, HALF) == PolyInT([1])
    assert pgf(2, Fraction(1, 3)) == PolyInT([Fraction(2, 3), Fraction(1, 3)])
    assert pgf(3, HALF) == PolyInT([Fraction(1, 8), Fraction(5, 8), Fraction(1, 4)])


@pytest.mark.parametrize("p", PS)
@pytest.mark.parametrize("n", [3, 4, 5])
def test_distribution_matches_path_enumeration(n, p):
    assert list(distribution(n, p).probs) == law_by_enumeration(n, p)


@pytest.mark.parametrize("p", PS)
def test_pgf_normalized_and_mean(p):
    for n in range(1, 65):
        poly = pgf(n, p)
        assert poly(Fraction(1)) == 1
        assert poly.derivative()(Fraction(1)) == expected_weight(n, p)
        assert poly.degree <= n - 1


@pytest.mark.parametrize("p", PS)
def test_distribution_endpoints(p):
    q = 1 - p
    for n in range(1, 21):
        d = distribution(n, p)
        d.check(p)
        assert d.probs[0] == q ** (n * (n - 1) // 2)
        assert d.probs[-1] == p ** (n - 1)


def test_distribution_examples():
    assert distribution(3, HALF).probs == (Fraction(1, 8), Fraction(5, 8), Fraction(1, 4))
    assert distribution(2, Fraction(1, 3)).probs == (Fraction(2, 3), Fraction(1, 3))
    assert distribution(4, HALF).mean() == Fraction(111, 64)


def test_moments_n3_from_enumeration():
    law = law_by_enumeration(3, HALF)
    tab = moments(3, HALF)
    assert tab.m1[3] == mean(law) == Fraction(9, 8)
    assert tab.m2[3] == second_moment(law) == Fraction(13, 8)
    assert tab.variance(3) == Fraction(23, 64)


@pytest.mark.parametrize("p", PS)
def test_moments_bernoulli_case(p):
    tab = moments(2, p)
    assert tab.m1[2] == p and tab.m2[2] == p and tab.variance(2) == p * (1 - p)


@pytest.mark.parametrize("p", PS)
def test_moment_table_invariants(p):
    tab = moments(64, p)
    assert tab.m1[0] == tab.m1[1] == 0
    for n in range(64):
        assert 0 <= tab.m1[n + 1] - tab.m1[n] <= 1
    for n in range(65):
        assert tab.variance(n) >= 0
    for n in range(1, 9):
        assert tab.m2[n] == distribution(n, p).second_moment()


@pytest.mark.parametrize("p", PS + [Fraction(1, 10)])
def test_moments_float_matches_exact(p):
    tab = moments(64, p)
    m1, m2 = moments_float(64, p)
    for n in range(2, 65):
        assert m1[n] == pytest.approx(float(tab.m1[n]), rel=1e-10)
        assert m2[n] == pytest.approx(float(tab.m2[n]), rel=1e-10)


def test_moments_float_examples():
    m1, m2 = moments_float(7, HALF)
    assert m1[7] == pytest.approx(7468479 / 2097152, rel=1e-14)
    m1, m2 = moments_float(1, HALF)
    assert m1[1] == 0 and m2[1] == 0


def test_moments_float_large_n_near_beta():
    m1, _ = moments_float(400, HALF)
    assert abs(m1[400] / 399 - 0.60914971106) < 0.01
    assert np.all(np.diff(m1) >= 0) and np.all(np.diff(m1) <= 1)


def test_domain_errors():
    with pytest.raises(ValueError):
        expected_weight(3, Fraction(3, 2))
    with pytest.raises(TypeError):
        expected_weight(3, 0.5)
    with pytest.raises(ValueError):
        pgf(0, HALF)
    with pytest.raises(ValueError):
        moments(0, HALF)


def test_weight_distribution_json_round_trip():
    d = distribution(6, Fraction(1, 3))
    back = WeightDistribution.from_dict(json.loads(json.dumps(d.to_dict())))
    assert back == d
    back.check(Fraction(1, 3))


def test_weight_distribution_check_rejects_bad_vectors():
    with pytest.raises(ValueError):
        WeightDistribution(2, (Fraction(1, 2), Fraction(1, 3))).check()
    with pytest.raises(ValueError):
        WeightDistribution(2, (Fraction(3, 2), Fraction(-1, 2))).check()
    with pytest.raises(ValueError):
        WeightDistribution(2, (Fraction(1, 2), Fraction(1, 2))).check(Fraction(1, 3))


def test_polyint_arithmetic():
    a = PolyInT([1, 2])
    b = PolyInT([0, 1])
    assert a * b == PolyInT([0, 1, 2])
    assert a + b == PolyInT([1, 3])
    assert a.shift(2) == PolyInT([0, 0, 1, 2])
    assert (a * b)(Fraction(2)) == 10
    assert PolyInT([1, 0, 0]).degree == 0
