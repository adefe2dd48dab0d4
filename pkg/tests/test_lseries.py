import math
from dataclasses import replace
from math import gcd

import mpmath
import pytest

from app.services.arith import kronecker, p_star, primes_in_range
from app.services.elliptic import ap, c_curve
from app.services.lseries import (
    TAIL_TOLERANCE,
    InsufficientCoefficientsError,
    RankEstimate,
    analytic_rank,
    apparent_rank_two_primes,
    build_base_profile,
    build_profile,
    classify_values,
    coefficients,
    exp_integral_E1,
    functional_equation_defect,
    l_values,
    sign,
    tail_bound,
    truncation_length,
)

DISPLAY_PRIMES = [4079, 5591, 6719, 10391, 19319, 24359, 26759]


def valid_pairs(count: int, residue: int | None = None) -> list[tuple[int, int]]:
    pairs = []
    for p in primes_in_range(3, 2000):
        for N in (11, 19):
            if p != N and kronecker(N, p) == -1 and (residue is None or p % 4 == residue):
                pairs.append((N, p))
    return pairs[:count]


def test_sign_examples():
    assert sign(11, 47) == 1
    assert sign(11, 1009) == -1
    assert sign(11, 4079) == 1
    assert sign(19, 5591) == 1


def test_parity_identity():
    for p in primes_in_range(3, 10 ** 5):
        for N in (11, 19):
            if p != N and kronecker(N, p) == -1:
                assert sign(N, p) == (-1 if p % 4 == 1 else 1)


def test_sign_rejects():
    with pytest.raises(ValueError):
        sign(17, 5)
    with pytest.raises(ValueError):
        sign(11, 11)


def test_truncation_length():
    assert truncation_length(11 * 47 ** 2, 10) == math.ceil(math.sqrt(11 * 47 ** 2) / (2 * math.pi) * 10 * math.log(10))
    assert truncation_length(10 ** 6, 20) > truncation_length(10 ** 6, 10)
    assert tail_bound(24299, truncation_length(24299)) < tail_bound(24299, 10)


@pytest.mark.parametrize("N, p", [(11, 1009), (11, 4079), *((19, p) for p in DISPLAY_PRIMES)])
def test_truncation_meets_tail_tolerance(N, p):
    Q = N * p * p
    nmax = truncation_length(Q)
    assert tail_bound(Q, nmax) < TAIL_TOLERANCE
    assert tail_bound(Q, nmax - 1) >= TAIL_TOLERANCE
    digit_rule = math.ceil(math.sqrt(Q) / (2 * math.pi) * 10 * math.log(10))
    assert nmax >= digit_rule


def test_l_values_refuse_tables_short_of_the_tail_bound():
    Q = 11 * 1009 ** 2
    digit_rule = math.ceil(math.sqrt(Q) / (2 * math.pi) * 10 * math.log(10))
    assert tail_bound(Q, digit_rule) >= TAIL_TOLERANCE
    with pytest.raises(InsufficientCoefficientsError):
        l_values(build_profile(11, 1009, nmax=digit_rule))


def test_base_coefficients_of_x0_11():
    profile = build_base_profile(11, nmax=12)
    assert [profile.a(n) for n in range(1, 13)] == [1, -2, -1, 2, 1, 2, -2, 0, -2, -2, 1, -2]
    assert profile.sign == 1
    assert profile.conductor == 11


def test_twisted_coefficients_match_point_counts():
    for N, p in [(11, 47), (19, 5591), (11, 13)]:
        C = c_curve(N, p)
        a = coefficients(N, p, 200)
        for ell in primes_in_range(5, 200):
            if ell in (N, p):
                continue
            assert a[ell - 1] == ap(C, ell), (N, p, ell)
        if p <= 200:
            assert a[p - 1] == 0


def test_twisted_coefficients_are_character_twists():
    base = build_base_profile(19, nmax=300)
    a = coefficients(19, 47, 300)
    d = p_star(47)
    for n in range(1, 301):
        assert a[n - 1] == kronecker(d, n) * base.a(n)


def test_coefficient_multiplicativity():
    N, p = 11, 47
    a = [None] + coefficients(N, p, 2000)
    for m in range(1, 45):
        for n in range(1, 45):
            if gcd(m, n) == 1:
                assert a[m * n] == a[m] * a[n]
    for ell in primes_in_range(2, 40):
        if ell in (N, p):
            continue
        for k in range(2, 5):
            if ell ** k <= 2000:
                assert a[ell ** k] == a[ell] * a[ell ** (k - 1)] - ell * a[ell ** (k - 2)]


@pytest.mark.parametrize("x", [1e-3, 0.1, 0.5, 1.0, 2.5, 10.0, 40.0])
def test_exp_integral_matches_mpmath(x):
    assert exp_integral_E1(x) == pytest.approx(float(mpmath.e1(x)), rel=1e-12)


def test_exp_integral_rejects_nonpositive():
    with pytest.raises(ValueError):
        exp_integral_E1(0.0)


def test_classify_values():
    assert classify_values(1, 0.5, 0.0, 1e-4) is RankEstimate.ZERO
    assert classify_values(1, 1e-9, 0.0, 1e-4) is RankEstimate.APPARENT_EVEN
    assert classify_values(-1, 0.0, 0.3, 1e-4) is RankEstimate.ONE
    assert classify_values(-1, 0.0, 1e-9, 1e-4) is RankEstimate.APPARENT_ODD


def test_rank_two_twist_c11_47():
    verdict = analytic_rank(11, 47)
    assert verdict.sign == 1
    assert verdict.estimate is RankEstimate.APPARENT_EVEN
    assert abs(verdict.l_value) < 1e-6
    assert verdict.l_prime_value == 0


def test_rank_one_twist_c11_1009():
    verdict = analytic_rank(11, 1009)
    assert verdict.sign == -1
    assert verdict.estimate is RankEstimate.ONE
    assert abs(verdict.l_prime_value) > 1e-3
    assert verdict.l_value == 0
    assert verdict.parity == "odd"


def test_l_values_require_enough_coefficients():
    profile = build_profile(11, 47, nmax=50)
    with pytest.raises(InsufficientCoefficientsError):
        l_values(profile)


def test_truncation_doubling_is_stable():
    for N, p in valid_pairs(20):
        short = build_profile(N, p)
        long = build_profile(N, p, nmax=2 * short.nmax)
        for x, y in zip(l_values(short), l_values(long)):
            assert x == pytest.approx(y, abs=1e-8)


def test_functional_equation_defect_vanishes_for_true_sign():
    for N, p in [(11, 13), (11, 47), (19, 29)]:
        profile = build_profile(N, p, nmax=2 * truncation_length(N * p * p))
        assert functional_equation_defect(profile) < 1e-6
        assert functional_equation_defect(profile, A=0.8) < 1e-6
        assert functional_equation_defect(profile, A=2.0) < 1e-6


def test_functional_equation_defect_detects_wrong_sign():
    for N, p in [(11, 13), (19, 29)]:
        profile = build_profile(N, p, nmax=2 * truncation_length(N * p * p))
        flipped = replace(profile, sign=-profile.sign)
        assert functional_equation_defect(flipped, A=2.0) > 1e-3


def test_functional_equation_defect_rejects():
    profile = build_profile(11, 47)
    with pytest.raises(ValueError):
        functional_equation_defect(profile, A=0)
    with pytest.raises(InsufficientCoefficientsError):
        functional_equation_defect(profile, A=1.5)


def test_apparent_rank_two_below_1000():
    found = apparent_rank_two_primes(11, 1000)
    assert {47, 103, 599, 683} <= set(found)
    assert all(p % 4 == 3 and kronecker(11, p) == -1 for p in found)


@pytest.mark.slow
def test_display_primes_have_even_rank_at_least_two():
    for p in DISPLAY_PRIMES:
        verdicts = [analytic_rank(N, p) for N in (11, 19) if kronecker(N, p) == -1]
        assert any(v.estimate is RankEstimate.APPARENT_EVEN and abs(v.l_value) < 1e-4 for v in verdicts), p


@pytest.mark.slow
def test_smallest_stratum_a_primes_have_rank_one():
    from app.services.survey import census_stratum_A

    records = census_stratum_A(3 * 10 ** 5)[:50]
    for record in records:
        for N in record.candidate_levels:
            assert analytic_rank(N, record.p).estimate is RankEstimate.ONE, (N, record.p)
