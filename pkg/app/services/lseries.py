"""
L-series of the twists C(N, p)
Coefficient tables, functional-equation sign, numerical L(1) and L'(1), and
the analytic-rank classifier
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.special import exp1

from app.config import settings
from app.services.ap_cache import ApCache, get_ap_cache
from app.services.arith import (
    kronecker,
    p_star,
    primes_in_range,
    require_shih_hypothesis,
)


logger = logging.getLogger(__name__)

LEVELS = (11, 19)

# l_values truncation error, by tail_bound
TAIL_TOLERANCE = 1e-8


class InsufficientCoefficientsError(ValueError):
    """Coefficient table shorter than the truncation rule requires"""


class RankEstimate(str, Enum):
    ZERO = "0"
    ONE = "1"
    APPARENT_EVEN = "apparent-even-≥2"
    APPARENT_ODD = "apparent-odd-≥3"


@dataclass(frozen=True, eq=False)
class LSeriesProfile:
    """
    Conductor, sign and a_1..a_nmax of an L-series

    `coefficients[n - 1]` is a_n. p is None for the untwisted base curve.
    """

    N: int
    p: int | None
    conductor: int
    sign: int
    coefficients: np.ndarray

    @property
    def nmax(self) -> int:
        return len(self.coefficients)

    def a(self, n: int) -> int:
        return int(self.coefficients[n - 1])


@dataclass(frozen=True)
class RankVerdict:
    N: int
    p: int
    sign: int
    estimate: RankEstimate
    l_value: float
    l_prime_value: float
    nmax_used: int
    tau: float

    @property
    def parity(self) -> str:
        return "even" if self.sign == 1 else "odd"


def _check_level(N: int) -> None:
    if N not in LEVELS:
        raise ValueError(f"Level must be 11 or 19, got {N}")


def sign(N: int, p: int) -> int:
    """Root number of C(N, p): chi_{p*}(-N) = (-N/p)"""
    _check_level(N)
    if N % p == 0:
        raise ValueError(f"Twisting prime {p} divides the level {N}")
    return kronecker(-N, p)


def tail_bound(conductor: int, nmax: int) -> float:
    """Geometric bound on sum_{n > nmax} exp(-2 pi n / sqrt(Q)) (taking |a_n| <= n)"""
    q = math.exp(-2 * math.pi / math.sqrt(conductor))
    return q ** (nmax + 1) / (1 - q)


def truncation_length(conductor: int, digits: int | None = None) -> int:
    """
    nmax = ceil(sqrt(Q)/(2 pi) * ln(10^digits)), raised until
    tail_bound(Q, nmax) < TAIL_TOLERANCE
    """
    digits = settings.truncation_digits if digits is None else digits
    nmax = math.ceil(math.sqrt(conductor) / (2 * math.pi) * digits * math.log(10))

    q = math.exp(-2 * math.pi / math.sqrt(conductor))
    nmax = max(nmax, math.ceil(math.log(TAIL_TOLERANCE * (1 - q)) / math.log(q)) - 1)
    while tail_bound(conductor, nmax) >= TAIL_TOLERANCE:
        nmax += 1
    return nmax


def _smallest_prime_factors(limit: int) -> np.ndarray:
    spf = np.arange(limit + 1, dtype=np.int64)
    for i in range(2, math.isqrt(limit) + 1):
        if spf[i] == i:
            block = spf[i * i::i]
            mask = block == np.arange(i * i, limit + 1, i)
            block[mask] = i
    return spf


def _extend_multiplicatively(prime_coefficients: dict[int, int], bad_primes: set[int], nmax: int) -> np.ndarray:
    """
    a_n for n <= nmax from the a_ell, by the Euler-product recursions

    a_mn = a_m a_n for coprime m, n; a_{l^k} = a_l a_{l^(k-1)} - l a_{l^(k-2)}
    at good l and a_{l^k} = a_l^k at bad l.
    """
    spf = _smallest_prime_factors(nmax).tolist()
    a = [0] * (nmax + 1)
    a[1] = 1
    for n in range(2, nmax + 1):
        ell = spf[n]
        m = n // ell
        if m % ell or ell in bad_primes:
            a[n] = prime_coefficients[ell] * a[m]
        else:
            a[n] = prime_coefficients[ell] * a[m] - ell * a[m // ell]
    return np.array(a[1:], dtype=np.int64)


def coefficients(N: int, p: int, nmax: int, cache: ApCache | None = None) -> list[int]:
    """a_1..a_nmax of C(N, p), by twisting the base coefficients with chi_{p*}"""
    _check_level(N)
    require_shih_hypothesis(N, p)
    return [int(a) for a in _twisted_coefficients(N, p, nmax, cache)]


def _twisted_coefficients(N: int, p: int, nmax: int, cache: ApCache | None) -> np.ndarray:
    if nmax < 1:
        raise ValueError(f"nmax must be positive, got {nmax}")
    cache = cache or get_ap_cache()
    base = cache.table(N, nmax)
    d = p_star(p)
    twisted = {ell: kronecker(d, ell) * a_ell for ell, a_ell in base.items()}
    twisted[p] = 0
    return _extend_multiplicatively(twisted, {N, p}, nmax)


def build_profile(N: int, p: int, nmax: int | None = None, cache: ApCache | None = None) -> LSeriesProfile:
    """LSeriesProfile of C(N, p) with conductor N p^2 and sign (-N/p)"""
    _check_level(N)
    require_shih_hypothesis(N, p)
    conductor = N * p * p
    nmax = truncation_length(conductor) if nmax is None else nmax
    return LSeriesProfile(
        N=N,
        p=p,
        conductor=conductor,
        sign=sign(N, p),
        coefficients=_twisted_coefficients(N, p, nmax, cache),
    )


def build_base_profile(N: int, nmax: int | None = None, cache: ApCache | None = None) -> LSeriesProfile:
    """LSeriesProfile of X_0(N) itself (conductor N, sign +1)"""
    _check_level(N)
    nmax = truncation_length(N) if nmax is None else nmax
    cache = cache or get_ap_cache()
    base = cache.table(N, nmax)
    return LSeriesProfile(N=N, p=None, conductor=N, sign=1,
                          coefficients=_extend_multiplicatively(base, {N}, nmax))


def exp_integral_E1(x: float) -> float:
    """E1(x) = integral_x^inf e^-t / t dt, via scipy.special.exp1"""
    if x <= 0:
        raise ValueError(f"E1 is evaluated at positive arguments only, got {x}")
    return float(exp1(x))


def _weighted_terms(profile: LSeriesProfile, nmax: int) -> tuple[np.ndarray, np.ndarray]:
    n = np.arange(1, nmax + 1, dtype=np.float64)
    return n, profile.coefficients[:nmax].astype(np.float64) / n


def l_values(profile: LSeriesProfile) -> tuple[float, float]:
    """
    (L(1), L'(1)) from the rapidly convergent series

        L(1)  = (1 + eps) sum a_n/n exp(-2 pi n / sqrt(Q))
        L'(1) = (1 - eps) sum a_n/n E1(2 pi n / sqrt(Q))

    so the value the functional equation forces to vanish is returned as 0.
    """
    needed = truncation_length(profile.conductor)
    if profile.nmax < needed:
        raise InsufficientCoefficientsError(
            f"Need {needed} coefficients for conductor {profile.conductor}, have {profile.nmax}"
        )
    n, weights = _weighted_terms(profile, profile.nmax)
    t = 2 * math.pi * n / math.sqrt(profile.conductor)
    l1 = (1 + profile.sign) * float(np.sum(weights * np.exp(-t)))
    l1_prime = (1 - profile.sign) * float(np.sum(weights * exp1(t)))
    return l1, l1_prime


def functional_equation_defect(profile: LSeriesProfile, A: float = 1.2) -> float:
    """
    |L(1) computed with cutoff A - L(1) from l_values|

    L(1) = sum a_n/n (exp(-2 pi n/(A sqrt Q)) + eps exp(-2 pi n A/sqrt Q)) for
    every A > 0; a wrong sign or coefficient breaks the A-independence.
    """
    if A <= 0:
        raise ValueError(f"Cutoff A must be positive, got {A}")
    needed = math.ceil(max(A, 1 / A) * truncation_length(profile.conductor))
    if profile.nmax < needed:
        raise InsufficientCoefficientsError(
            f"Cutoff {A} needs {needed} coefficients, have {profile.nmax}"
        )
    n, weights = _weighted_terms(profile, needed)
    root = math.sqrt(profile.conductor)
    shifted = float(np.sum(weights * (np.exp(-2 * math.pi * n / (A * root))
                                      + profile.sign * np.exp(-2 * math.pi * n * A / root))))
    l1, _ = l_values(profile)
    return abs(shifted - l1)


def classify_values(sign_value: int, l1: float, l1_prime: float, tau: float) -> RankEstimate:
    if sign_value == -1:
        return RankEstimate.ONE if abs(l1_prime) > tau else RankEstimate.APPARENT_ODD
    return RankEstimate.ZERO if abs(l1) > tau else RankEstimate.APPARENT_EVEN


def analytic_rank(N: int, p: int, tau: float | None = None, cache: ApCache | None = None) -> RankVerdict:
    """
    Analytic-rank verdict for C(N, p)

    Numerical vanishing only suggests rank >= 2 (or >= 3); the raw values are
    always part of the verdict.
    """
    tau = settings.rank_tau if tau is None else tau
    profile = build_profile(N, p, cache=cache)
    l1, l1_prime = l_values(profile)
    estimate = classify_values(profile.sign, l1, l1_prime, tau)
    logger.debug(f"[LSeries] C({N},{p}): sign {profile.sign:+d}, L1 {l1:.6g}, L1' {l1_prime:.6g} -> {estimate.value}")
    return RankVerdict(
        N=N,
        p=p,
        sign=profile.sign,
        estimate=estimate,
        l_value=l1,
        l_prime_value=l1_prime,
        nmax_used=profile.nmax,
        tau=tau,
    )


def apparent_rank_two_primes(N: int, bound: int, tau: float | None = None,
                             cache: ApCache | None = None) -> list[int]:
    """Primes p <= bound, p = 3 (mod 4), (N/p) = -1, where C(N, p) looks like rank >= 2"""
    _check_level(N)
    found = []
    for p in primes_in_range(3, bound):
        if p % 4 != 3 or p == N or kronecker(N, p) != -1:
            continue
        if analytic_rank(N, p, tau=tau, cache=cache).estimate is RankEstimate.APPARENT_EVEN:
            found.append(p)
    return found
