"""
Deficient places of C(N, p)
A place is deficient when C(N, p) has no points over the completion there.
Statuses combine real points, good reduction plus the Weil bound, the
quaternion obstruction <c_N, p*>, the criterion at ell = N for prime N, and
rational w_N-fixed points.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from math import gcd

from sympy import divisors, primefactors, totient

from app.services.arith import (
    Place,
    class_number,
    field_discriminant,
    hilbert_places,
    hilbert_symbol,
    is_prime,
    is_squarefree,
    kronecker,
    p_star,
    primes_in_range,
    require_shih_hypothesis,
)


logger = logging.getLogger(__name__)


class DeficiencyConflictError(RuntimeError):
    """Two classification rules disagree at a place"""


class Status(str, Enum):
    DEFICIENT = "Deficient"
    NOT_DEFICIENT = "NotDeficient"
    UNKNOWN = "Unknown"


# provenance tags
REAL_POINTS = "real-points"
GOOD_REDUCTION = "good-reduction"
WEIL_BOUND = "weil-bound"
WEIL_UNDECIDED = "weil-bound-undecided"
OBSTRUCTION = "quaternion-obstruction"
OBSTRUCTION_TRIVIAL = "quaternion-obstruction-trivial"
ATKIN_LEHNER_PRIME = "atkin-lehner-prime"
GLOBAL_POINT = "rational-fixed-point"
OPEN = "open"

# <c_N, p*> is the complete obstruction for these genus-zero levels
SHIH_CONSTANTS = {2: 1, 3: 1, 5: 125, 6: 18, 7: 49, 10: 5, 13: 13}


# ============================================================================
# Modular-curve facts
# ============================================================================

def genus_x0(N: int) -> int:
    """
    Genus of X_0(N): 1 + mu/12 - nu2/4 - nu3/3 - nu_inf/2

    nu2 uses (-4/ell), which is (-1/ell) at odd ell and 0 at ell = 2.
    """
    if N < 1:
        raise ValueError(f"Level must be positive, got {N}")
    primes = primefactors(N)

    mu = Fraction(N)
    for ell in primes:
        mu *= Fraction(ell + 1, ell)

    nu2 = 0
    if N % 4:
        nu2 = 1
        for ell in primes:
            nu2 *= 1 + kronecker(-4, ell)

    nu3 = 0
    if N % 9:
        nu3 = 1
        for ell in primes:
            nu3 *= 1 + kronecker(-3, ell)

    nu_inf = sum(int(totient(gcd(d, N // d))) for d in divisors(N))

    g = 1 + mu / 12 - Fraction(nu2, 4) - Fraction(nu3, 3) - Fraction(nu_inf, 2)
    if g.denominator != 1:
        raise ArithmeticError(f"Non-integral genus {g} for N = {N}")
    return int(g)


def rational_fixed_point_exists(N: int) -> bool:
    """w_N has a Q-rational fixed point iff Q(sqrt(-N)) has class number 1"""
    if N <= 3 or not is_squarefree(N):
        raise ValueError(f"Expected a squarefree level N > 3, got {N}")
    return class_number(field_discriminant(-N)) == 1


def shih_constant(N: int) -> int:
    if N not in SHIH_CONSTANTS:
        raise ValueError(f"No genus-zero obstruction constant for N = {N}")
    return SHIH_CONSTANTS[N]


def gonzalez_constant(N: int) -> int:
    """c_N = N^(12 / gcd(12, N - 1)) for prime N"""
    if not is_prime(N):
        raise ValueError(f"The eta-quotient constant is defined for prime N, got {N}")
    return N ** (12 // gcd(12, N - 1))


def obstruction_constant(N: int) -> int:
    """Shih's table for genus-zero N, otherwise the prime-level formula"""
    if N in SHIH_CONSTANTS:
        return SHIH_CONSTANTS[N]
    if is_prime(N):
        return gonzalez_constant(N)
    raise ValueError(f"No obstruction constant for composite N = {N} of positive genus")


def deficient_at_atkin_prime(N: int) -> bool:
    """C(N, p)(Q_N) is empty iff N = 1 (mod 4)"""
    if not is_prime(N):
        raise ValueError(f"Criterion at ell = N needs a prime level, got {N}")
    return N % 4 == 1


def weil_bound_holds(ell: int, g: int) -> bool:
    """ell + 1 - 2 g sqrt(ell) > 0, compared exactly"""
    return (ell + 1) ** 2 > 4 * g * g * ell


# ============================================================================
# Classification
# ============================================================================

@dataclass(frozen=True)
class DeficiencyReport:
    """
    Status and provenance for every place dividing 2 N p infinity, plus any
    good-reduction prime where the Weil bound fails

    Other places have good reduction with a point and are NotDeficient.
    """

    N: int
    p: int
    genus: int
    obstruction: int | None
    statuses: dict[Place, Status] = field(default_factory=dict)
    provenance: dict[Place, str] = field(default_factory=dict)

    def status(self, place: Place) -> Status:
        return self.statuses.get(place, Status.NOT_DEFICIENT)

    def note(self, place: Place) -> str:
        return self.provenance.get(place, GOOD_REDUCTION if self.genus <= 1 else WEIL_BOUND)

    def deficient_places(self) -> list[Place]:
        return sorted((v for v, s in self.statuses.items() if s is Status.DEFICIENT), key=Place.sort_key)

    def places(self) -> list[Place]:
        return sorted(self.statuses, key=Place.sort_key)


class _Ledger:
    """Per-place verdicts; a second verdict must agree with the first"""

    def __init__(self, N: int, p: int):
        self.N = N
        self.p = p
        self.statuses: dict[Place, Status] = {}
        self.provenance: dict[Place, str] = {}

    def decide(self, place: Place, status: Status, tag: str) -> None:
        current = self.statuses.get(place)
        if current in (None, Status.UNKNOWN):
            self.statuses[place] = status
            self.provenance[place] = tag
            return
        if status is not Status.UNKNOWN and status is not current:
            raise DeficiencyConflictError(
                f"C({self.N},{self.p}) at {place}: {self.provenance[place]} says {current.value},"
                f" {tag} says {status.value}"
            )


def _reported_places(N: int, p: int, g: int) -> list[Place]:
    primes = {2, p, *primefactors(N)}
    if g >= 2:
        primes.update(ell for ell in primes_in_range(2, 4 * g * g + 2)
                      if N % ell and ell != p and not weil_bound_holds(ell, g))
    return [Place.at(ell) for ell in sorted(primes)] + [Place.infinity()]


def classify(N: int, p: int) -> DeficiencyReport:
    """
    DeficiencyReport for C(N, p), N squarefree and (N/p) = -1

    Rules, each checked against the verdicts already recorded:
    the real place always has points; ell not dividing Np has good reduction
    (a point for genus <= 1, or when ell + 1 > 2 g sqrt(ell)); ell with
    <c_N, p*>_ell = -1 is deficient; ell = N prime is deficient iff N = 1 (mod 4);
    for genus-zero N the obstruction is complete; a rational w_N-fixed point
    makes every place NotDeficient. Anything left is Unknown.
    """
    if N < 1 or not is_squarefree(N):
        raise ValueError(f"Expected a squarefree level, got {N}")
    require_shih_hypothesis(N, p)

    g = genus_x0(N)
    genus_zero = N in SHIH_CONSTANTS
    try:
        c_N = obstruction_constant(N)
    except ValueError:
        c_N = None
    d = p_star(p)

    if c_N is not None:
        obstructed = {v for v in hilbert_places(c_N, d) if hilbert_symbol(c_N, d, v) == -1}
        if len(obstructed) % 2:
            raise DeficiencyConflictError(f"<{c_N}, {d}> is -1 at an odd number of places: {obstructed}")
    else:
        obstructed = set()

    ledger = _Ledger(N, p)
    places = _reported_places(N, p, g)

    for v in places:
        ell = v.prime
        if v.is_infinite:
            ledger.decide(v, Status.NOT_DEFICIENT, REAL_POINTS)
        elif N % ell and ell != p:
            if g <= 1:
                ledger.decide(v, Status.NOT_DEFICIENT, GOOD_REDUCTION)
            elif weil_bound_holds(ell, g):
                ledger.decide(v, Status.NOT_DEFICIENT, WEIL_BOUND)
            else:
                ledger.decide(v, Status.UNKNOWN, WEIL_UNDECIDED)

        if v in obstructed:
            ledger.decide(v, Status.DEFICIENT, OBSTRUCTION)

        if ell is not None and ell == N:
            status = Status.DEFICIENT if deficient_at_atkin_prime(N) else Status.NOT_DEFICIENT
            ledger.decide(v, status, ATKIN_LEHNER_PRIME)

        if genus_zero:
            if v not in obstructed:
                ledger.decide(v, Status.NOT_DEFICIENT, OBSTRUCTION_TRIVIAL)
        else:
            ledger.decide(v, Status.UNKNOWN, OPEN)

    if N > 3 and rational_fixed_point_exists(N):
        for v in places:
            ledger.decide(v, Status.NOT_DEFICIENT, GLOBAL_POINT)

    report = DeficiencyReport(
        N=N,
        p=p,
        genus=g,
        obstruction=c_N,
        statuses=ledger.statuses,
        provenance=ledger.provenance,
    )
    logger.debug(f"[Deficiency] C({N},{p}): deficient at {[str(v) for v in report.deficient_places()]}")
    return report
