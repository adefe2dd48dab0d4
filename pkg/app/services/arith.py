"""
Exact integer arithmetic primitives
Primality, quadratic symbols, modular square roots, Hilbert symbols and
class numbers of imaginary quadratic orders
"""

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt

from sympy import factorint, isprime, multiplicity, primerange
from sympy.ntheory import sqrt_mod as _sympy_sqrt_mod

try:
    # sympy.ntheory.jacobi_symbol is deprecated from sympy 1.13
    from sympy.external.gmpy import jacobi as _jacobi
except ImportError:
    from sympy.ntheory import jacobi_symbol as _jacobi


# Discriminants are plain integers; check_discriminant() enforces the invariants
Discriminant = int

Rational = int | Fraction


class ShihHypothesisError(ValueError):
    """Raised when (N/p) != -1, so C(N, p) is not one of Shih's twists"""


@dataclass(frozen=True)
class Place:
    """A place of Q: a prime number, or the real place (prime is None)"""

    prime: int | None = None

    def __post_init__(self):
        if self.prime is not None and not is_prime(self.prime):
            raise ValueError(f"Place must be a prime or infinity, got {self.prime}")

    @classmethod
    def infinity(cls) -> "Place":
        return cls(None)

    @classmethod
    def at(cls, prime: int) -> "Place":
        return cls(prime)

    @property
    def is_infinite(self) -> bool:
        return self.prime is None

    def sort_key(self) -> tuple[int, int]:
        # finite places ascending, infinity last
        return (1, 0) if self.prime is None else (0, self.prime)

    def __str__(self) -> str:
        return "inf" if self.prime is None else str(self.prime)

    @classmethod
    def parse(cls, text: str) -> "Place":
        if text.strip().lower() in ("inf", "infinity", "oo", "∞"):
            return cls.infinity()
        return cls.at(int(text))


# ============================================================================
# Primes
# ============================================================================

def is_prime(n: int) -> bool:
    """
    Primality test

    sympy's isprime is deterministic below 2^64 (Miller-Rabin with a fixed
    witness set); above that it runs BPSW, which has no known counterexample.
    """
    if n < 2:
        return False
    return bool(isprime(n))


def primes_in_range(lo: int, hi: int) -> list[int]:
    """All primes lo <= p <= hi in ascending order"""
    if hi < lo or hi < 2:
        return []
    return [int(p) for p in primerange(max(lo, 2), hi + 1)]


def valuation(n: int, ell: int) -> int:
    if n == 0:
        raise ValueError("valuation of 0 is infinite")
    return int(multiplicity(ell, n))


def is_squarefree(n: int) -> bool:
    if n == 0:
        return False
    return all(e == 1 for e in factorint(abs(n)).values())


# ============================================================================
# Quadratic symbols
# ============================================================================

def _kronecker_two(a: int) -> int:
    """(a/2) for odd a"""
    return 1 if a % 8 in (1, 7) else -1


def kronecker(a: int, n: int) -> int:
    """
    Kronecker symbol (a/n), the full extension of the Jacobi symbol

    Handles n = 0, negative n and even n; agrees with the Legendre symbol when
    n is an odd prime.
    """
    if n == 0:
        return 1 if a in (1, -1) else 0

    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -result

    twos = 0
    while n % 2 == 0:
        n //= 2
        twos += 1
    if twos:
        if a % 2 == 0:
            return 0
        if twos % 2 == 1:
            result *= _kronecker_two(a)

    if n == 1:
        return result
    return result * int(_jacobi(a % n, n))


def p_star(p: int) -> int:
    """Signed prime (-1)^((p-1)/2) * p, always 1 mod 4"""
    if p == 2 or not is_prime(p):
        raise ValueError(f"p_star needs an odd prime, got {p}")
    return p if p % 4 == 1 else -p


def require_shih_hypothesis(N: int, p: int) -> None:
    """Check that p is an odd prime not dividing N with (N/p) = -1"""
    if p == 2 or not is_prime(p):
        raise ValueError(f"Twisting prime must be an odd prime, got {p}")
    if N % p == 0:
        raise ValueError(f"Twisting prime {p} divides the level {N}")
    if kronecker(N, p) != -1:
        raise ShihHypothesisError(f"kronecker({N}, {p}) = {kronecker(N, p)}, expected -1")


def sqrt_mod(a: int, p: int) -> int | None:
    """Some x in [0, p) with x^2 = a (mod p), or None when a is a non-residue"""
    if p == 2 or not is_prime(p):
        raise ValueError(f"sqrt_mod needs an odd prime modulus, got {p}")
    a %= p
    if a == 0:
        return 0
    root = _sympy_sqrt_mod(a, p)
    return None if root is None else int(root) % p


# ============================================================================
# Hilbert symbol
# ============================================================================

def _square_class_integer(x: Rational) -> int:
    # a/b and a*b differ by the square b^2
    q = Fraction(x)
    if q == 0:
        raise ValueError("Hilbert symbol arguments must be nonzero")
    return q.numerator * q.denominator


def _split(n: int, ell: int) -> tuple[int, int]:
    v = valuation(n, ell)
    return v, n // ell**v


def hilbert_symbol(a: Rational, b: Rational, place: Place) -> int:
    """
    Hilbert symbol <a, b> at a place of Q

    +1 iff z^2 = a x^2 + b y^2 has a nonzero solution over the completion.
    Odd primes use the residue-symbol formula, 2 uses the epsilon/omega
    formula, the real place checks signs.
    """
    a_int = _square_class_integer(a)
    b_int = _square_class_integer(b)

    if place.is_infinite:
        return -1 if (a_int < 0 and b_int < 0) else 1

    ell = place.prime
    alpha, u = _split(a_int, ell)
    beta, v = _split(b_int, ell)

    if ell == 2:
        eps_u = ((u - 1) // 2) % 2
        eps_v = ((v - 1) // 2) % 2
        omega_u = ((u * u - 1) // 8) % 2
        omega_v = ((v * v - 1) // 8) % 2
        exponent = eps_u * eps_v + alpha * omega_v + beta * omega_u
        return -1 if exponent % 2 else 1

    sign = -1 if (alpha * beta * ((ell - 1) // 2)) % 2 else 1
    if beta % 2:
        sign *= kronecker(u, ell)
    if alpha % 2:
        sign *= kronecker(v, ell)
    return sign


def hilbert_places(a: Rational, b: Rational) -> list[Place]:
    """Places where <a, b> could be -1: infinity, 2 and primes dividing ab"""
    a_int = _square_class_integer(a)
    b_int = _square_class_integer(b)
    primes = set(factorint(abs(a_int))) | set(factorint(abs(b_int))) | {2}
    return [Place.at(int(ell)) for ell in sorted(primes)] + [Place.infinity()]


# ============================================================================
# Class numbers
# ============================================================================

def check_discriminant(D: Discriminant) -> None:
    if D >= 0 or D % 4 not in (0, 1):
        raise ValueError(f"Expected a negative discriminant D = 0, 1 (mod 4), got {D}")


def class_number(D: Discriminant) -> int:
    """
    Number of reduced primitive positive-definite forms (a, b, c) of
    discriminant D

    Reduced means |b| <= a <= c, with b >= 0 when |b| = a or a = c. The
    enumeration runs over b with b = D (mod 2) and |b| <= sqrt(|D|/3), and
    over divisors a of (b^2 - D)/4 with b <= a <= c.
    """
    check_discriminant(D)
    bound = isqrt(-D // 3)
    count = 0
    for b in range(D % 2, bound + 1, 2):
        ac = (b * b - D) // 4
        a = max(b, 1)
        while a * a <= ac:
            if ac % a == 0:
                c = ac // a
                if gcd(gcd(a, b), c) == 1:
                    # (a, -b, c) is a distinct reduced form unless b = 0, |b| = a or a = c
                    if b == 0 or b == a or a == c:
                        count += 1
                    else:
                        count += 2
            a += 1
    return count


def field_discriminant(m: int) -> Discriminant:
    """Discriminant of Q(sqrt(m)) for squarefree m != 0, 1"""
    if m in (0, 1) or not is_squarefree(m):
        raise ValueError(f"field_discriminant needs a squarefree integer other than 0 and 1, got {m}")
    return m if m % 4 == 1 else 4 * m
