"""
Exact elliptic-curve arithmetic over Q
Weierstrass models, group law, quadratic twists, isomorphism testing, torsion
certification and the models of C(11, p) and C(19, p)
"""

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm

import numpy as np
from sympy import integer_nthroot

from app.services.arith import (
    is_prime,
    is_squarefree,
    p_star,
    require_shih_hypothesis,
)


# Mazur: the order of a rational torsion point is at most 12
MAZUR_BOUND = 12


@dataclass(frozen=True)
class WeierstrassCurve:
    """y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 with rational coefficients"""

    a1: Fraction
    a2: Fraction
    a3: Fraction
    a4: Fraction
    a6: Fraction

    def __post_init__(self):
        for name in ("a1", "a2", "a3", "a4", "a6"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        if self.discriminant == 0:
            raise ValueError(f"Singular Weierstrass model {self.ainvs}")

    @classmethod
    def from_ainvs(cls, ainvs) -> "WeierstrassCurve":
        a1, a2, a3, a4, a6 = ainvs
        return cls(a1, a2, a3, a4, a6)

    @property
    def ainvs(self) -> tuple[Fraction, ...]:
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    @property
    def b2(self) -> Fraction:
        return self.a1 * self.a1 + 4 * self.a2

    @property
    def b4(self) -> Fraction:
        return 2 * self.a4 + self.a1 * self.a3

    @property
    def b6(self) -> Fraction:
        return self.a3 * self.a3 + 4 * self.a6

    @property
    def b8(self) -> Fraction:
        a1, a2, a3, a4, a6 = self.ainvs
        return a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4

    @property
    def c4(self) -> Fraction:
        return self.b2 ** 2 - 24 * self.b4

    @property
    def c6(self) -> Fraction:
        return -self.b2 ** 3 + 36 * self.b2 * self.b4 - 216 * self.b6

    @property
    def discriminant(self) -> Fraction:
        b2, b4, b6, b8 = self.b2, self.b4, self.b6, self.b8
        return -b2 * b2 * b8 - 8 * b4 ** 3 - 27 * b6 * b6 + 9 * b2 * b4 * b6

    @property
    def j_invariant(self) -> Fraction:
        return self.c4 ** 3 / self.discriminant

    @property
    def is_integral(self) -> bool:
        return all(a.denominator == 1 for a in self.ainvs)

    def rescale(self, u: Fraction | int) -> "WeierstrassCurve":
        """Isomorphic model with a_i -> u^i a_i (so c4 -> u^4 c4, c6 -> u^6 c6)"""
        u = Fraction(u)
        if u == 0:
            raise ValueError("Scaling factor must be nonzero")
        return WeierstrassCurve(self.a1 * u, self.a2 * u ** 2, self.a3 * u ** 3,
                                self.a4 * u ** 4, self.a6 * u ** 6)

    def integral_model(self) -> "WeierstrassCurve":
        u = lcm(*(a.denominator for a in self.ainvs))
        return self if u == 1 else self.rescale(u)

    def __str__(self) -> str:
        return "[" + ",".join(str(a) for a in self.ainvs) + "]"


@dataclass(frozen=True)
class ProjectivePoint:
    """
    [X : Y : Z] with x = X/Z, y = Y/Z

    Stored primitive (gcd 1) with Z > 0, or Z = 0 and the first nonzero of
    Y, X positive, so equal points compare equal.
    """

    X: int
    Y: int
    Z: int = 1

    def __post_init__(self):
        X, Y, Z = int(self.X), int(self.Y), int(self.Z)
        if X == 0 and Y == 0 and Z == 0:
            raise ValueError("[0:0:0] is not a projective point")
        g = gcd(gcd(X, Y), Z)
        X, Y, Z = X // g, Y // g, Z // g
        leading = Z if Z else (Y if Y else X)
        if leading < 0:
            X, Y, Z = -X, -Y, -Z
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "Y", Y)
        object.__setattr__(self, "Z", Z)

    @classmethod
    def from_affine(cls, x: Fraction | int, y: Fraction | int) -> "ProjectivePoint":
        x, y = Fraction(x), Fraction(y)
        den = lcm(x.denominator, y.denominator)
        return cls(int(x * den), int(y * den), den)

    @property
    def is_infinity(self) -> bool:
        return self.Z == 0

    @property
    def affine(self) -> tuple[Fraction, Fraction]:
        if self.is_infinity:
            raise ValueError("The point at infinity has no affine coordinates")
        return Fraction(self.X, self.Z), Fraction(self.Y, self.Z)

    def __str__(self) -> str:
        return f"[{self.X}:{self.Y}:{self.Z}]"


INFINITY = ProjectivePoint(0, 1, 0)


# ============================================================================
# Base curves X_0(11) and X_0(19)
# ============================================================================

BASE_CURVES: dict[int, WeierstrassCurve] = {
    11: WeierstrassCurve.from_ainvs([0, -1, 1, -10, -20]),
    19: WeierstrassCurve.from_ainvs([0, 1, 1, -9, -15]),
}


def base_curve(N: int) -> WeierstrassCurve:
    if N not in BASE_CURVES:
        raise ValueError(f"Level must be 11 or 19, got {N}")
    return BASE_CURVES[N]


# ============================================================================
# Group law
# ============================================================================

def on_curve(C: WeierstrassCurve, P: ProjectivePoint) -> bool:
    """Exact check of the homogeneous Weierstrass equation"""
    X, Y, Z = P.X, P.Y, P.Z
    lhs = Y * Y * Z + C.a1 * X * Y * Z + C.a3 * Y * Z * Z
    rhs = X ** 3 + C.a2 * X * X * Z + C.a4 * X * Z * Z + C.a6 * Z ** 3
    return lhs == rhs


def negate(C: WeierstrassCurve, P: ProjectivePoint) -> ProjectivePoint:
    if P.is_infinity:
        return P
    x, y = P.affine
    return ProjectivePoint.from_affine(x, -y - C.a1 * x - C.a3)


def group_law(C: WeierstrassCurve, P: ProjectivePoint, Q: ProjectivePoint) -> ProjectivePoint:
    """Chord-tangent addition P + Q with identity [0:1:0]"""
    if P.is_infinity:
        return Q
    if Q.is_infinity:
        return P

    a1, a2, a3, a4, a6 = C.ainvs
    x1, y1 = P.affine
    x2, y2 = Q.affine

    if x1 == x2:
        if y1 + y2 + a1 * x2 + a3 == 0:
            return INFINITY
        denom = 2 * y1 + a1 * x1 + a3
        slope = (3 * x1 * x1 + 2 * a2 * x1 + a4 - a1 * y1) / denom
        intercept = (-x1 ** 3 + a4 * x1 + 2 * a6 - a3 * y1) / denom
    else:
        slope = (y2 - y1) / (x2 - x1)
        intercept = (y1 * x2 - y2 * x1) / (x2 - x1)

    x3 = slope * slope + a1 * slope - a2 - x1 - x2
    y3 = -(slope + a1) * x3 - intercept - a3
    return ProjectivePoint.from_affine(x3, y3)


def scalar_multiply(C: WeierstrassCurve, P: ProjectivePoint, n: int) -> ProjectivePoint:
    """n * P by double-and-add"""
    if n < 0:
        return scalar_multiply(C, negate(C, P), -n)
    result = INFINITY
    addend = P
    while n:
        if n & 1:
            result = group_law(C, result, addend)
        addend = group_law(C, addend, addend)
        n >>= 1
    return result


def torsion_order(C: WeierstrassCurve, P: ProjectivePoint) -> int | None:
    """Order of P if it is at most 12, otherwise None (P has infinite order)"""
    multiple = P
    for n in range(1, MAZUR_BOUND + 1):
        if multiple.is_infinity:
            return n
        multiple = group_law(C, multiple, P)
    return None


def is_torsion(C: WeierstrassCurve, P: ProjectivePoint) -> bool:
    return torsion_order(C, P) is not None


# ============================================================================
# Twists and isomorphism
# ============================================================================

def quadratic_twist(C: WeierstrassCurve, d: int) -> WeierstrassCurve:
    """
    Quadratic twist by squarefree d

    Returns y^2 = x^3 - 27 d^2 c4 x - 54 d^3 c6, whose covariants are
    6^4 d^2 c4 and 6^6 d^3 c6.
    """
    if d == 0 or not is_squarefree(d):
        raise ValueError(f"Twist parameter must be a nonzero squarefree integer, got {d}")
    return WeierstrassCurve(0, 0, 0, -27 * d * d * C.c4, -54 * d ** 3 * C.c6)


def _rational_root(q: Fraction, n: int) -> Fraction | None:
    """Positive rational r with r^n = q, if there is one"""
    if q <= 0:
        return None
    num, num_exact = integer_nthroot(q.numerator, n)
    den, den_exact = integer_nthroot(q.denominator, n)
    if not (num_exact and den_exact):
        return None
    return Fraction(int(num), int(den))


def isomorphism_scale(C1: WeierstrassCurve, C2: WeierstrassCurve) -> Fraction | None:
    """Some u in Q* with c4(C2) = u^4 c4(C1) and c6(C2) = u^6 c6(C1), or None"""
    c4, c6 = C1.c4, C1.c6
    d4, d6 = C2.c4, C2.c6
    if (c4 == 0) != (d4 == 0) or (c6 == 0) != (d6 == 0):
        return None

    if c4 == 0:
        return _rational_root(d6 / c6, 6)
    if c6 == 0:
        return _rational_root(d4 / c4, 4)

    u = _rational_root((d6 / c6) / (d4 / c4), 2)
    if u is None or d4 != u ** 4 * c4 or d6 != u ** 6 * c6:
        return None
    return u


def curves_isomorphic(C1: WeierstrassCurve, C2: WeierstrassCurve) -> bool:
    return isomorphism_scale(C1, C2) is not None


def c_curve(N: int, p: int) -> WeierstrassCurve:
    """C(N, p) as the quadratic twist of X_0(N) by p*"""
    E = base_curve(N)
    require_shih_hypothesis(N, p)
    return quadratic_twist(E, p_star(p))


# ============================================================================
# Reduction mod primes
# ============================================================================

def _integral_ainvs(C: WeierstrassCurve) -> tuple[int, ...]:
    if not C.is_integral:
        raise ValueError(f"Point counting needs an integral model, got {C}")
    return tuple(int(a) for a in C.ainvs)


def _check_prime(ell: int) -> None:
    if not is_prime(ell):
        raise ValueError(f"Expected a prime, got {ell}")


def _count_affine_points_bruteforce(ainvs: tuple[int, ...], ell: int) -> int:
    a1, a2, a3, a4, a6 = ainvs
    return sum(
        1
        for x in range(ell)
        for y in range(ell)
        if (y * y + a1 * x * y + a3 * y - x ** 3 - a2 * x * x - a4 * x - a6) % ell == 0
    )


def count_points(C: WeierstrassCurve, ell: int) -> int:
    """
    #C(F_ell) including the point at infinity

    Odd ell completes the square, (2y + a1 x + a3)^2 = 4x^3 + b2 x^2 + 2 b4 x + b6,
    and sums 1 + (g(x)/ell) over all residues with numpy.
    """
    _check_prime(ell)
    ainvs = _integral_ainvs(C)
    if ell == 2:
        return _count_affine_points_bruteforce(ainvs, ell) + 1
    if ell >= 2 ** 30:
        raise ValueError(f"Prime {ell} too large for residue enumeration")

    b2, b4, b6 = (int(b) % ell for b in (C.b2, C.b4, C.b6))
    x = np.arange(ell, dtype=np.int64)
    x2 = x * x % ell
    g = (4 * (x2 * x % ell) + b2 * x2 + (2 * b4) * x + b6) % ell

    is_square = np.zeros(ell, dtype=bool)
    is_square[x2] = True
    chi = np.where(g == 0, 0, np.where(is_square[g], 1, -1))
    return int(ell + chi.sum()) + 1


def ap(C: WeierstrassCurve, ell: int) -> int:
    """a_ell = ell + 1 - #C(F_ell) at a prime of good reduction"""
    _check_prime(ell)
    if C.integral_model().discriminant % ell == 0:
        raise ValueError(f"{ell} is a prime of bad reduction for {C}; use bad_reduction_ap")
    return ell + 1 - count_points(C.integral_model(), ell)


def bad_reduction_ap(C: WeierstrassCurve, ell: int) -> int:
    """
    a_ell at a prime of bad reduction of an integral model

    Locates the singular point mod ell and counts the F_ell-rational tangent
    slopes m^2 + a1 m - (3 x0 + a2) = 0 there: two slopes is split
    multiplicative (+1), none is nonsplit (-1), a double slope is additive (0).
    The model must be minimal at ell for the answer to mean anything.
    """
    _check_prime(ell)
    a1, a2, a3, a4, a6 = _integral_ainvs(C)
    if C.discriminant % ell != 0:
        raise ValueError(f"{ell} is a prime of good reduction for {C}")

    singular = None
    for x0 in range(ell):
        for y0 in range(ell):
            f = y0 * y0 + a1 * x0 * y0 + a3 * y0 - x0 ** 3 - a2 * x0 * x0 - a4 * x0 - a6
            fx = a1 * y0 - 3 * x0 * x0 - 2 * a2 * x0 - a4
            fy = 2 * y0 + a1 * x0 + a3
            if f % ell == 0 and fx % ell == 0 and fy % ell == 0:
                singular = (x0, y0)
                break
        if singular is not None:
            break
    if singular is None:
        raise ValueError(f"No singular point found for {C} mod {ell}")

    x0 = singular[0]
    slopes = sum(1 for m in range(ell) if (m * m + a1 * m - 3 * x0 - a2) % ell == 0)
    return {2: 1, 0: -1}.get(slopes, 0)
