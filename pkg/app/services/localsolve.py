"""
Local solvability of hyperelliptic quartics d * y^2 = P(x)
Real points by root counting, ell-adic points by a residue-class descent with
Hensel closure, and a brute-force congruence oracle
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from sympy import Poly, Symbol

from app.services.arith import (
    is_prime,
    kronecker,
    p_star,
    require_shih_hypothesis,
    valuation,
)


logger = logging.getLogger(__name__)

_x = Symbol("x")

# P(x) for X_0(17) with w_17 acting as (x, y) -> (x, -y)
C17_QUARTIC = (1, 2, -39, -176, -212)

ORACLE_LIMIT = 10 ** 7


class OversizedEnumerationError(ValueError):
    """exhaustive_oracle asked to enumerate more than ORACLE_LIMIT residues"""


@dataclass(frozen=True)
class QuarticModel:
    """d * y^2 = c4 x^4 + c3 x^3 + c2 x^2 + c1 x + c0"""

    d: int
    coefficients: tuple[int, int, int, int, int]

    def __post_init__(self):
        object.__setattr__(self, "coefficients", tuple(int(c) for c in self.coefficients))
        if len(self.coefficients) != 5:
            raise ValueError(f"Expected 5 quartic coefficients, got {self.coefficients}")
        if self.d == 0:
            raise ValueError("Twisting coefficient d must be nonzero")
        if self.coefficients[0] == 0:
            raise ValueError("Leading coefficient c4 must be nonzero")
        if self.discriminant == 0:
            raise ValueError(f"Quartic {self.coefficients} has a repeated root")

    @cached_property
    def discriminant(self) -> int:
        return int(Poly(self.coefficients, _x).discriminant())

    @property
    def leading(self) -> int:
        return self.coefficients[0]

    def evaluate(self, x: int) -> int:
        value = 0
        for c in self.coefficients:
            value = value * x + c
        return value

    def __str__(self) -> str:
        c4, c3, c2, c1, c0 = self.coefficients
        return f"{self.d}*y^2 = {c4}x^4 + {c3}x^3 + {c2}x^2 + {c1}x + {c0}"


def c17_model(p: int) -> QuarticModel:
    """C(17, p): p* y^2 = x^4 + 2x^3 - 39x^2 - 176x - 212"""
    require_shih_hypothesis(17, p)
    return QuarticModel(p_star(p), C17_QUARTIC)


# ============================================================================
# Real points
# ============================================================================

def solvable_real(m: QuarticModel) -> bool:
    """
    d * P(x) >= 0 somewhere on R, or the points at infinity are real

    With d * c4 < 0 the product tends to -inf at both ends, so a real point
    exists exactly when P has a real root.
    """
    if m.d * m.leading > 0:
        return True
    return bool(Poly(m.coefficients, _x).count_roots() > 0)


# ============================================================================
# ell-adic points
# ============================================================================

@dataclass(frozen=True)
class ResidueNode:
    """One residue class x = r (mod ell^k) of the affine or reciprocal chart"""

    chart: str  # "affine" (x in Z_ell) or "reciprocal" (x = 1/t, t in ell Z_ell)
    residue: int
    depth: int
    status: str  # "square", "nonsquare", "root", "hensel", "split"
    value_valuation: int | None = None


@dataclass
class LocalSearchResult:
    ell: int
    solvable: bool
    depth_bound: int
    nodes: list[ResidueNode] = field(default_factory=list)
    witness: ResidueNode | None = None
    # modulus exponent at which every closed class is visible to exhaustive_oracle
    precision: int = 1


def _is_padic_square(n: int, ell: int) -> bool:
    """n != 0 is a square in Q_ell"""
    v = valuation(n, ell)
    if v % 2:
        return False
    unit = n // ell ** v
    if ell == 2:
        return unit % 8 == 1
    return kronecker(unit, ell) == 1


def _taylor_coefficients(coefficients: list[int], r: int) -> list[int]:
    """Coefficients of f(r + z) in z, lowest degree first (repeated synthetic division)"""
    work = list(coefficients)
    n = len(work) - 1
    shifted = []
    for i in range(n + 1):
        for j in range(1, n + 1 - i):
            work[j] += r * work[j - 1]
        shifted.append(work[n - i])
    return shifted


def _resultant_valuation(coefficients: list[int], ell: int) -> int:
    f = Poly(coefficients, _x)
    res = int(f.resultant(f.diff(_x)))
    return valuation(res, ell)


def depth_bound(m: QuarticModel, ell: int) -> int:
    """
    Largest class depth the descent may need

    v(4 disc(P) d^2) + 3, raised to v(Res(f, f')) + e for f = d*P and its
    reciprocal (e = 3 at 2, else 1): past that depth every class is either
    determined or Hensel-liftable.
    """
    e = 3 if ell == 2 else 1
    base = valuation(4 * m.discriminant * m.d * m.d, ell) + 3
    f = [m.d * c for c in m.coefficients]
    return max(base,
               _resultant_valuation(f, ell) + e,
               _resultant_valuation(list(reversed(f)), ell) + e)


class _Descent:
    def __init__(self, ell: int, bound: int, record: bool):
        self.ell = ell
        self.bound = bound
        self.e = 3 if ell == 2 else 1
        self.record = record
        self.nodes: list[ResidueNode] = []
        self.witness: ResidueNode | None = None
        self.precision = 1

    def _note(self, node: ResidueNode) -> None:
        if self.record:
            self.nodes.append(node)

    def search(self, chart: str, f: list[int], r: int, k: int) -> bool:
        """Is f(x) a square in Q_ell for some x = r (mod ell^k)?"""
        ell = self.ell
        taylor = _taylor_coefficients(f, r)
        value = taylor[0]

        if value == 0:
            self.witness = ResidueNode(chart, r, k, "root")
            self._note(self.witness)
            return True

        a = valuation(value, ell)
        tail = [j * k + valuation(c, ell) for j, c in enumerate(taylor) if j >= 1 and c != 0]
        determined_to = min(tail) if tail else a + self.e

        if determined_to >= a + self.e:
            if _is_padic_square(value, ell):
                self.witness = ResidueNode(chart, r, k, "square", a)
                self._note(self.witness)
                return True
            self._note(ResidueNode(chart, r, k, "nonsquare", a))
            self.precision = max(self.precision, k, a + self.e)
            return False

        derivative = taylor[1]
        if derivative != 0 and a > 2 * valuation(derivative, ell):
            self.witness = ResidueNode(chart, r, k, "hensel", a)
            self._note(self.witness)
            return True

        if k + 1 > self.bound:
            raise RuntimeError(f"Residue class {r} mod {ell}^{k} unresolved at depth bound {self.bound}")

        self._note(ResidueNode(chart, r, k, "split", a))
        step = ell ** k
        return any(self.search(chart, f, r + s * step, k + 1) for s in range(ell))


def local_search(m: QuarticModel, ell: int, record: bool = True) -> LocalSearchResult:
    """
    Decide whether d * y^2 = P(x) has a Q_ell-point

    Points with x in Z_ell are found in the affine chart; x = 1/t with
    t in ell Z_ell (including the points at infinity, t = 0) in the reciprocal
    chart d * y^2 = t^4 P(1/t). Each class is closed as soon as the square class
    of d*P is constant on it, or a simple root lifts by Hensel's lemma.
    """
    if not is_prime(ell):
        raise ValueError(f"Expected a prime, got {ell}")
    bound = depth_bound(m, ell)
    descent = _Descent(ell, bound, record)

    f = [m.d * c for c in m.coefficients]
    reciprocal = list(reversed(f))
    solvable = descent.search("affine", f, 0, 0) or descent.search("reciprocal", reciprocal, 0, 1)

    logger.debug(f"[LocalSolve] {m} at {ell}: {'solvable' if solvable else 'not solvable'}"
                 f" (bound {bound}, {len(descent.nodes)} classes)")
    return LocalSearchResult(
        ell=ell,
        solvable=solvable,
        depth_bound=bound,
        nodes=descent.nodes,
        witness=descent.witness,
        precision=descent.precision,
    )


def solvable_at(m: QuarticModel, ell: int) -> bool:
    return local_search(m, ell, record=False).solvable


# ============================================================================
# Brute-force oracle
# ============================================================================

def _squarefree_at(d: int, ell: int) -> int:
    v = valuation(d, ell)
    return d // ell ** (2 * (v // 2))


def _horner_mod(coefficients, values: np.ndarray, modulus: int) -> np.ndarray:
    acc = np.zeros_like(values)
    for c in coefficients:
        acc = (acc * values + c % modulus) % modulus
    return acc


def exhaustive_oracle(m: QuarticModel, ell: int, k: int) -> bool:
    """
    Does d * Y^2 = F(X, Z) have a solution mod ell^k with (X, Z) primitive?

    F is the binary quartic form of P. Primitive pairs are scaled to Z = 1 or
    to X = 1 with ell | Z. The even part of v_ell(d) is removed first (an
    isomorphic model), so a Q_ell-point always gives a solution.
    """
    if not is_prime(ell):
        raise ValueError(f"Expected a prime, got {ell}")
    modulus = ell ** k
    if k < 1 or modulus > ORACLE_LIMIT:
        raise OversizedEnumerationError(f"{ell}^{k} residues exceeds the enumeration limit {ORACLE_LIMIT}")

    d = _squarefree_at(m.d, ell) % modulus
    y = np.arange(modulus, dtype=np.int64)
    representable = np.zeros(modulus, dtype=bool)
    representable[(d * (y * y % modulus)) % modulus] = True

    affine = _horner_mod(m.coefficients, np.arange(modulus, dtype=np.int64), modulus)
    if representable[affine].any():
        return True

    reciprocal = _horner_mod(tuple(reversed(m.coefficients)), np.arange(0, modulus, ell, dtype=np.int64), modulus)
    return bool(representable[reciprocal].any())
