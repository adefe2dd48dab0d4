from fractions import Fraction

import pytest

from app.services.arith import ShihHypothesisError, primes_in_range
from app.services.elliptic import (
    INFINITY,
    ProjectivePoint,
    WeierstrassCurve,
    ap,
    bad_reduction_ap,
    base_curve,
    c_curve,
    count_points,
    curves_isomorphic,
    group_law,
    is_torsion,
    isomorphism_scale,
    negate,
    on_curve,
    quadratic_twist,
    scalar_multiply,
    torsion_order,
)
from app.services.survey import WORKED_EXAMPLES

E11 = base_curve(11)
E19 = base_curve(19)
EXAMPLE_1, EXAMPLE_2 = WORKED_EXAMPLES
MODEL_1 = WeierstrassCurve.from_ainvs(EXAMPLE_1.ainvs)
MODEL_2 = WeierstrassCurve.from_ainvs(EXAMPLE_2.ainvs)
POINT_1 = ProjectivePoint(*EXAMPLE_1.point)
POINT_2 = ProjectivePoint(*EXAMPLE_2.point)

# 37a1: y^2 + y = x^3 - x, generated by (0, 0) of infinite order
E37 = WeierstrassCurve.from_ainvs([0, 0, 1, -1, 0])
G37 = ProjectivePoint(0, 0, 1)


def test_base_curve_invariants():
    assert E11.discriminant == -11 ** 5
    assert E19.discriminant == -19 ** 3
    assert E11.j_invariant != E19.j_invariant


def test_singular_model_rejected():
    with pytest.raises(ValueError):
        WeierstrassCurve.from_ainvs([0, 0, 0, 0, 0])


def test_point_normalisation():
    assert ProjectivePoint(2, 4, 6) == ProjectivePoint(1, 2, 3)
    assert ProjectivePoint(-1, -2, -3) == ProjectivePoint(1, 2, 3)
    assert ProjectivePoint(0, -5, 0) == INFINITY
    assert ProjectivePoint.from_affine(Fraction(1, 2), Fraction(3, 4)) == ProjectivePoint(2, 3, 4)
    with pytest.raises(ValueError):
        ProjectivePoint(0, 0, 0)


def test_on_curve_examples():
    assert on_curve(MODEL_1, POINT_1)
    assert on_curve(MODEL_2, POINT_2)
    assert on_curve(E11, INFINITY)
    assert on_curve(MODEL_1, INFINITY)
    assert not on_curve(MODEL_1, ProjectivePoint(POINT_1.X + 1, POINT_1.Y, POINT_1.Z))


def test_group_law_identity_and_inverse():
    P = ProjectivePoint(5, 5)
    assert group_law(E11, P, INFINITY) == P
    assert group_law(E11, INFINITY, P) == P
    assert group_law(E11, P, negate(E11, P)) == INFINITY
    assert group_law(E37, G37, negate(E37, G37)) == INFINITY


def test_five_torsion_on_e11():
    P = ProjectivePoint(5, 5)
    assert on_curve(E11, P)
    assert scalar_multiply(E11, P, 5) == INFINITY
    assert torsion_order(E11, P) == 5
    assert is_torsion(E11, P)
    assert is_torsion(E11, INFINITY)


def test_group_law_associative_and_commutative(rng):
    multiples = {n: scalar_multiply(E37, G37, n) for n in range(-4, 5)}
    for P in multiples.values():
        assert on_curve(E37, P)
    for _ in range(100):
        i, j, k = (rng.randint(-4, 4) for _ in range(3))
        P, Q, R = multiples[i], multiples[j], multiples[k]
        assert group_law(E37, P, Q) == group_law(E37, Q, P)
        left = group_law(E37, group_law(E37, P, Q), R)
        right = group_law(E37, P, group_law(E37, Q, R))
        assert left == right
        assert left == scalar_multiply(E37, G37, i + j + k)


def test_scalar_multiply_known_point_on_37a1():
    assert scalar_multiply(E37, G37, 2) == ProjectivePoint(1, 0, 1)
    assert scalar_multiply(E37, G37, 0) == INFINITY
    assert scalar_multiply(E37, G37, -1) == negate(E37, G37)
    assert not is_torsion(E37, G37)


def test_example_points_are_nontorsion():
    assert not is_torsion(MODEL_1, POINT_1)
    assert not is_torsion(MODEL_2, POINT_2)


def test_twists_match_printed_models():
    assert curves_isomorphic(quadratic_twist(E11, -4079), MODEL_1)
    assert curves_isomorphic(quadratic_twist(E19, -5591), MODEL_2)
    assert curves_isomorphic(c_curve(11, 4079), MODEL_1)
    assert curves_isomorphic(c_curve(19, 5591), MODEL_2)


def test_isomorphism_examples():
    assert curves_isomorphic(quadratic_twist(E11, 1), E11)
    assert isomorphism_scale(E11, E11.rescale(2)) in (2, -2)
    assert not curves_isomorphic(E11, E19)
    assert not curves_isomorphic(E11, quadratic_twist(E11, -1))


@pytest.mark.parametrize("d", [-1, 2, -2, 3, -3, 5])
def test_twist_is_an_involution(d):
    for E in (E11, E19):
        twisted = quadratic_twist(E, d)
        assert twisted.j_invariant == E.j_invariant
        assert curves_isomorphic(quadratic_twist(twisted, d), E)


@pytest.mark.parametrize("d", [0, 4, -12])
def test_twist_rejects_non_squarefree(d):
    with pytest.raises(ValueError):
        quadratic_twist(E11, d)


def test_c_curve_rejects():
    with pytest.raises(ShihHypothesisError):
        c_curve(11, 7)
    with pytest.raises(ValueError):
        c_curve(17, 5)


@pytest.mark.parametrize("E, ell, expected", [
    (E11, 2, -2), (E11, 3, -1), (E11, 5, 1), (E11, 7, -2), (E11, 13, 4),
    (E19, 2, 0), (E19, 3, -2), (E19, 5, 3), (E19, 7, -1), (E19, 11, 3),
])
def test_ap_small_primes(E, ell, expected):
    assert ap(E, ell) == expected


def test_count_points_agrees_with_bruteforce():
    for ell in primes_in_range(3, 60):
        if ell in (11, 19):
            continue
        for E in (E11, E19):
            a1, a2, a3, a4, a6 = (int(a) for a in E.ainvs)
            affine = sum(1 for x in range(ell) for y in range(ell)
                         if (y * y + a1 * x * y + a3 * y - x ** 3 - a2 * x * x - a4 * x - a6) % ell == 0)
            assert count_points(E, ell) == affine + 1


def test_hasse_bound():
    for ell in primes_in_range(2, 10 ** 4):
        for N, E in ((11, E11), (19, E19)):
            if ell != N:
                assert ap(E, ell) ** 2 <= 4 * ell


def test_ap_rejects_bad_primes():
    with pytest.raises(ValueError):
        ap(E11, 11)
    with pytest.raises(ValueError):
        ap(E11, 12)


def test_bad_reduction_types():
    assert bad_reduction_ap(E11, 11) == 1
    assert bad_reduction_ap(E19, 19) == 1
    assert bad_reduction_ap(WeierstrassCurve.from_ainvs([0, 1, 0, 0, 5]), 5) == 1
    assert bad_reduction_ap(WeierstrassCurve.from_ainvs([0, 2, 0, 0, 5]), 5) == -1
    assert bad_reduction_ap(WeierstrassCurve.from_ainvs([0, 0, 0, 0, 3]), 3) == 0
    with pytest.raises(ValueError):
        bad_reduction_ap(E11, 3)


def test_integral_model():
    E = WeierstrassCurve.from_ainvs([0, 0, 0, Fraction(1, 4), Fraction(1, 8)])
    model = E.integral_model()
    assert model.is_integral
    assert curves_isomorphic(E, model)
    assert model.j_invariant == E.j_invariant
