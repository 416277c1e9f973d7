import random
from fractions import Fraction

import pytest
import sympy

from dynshaf.errors import SingularCurve
from dynshaf.exactalg import FunctionField, Place
from dynshaf.forms import BinaryForm, primitive_model
from dynshaf.lattes import (
    EllipticCurve,
    curve_points,
    division_data,
    division_polynomial,
    lattes_dgr_correspondence,
    lattes_map,
    minimal_disc_support,
    minimal_model,
    phi_squarefree,
    ramification_matches_phi4,
    verify_disc_identity,
    verify_duplication,
)
from dynshaf.ratmap import critical_data, differential_discriminant

F5, F7 = FunctionField(5), FunctionField(7)
P = Place.prime
x = sympy.Symbol("x")


def random_curves(n, seed=0, h=20):
    rng = random.Random(seed)
    out = []
    while len(out) < n:
        A, B = rng.randint(-h, h), rng.randint(-h, h)
        if 4 * A ** 3 + 27 * B ** 2:
            out.append(EllipticCurve(A, B))
    return out


def _affine_sympy(F):
    return sum(sympy.Rational(Fraction(c).numerator, Fraction(c).denominator) * x ** (F.degree - i)
               for i, c in enumerate(F.coeffs))


def test_lattes_map_of_x3_plus_1():
    f = lattes_map(EllipticCurve(0, 1))
    assert f.F0 == BinaryForm((1, 0, 0, -8, 0))
    assert f.F1 == BinaryForm((0, 4, 0, 0, 4))
    assert f.degree == 4
    assert f((1, 0)) == (1, 0)  # f(inf) = inf
    assert critical_data(f).wronskian.coeffs[0] != 0  # and inf is not a ramification point


def test_singular_curves_are_rejected():
    with pytest.raises(SingularCurve):
        EllipticCurve(-3, 2)
    with pytest.raises(SingularCurve):
        EllipticCurve(1, 1, FunctionField(3))


def test_division_data_examples():
    dd = division_data(EllipticCurve(0, 1))
    assert dd.phi2 == BinaryForm((1, 0, 0, 1))
    assert dd.phi4.degree == 6


def test_phi4_is_the_ramification_of_the_duplication_map():
    """Oracle: affine critical points of x(2P) by symbolic differentiation."""
    for E in [EllipticCurve(0, 1)] + random_curves(6, seed=1):
        A, B = E.A, E.B
        g = (x ** 4 - 2 * A * x ** 2 - 8 * B * x + A ** 2) / (4 * (x ** 3 + A * x + B))
        crit = sympy.Poly(sympy.numer(sympy.together(sympy.diff(g, x))), x)
        phi4 = sympy.Poly(_affine_sympy(division_data(E).phi4), x)
        assert sympy.div(crit, phi4)[1].is_zero and crit.degree() == phi4.degree()
        assert ramification_matches_phi4(E)


def test_branch_points_are_the_two_torsion():
    for E in random_curves(5, seed=2):
        cd = critical_data(lattes_map(E))
        assert cd.branch_radical == primitive_model(division_data(E).phi2)
        assert cd.ramification_radical == primitive_model(division_data(E).phi4)


@pytest.mark.parametrize("p", [7, 11, 13])
def test_division_polynomials_vanish_on_torsion_points(p):
    """Oracle: n-torsion over F_p found with the group law."""
    E = next(E for E in random_curves(40, seed=p) if int(E.discriminant) % p)
    A = int(E.A) % p

    def add(P1, P2):
        if P1 is None:
            return P2
        if P2 is None:
            return P1
        (x1, y1), (x2, y2) = P1, P2
        if x1 == x2 and (y1 + y2) % p == 0:
            return None
        if P1 == P2:
            lam = (3 * x1 * x1 + A) * pow(2 * y1, -1, p) % p
        else:
            lam = (y2 - y1) * pow(x2 - x1, -1, p) % p
        x3 = (lam * lam - x1 - x2) % p
        return (x3, (lam * (x1 - x3) - y1) % p)

    for n in (3, 4, 5):
        g, e = division_polynomial(E, n)
        for Pt in curve_points(E.A, E.B, p):
            Q = None
            for _ in range(n):
                Q = add(Q, Pt)
            if Q is None and Pt[1] != 0:
                val = sum(int(Fraction(c).numerator * pow(Fraction(c).denominator, -1, p)) * pow(Pt[0], len(g) - 1 - i, p)
                          for i, c in enumerate(g)) % p
                assert val == 0


def test_disc_identity_examples():
    r = verify_disc_identity(EllipticCurve(0, 1))
    assert r.matches and r.two_power == -14
    for E in random_curves(20, seed=3):
        r = verify_disc_identity(E)
        assert r.matches and r.two_power == -14
    r = verify_disc_identity(EllipticCurve(0, F5.t, F5))
    assert r.matches


def test_phi_product_is_squarefree_for_nonsingular_curves():
    for E in random_curves(10, seed=4):
        assert phi_squarefree(E)


def test_lattes_has_zero_ddiff_but_nonzero_reduced_discriminant():
    for E in random_curves(4, seed=5):
        rep = differential_discriminant(lattes_map(E))
        assert rep.delta_diff == 0 and rep.delta_diff_reduced != 0


def test_correspondence_examples():
    r = lattes_dgr_correspondence(EllipticCurve(0, 1))
    assert r.bad_places == () and r.disc_support == ()
    r = lattes_dgr_correspondence(EllipticCurve(-1, 1))  # Delta = -16 * 23
    assert r.agree and r.bad_places == (P(23),)
    r = lattes_dgr_correspondence(EllipticCurve(0, F5.t, F5))
    assert r.agree and set(r.bad_places) == {Place.poly([0, 1], 5), Place.infinity(5)}


def test_correspondence_on_random_curves():
    for E in random_curves(20, seed=6, h=60):
        assert lattes_dgr_correspondence(E).agree


def test_correspondence_needs_a_minimal_model():
    E = EllipticCurve(625, 31250)  # (1, 2) scaled by 5^4, 5^6
    assert minimal_model(E) == EllipticCurve(1, 2)
    assert Place.prime(5) not in minimal_disc_support(E)
    assert lattes_dgr_correspondence(E).agree


def test_correspondence_over_function_fields():
    t = F7.t
    for A, B in [(t, 1), (t * t + 1, t), (3 * t ** 4, 2 * t ** 6), (0, t ** 6 + 1), (t, t ** 3)]:
        assert lattes_dgr_correspondence(EllipticCurve(A, B, F7)).agree


@pytest.mark.parametrize("p", [7, 11])
def test_duplication_and_quadruplication_exhaustively(p):
    curves = [E for E in random_curves(30, seed=p, h=30) if int(E.discriminant) % p][:3]
    for E in curves:
        assert verify_duplication(E, p)
        assert verify_duplication(E, p, iterate=2)


def test_point_checks_reject_bad_primes():
    with pytest.raises(SingularCurve):
        verify_duplication(EllipticCurve(0, 1), 3)
