import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dynshaf.divisors import (
    INCONCLUSIVE,
    PointTuple,
    ReducedDivisor,
    bracket,
    cross_ratio,
    divisor_good_reduction_at,
    divisors_equivalent,
    enumerate_gr_lambdas,
    moduli_point,
    normalize_three,
    places_outside,
    solve_unit_equation,
)
from dynshaf.errors import DegreeMismatch, RepeatedIndex
from dynshaf.exactalg import FunctionField, Place, valuation
from dynshaf.forms import BinaryForm, GroupElement

F3, F5, F7 = FunctionField(3), FunctionField(5), FunctionField(7)
P = Place.prime
INF = "inf"

points = st.tuples(st.integers(-20, 20), st.integers(0, 20)).filter(lambda p: p != (0, 0))
mats = st.tuples(*[st.integers(-5, 5)] * 4).filter(lambda m: m[0] * m[3] - m[1] * m[2] != 0)


def distinct_tuple(n):
    return st.lists(points, min_size=n, max_size=n).filter(_distinct)


def _distinct(pts):
    return all(a[0] * b[1] != a[1] * b[0] for a, b in itertools.combinations(pts, 2))


def _g(m):
    return GroupElement(1, ((m[0], m[1]), (m[2], m[3])))


def test_bracket_examples():
    s = PointTuple([(0, 1), (1, 0)])
    assert bracket(s, 0, 1) == -1
    assert bracket(s, 0, 0) == 0
    for lam in (-3, 2, 9):
        assert bracket(PointTuple.affine([1, lam]), 0, 1) == 1 - lam


def test_cross_ratio_examples():
    s = PointTuple.affine([0, 1, INF, 3])
    assert cross_ratio(s, 0, 1, 2, 3) + cross_ratio(s, 0, 2, 1, 3) == 1
    with pytest.raises(RepeatedIndex):
        cross_ratio(s, 0, 1, 1, 3)


@settings(max_examples=50)
@given(distinct_tuple(5))
def test_plucker_and_antisymmetry(pts):
    s = PointTuple(pts)
    for i, j in itertools.permutations(range(5), 2):
        assert bracket(s, i, j) == -bracket(s, j, i)
    for i, j, k, l in itertools.combinations(range(5), 4):
        assert bracket(s, i, j) * bracket(s, k, l) - bracket(s, i, k) * bracket(s, j, l) \
            + bracket(s, i, l) * bracket(s, j, k) == 0


@settings(max_examples=50)
@given(distinct_tuple(4), mats)
def test_cross_ratio_is_pgl2_invariant(pts, m):
    s = PointTuple(pts)
    t = s.transform(_g(m))
    for idx in itertools.permutations(range(4)):
        assert cross_ratio(t, *idx) == cross_ratio(s, *idx)


def test_moduli_point_of_standard_quadruple():
    for lam in (2, -1, Fraction(1, 2), Fraction(5, 7), 11):
        s = PointTuple.affine([0, 1, INF, lam])
        assert moduli_point(s).coords == (1 - Fraction(1) / lam,)


@settings(max_examples=30)
@given(distinct_tuple(6), mats)
def test_moduli_point_is_invariant(pts, m):
    s = PointTuple(pts)
    assert moduli_point(s.transform(_g(m))) == moduli_point(s)


def test_moduli_points_separate_inequivalent_tuples():
    a = PointTuple.affine([0, 1, INF, 2, 5])
    b = PointTuple.affine([0, 1, INF, 2, 6])
    assert moduli_point(a) != moduli_point(b)
    _, na = normalize_three(a)
    _, nb = normalize_three(b)
    assert na != nb


def test_normalize_three_examples():
    s = PointTuple.affine([0, 1, INF, 5])
    g, t = normalize_three(s)
    assert t == s
    g, t = normalize_three(PointTuple.affine([1, 2, 3]))
    assert t == PointTuple.affine([0, 1, INF])


@settings(max_examples=30)
@given(distinct_tuple(5), mats)
def test_normalize_three_is_unique(pts, m):
    s = PointTuple(pts)
    assert normalize_three(s.transform(_g(m)))[1] == normalize_three(s)[1]


def test_normalize_three_over_function_field():
    t = F7.t
    s = PointTuple.affine([t, t + 1, 1 / t, t * t], F7)
    _, u = normalize_three(s)
    assert u.affine_values()[:3] == [F7.zero, F7.one, None]


def test_divisor_equivalence_examples():
    rng = random.Random(0)
    D = ReducedDivisor.affine([0, 1, INF, 5, Fraction(2, 3)])
    for _ in range(10):
        m = (rng.randint(-4, 4), rng.randint(-4, 4), rng.randint(-4, 4), rng.randint(-4, 4))
        if m[0] * m[3] == m[1] * m[2]:
            continue
        assert divisors_equivalent(D, D.transform(_g(m))) is True
    lam = Fraction(7, 3)
    assert divisors_equivalent(ReducedDivisor.affine([0, 1, INF, lam]), ReducedDivisor.affine([0, 1, INF, 1 - lam]))
    assert divisors_equivalent(ReducedDivisor.affine([0, 1, INF, 2]), ReducedDivisor.affine([0, 1, INF, 3])) is False
    with pytest.raises(DegreeMismatch):
        divisors_equivalent(ReducedDivisor.affine([0, 1, INF]), ReducedDivisor.affine([0, 1, INF, 2]))


def test_lambda_orbit_oracle():
    """{0,1,inf,a} ~ {0,1,inf,b} exactly when b is in the six-element orbit of a."""
    vals = [2, 3, -1, Fraction(1, 2), Fraction(2, 3), -2, 5, Fraction(-1, 3)]
    for a, b in itertools.product(vals, repeat=2):
        orbit = {a, 1 - a, Fraction(1) / a, 1 - Fraction(1) / a, Fraction(1) / (1 - a), Fraction(a) / (a - 1)}
        res = divisors_equivalent(ReducedDivisor.affine([0, 1, INF, a]), ReducedDivisor.affine([0, 1, INF, b]))
        assert res is (b in orbit)


def test_equivalence_is_reflexive_and_symmetric():
    rng = random.Random(1)
    divs = []
    for _ in range(8):
        vals = set()
        while len(vals) < 4:
            vals.add(Fraction(rng.randint(-6, 6), rng.randint(1, 4)))
        divs.append(ReducedDivisor.affine(sorted(vals)))
    for D in divs:
        assert divisors_equivalent(D, D) is True
    for D, E in itertools.combinations(divs, 2):
        assert divisors_equivalent(D, E) == divisors_equivalent(E, D)


def test_non_split_divisors_get_a_partial_answer():
    D = ReducedDivisor(BinaryForm((1, 0, 0, 0, -2)))  # x^4 - 2
    E = ReducedDivisor(BinaryForm((1, 0, 0, 0, -3)))  # x^4 - 3
    assert not D.split and D.splitting_degree is None
    assert divisors_equivalent(D, D.transform(_g((1, 1, 0, 1)))) == INCONCLUSIVE
    assert divisors_equivalent(D, E) in (False, INCONCLUSIVE)
    G = ReducedDivisor(BinaryForm((1, 0, 1, 0, 1)))  # x^4 + x^2 + 1, two quadratic factors
    assert divisors_equivalent(D, G) is False


def test_divisor_reduction_examples():
    D = ReducedDivisor.affine([0, 1, INF])
    for v in places_outside([], 15):
        assert divisor_good_reduction_at(D, v)
    D = ReducedDivisor.affine([0, 1, INF, 2])
    assert [v for v in places_outside([], 15) if not divisor_good_reduction_at(D, v)] == [P(2)]


def test_divisor_reduction_over_function_field():
    D = ReducedDivisor.affine([0, 1, INF, F3.t], F3)
    bad = [v for v in places_outside([], 12, F3) if not divisor_good_reduction_at(D, v)]
    # t collides with 0 at (t), with 1 at (t - 1) = (t + 2), and with inf at the infinite place
    assert set(bad) == {Place.poly([0, 1], 3), Place.poly([2, 1], 3), Place.infinity(3)}


def test_divisor_reduction_invariant_under_unimodular_transforms():
    rng = random.Random(2)
    D = ReducedDivisor.affine([0, 1, INF, 6, Fraction(3, 5), -10])
    for _ in range(10):
        k, j = rng.randint(-5, 5), rng.randint(-5, 5)
        g = _g((1, k, 0, 1)) * _g((1, 0, j, 1))
        E = D.transform(g)
        for q in (2, 3, 5, 7, 11, 13):
            assert divisor_good_reduction_at(E, P(q)) == divisor_good_reduction_at(D, P(q))


def test_unit_equation_examples():
    assert len(solve_unit_equation([], 10)) == 0
    sols = set(solve_unit_equation([P(2)], 2))
    assert sols == {(2, -1), (-1, 2), (Fraction(1, 2), Fraction(1, 2))}
    ff = solve_unit_equation([], 3, F5)
    assert {(str(u), str(v)) for u, v in ff} == {("2", "4"), ("3", "3"), ("4", "2")}
    assert set(ff.exceptional) == set(ff.pairs)


def test_unit_equation_solutions_are_exact_and_stable():
    S = [P(2), P(3)]
    small = solve_unit_equation(S, 6)
    big = solve_unit_equation(S, 11)
    assert set(small) == set(big)
    for u, v in big:
        assert u + v == 1
        for q in (5, 7, 11, 13):
            assert valuation(u, P(q)) == 0 and valuation(v, P(q)) == 0


def test_unit_equation_over_function_field_with_places():
    S = [Place.poly([0, 1], 5), Place.infinity(5)]
    sols = solve_unit_equation(S, 3, F5)
    t = F5.t
    assert (t, 1 - t) not in set(sols)  # 1 - t is not an S-unit
    S = [Place.poly([0, 1], 5), Place.poly([4, 1], 5), Place.infinity(5)]
    sols = solve_unit_equation(S, 2, F5)
    assert (t, 1 - t) in set(sols)
    assert (t, 1 - t) not in set(sols.exceptional)


def test_lambda_examples():
    assert enumerate_gr_lambdas([], 10) == []
    lams = enumerate_gr_lambdas([P(2)], 10)
    assert set(lams) == {2, -1, Fraction(1, 2)}
    D = [ReducedDivisor.affine([0, 1, INF, lam]) for lam in lams]
    assert all(divisors_equivalent(a, b) is True for a, b in itertools.product(D, repeat=2))
