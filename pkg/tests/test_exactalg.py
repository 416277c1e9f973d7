from fractions import Fraction
from math import inf, prod

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import factorint
from sympy.polys.domains import GF as SymGF
from sympy.polys.galoistools import gf_irreducible_p

from dynshaf.errors import NegativeValuation
from dynshaf.exactalg import (
    QQ,
    FpPoly,
    FunctionField,
    Place,
    RatFunc,
    fp_factor,
    is_irreducible,
    monic_polys,
    reduce_at,
    s_ring_units,
    support,
    valuation,
)

F3, F5, F7 = FunctionField(3), FunctionField(5), FunctionField(7)
P2, P3, P5 = Place.prime(2), Place.prime(3), Place.prime(5)

nonzero_q = st.fractions(min_value=-10**6, max_value=10**6, max_denominator=10**4).filter(lambda x: x != 0)
small_primes = st.sampled_from([2, 3, 5, 7, 11, 13])


def fpt_elements(p, deg=4):
    poly = st.lists(st.integers(0, p - 1), min_size=1, max_size=deg + 1).map(lambda c: FpPoly(c, p))
    nonzero = poly.filter(lambda f: not f.is_zero())
    return st.builds(RatFunc, nonzero, nonzero)


def test_valuation_examples():
    assert valuation(12, P2) == 2
    assert valuation(Fraction(1, 9), P3) == -2
    assert valuation(F5.t ** 2 + F5.t, Place.infinity(5)) == -2
    assert valuation(0, P2) == inf


def test_reduce_at_examples():
    assert reduce_at(7, P5) == P5.residue_field().convert(2)
    v = Place.poly([-1, 1], 3)
    assert reduce_at(F3.t ** 2 + 1, v) == v.residue_field().convert(2)
    with pytest.raises(NegativeValuation):
        reduce_at(Fraction(1, 5), P5)


def test_s_ring_unit_examples():
    assert set(s_ring_units([P2], 1)) == {1, -1, 2, -2, Fraction(1, 2), Fraction(-1, 2)}
    assert set(s_ring_units([], 7)) == {1, -1}
    assert set(s_ring_units([], 3, F5)) == {F5.convert(c) for c in (1, 2, 3, 4)}


def test_s_units_over_function_field_have_no_valuation_outside_s():
    S = [Place.poly([0, 1], 5), Place.poly([1, 1], 5)]
    units = s_ring_units(S, 2, F5)
    outside = [Place.infinity(5), Place.poly([2, 1], 5), Place.poly([2, 0, 1], 5)]
    for u in units:
        assert all(valuation(u, v) == 0 for v in outside)


def test_place_construction_checks_primality():
    with pytest.raises(ValueError):
        Place.prime(9)
    with pytest.raises(ValueError):
        Place.poly([1, 0, 1], 5)  # t^2 + 1 = (t - 2)(t + 2) mod 5
    assert Place.poly([1, 0, 1], 3).degree == 2


def test_irreducibility_against_sympy():
    for p in (2, 3, 5):
        for deg in (1, 2, 3, 4):
            for f in monic_polys(p, deg):
                assert is_irreducible(f) == gf_irreducible_p(list(f.c[::-1]), p, SymGF(p).dom)


def test_fp_factor_reconstructs():
    f = FpPoly([3, 1, 4, 1, 5, 2, 6], 7)
    g = FpPoly((f.lc,), 7)
    for h, e in fp_factor(f):
        assert is_irreducible(h)
        g = g * h ** e
    assert g == f


def test_support_matches_factorint():
    x = Fraction(2 ** 3 * 7 * 13, 3 ** 2 * 11)
    assert [v.gen for v in support(x, QQ)] == sorted(factorint(2 ** 3 * 7 * 13 * 3 ** 2 * 11))


@given(nonzero_q, nonzero_q, small_primes)
def test_valuation_is_additive(x, y, p):
    v = Place.prime(p)
    assert valuation(x * y, v) == valuation(x, v) + valuation(y, v)


@given(nonzero_q, nonzero_q, small_primes)
def test_ultrametric_inequality(x, y, p):
    v = Place.prime(p)
    a, b = valuation(x, v), valuation(y, v)
    assert valuation(x + y, v) >= min(a, b)
    if a != b:
        assert valuation(x + y, v) == min(a, b)


@given(st.integers(-10**6, 10**6), st.integers(-10**6, 10**6), st.integers(1, 500), st.integers(1, 500), small_primes)
def test_reduction_is_multiplicative(a, b, c, d, p):
    v = Place.prime(p)
    x, y = Fraction(a, c), Fraction(b, d)
    if valuation(x, v) < 0 or valuation(y, v) < 0:
        return
    assert reduce_at(x * y, v) == reduce_at(x, v) * reduce_at(y, v)
    assert reduce_at(x + y, v) == reduce_at(x, v) + reduce_at(y, v)


@given(nonzero_q)
def test_product_of_prime_powers_recovers_absolute_value(x):
    parts = [Fraction(v.gen) ** valuation(x, v) for v in support(x, QQ)]
    assert prod(parts, start=Fraction(1)) == abs(x)


@settings(max_examples=60)
@given(fpt_elements(5), fpt_elements(5))
def test_function_field_valuations_additive_at_every_kind_of_place(x, y):
    for v in (Place.infinity(5), Place.poly([0, 1], 5), Place.poly([2, 0, 1], 5)):
        assert valuation(x * y, v) == valuation(x, v) + valuation(y, v)
        a, b = valuation(x, v), valuation(y, v)
        if x + y != 0:
            assert valuation(x + y, v) >= min(a, b)


@settings(max_examples=60)
@given(fpt_elements(3), fpt_elements(3))
def test_function_field_reduction_is_a_ring_map(x, y):
    v = Place.poly([1, 0, 1], 3)  # residue field F_9
    if valuation(x, v) < 0 or valuation(y, v) < 0:
        return
    assert reduce_at(x * y, v) == reduce_at(x, v) * reduce_at(y, v)
    assert reduce_at(x + y, v) == reduce_at(x, v) + reduce_at(y, v)


def test_product_formula_over_function_field():
    x = F7.div(F7.poly([1, 2, 3]), F7.poly([0, 0, 1, 5]))
    places = set(support(x, F7)) | {Place.infinity(7)}
    assert sum(valuation(x, v) * v.degree for v in places) == 0


def test_rational_functions_are_stored_reduced():
    a = F5.poly([0, 1]) * F5.poly([1, 1])
    b = F5.poly([0, 2])
    q = a / b
    assert q.den == FpPoly((1,), 5)
    assert q.num == FpPoly((3, 3), 5)  # (t + 1) / 2
