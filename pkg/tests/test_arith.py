import random

import pytest
from hypothesis import given, settings, strategies as st

from flgauge.arith import (ArithError, MazurTable, NonUnitError, PrimeContext, Zq, default_minpoly,
                           digit_sum, is_irreducible_mod_p, mazur_number, pd_exponent,
                           sigma_power, unramified_frobenius, vp_int)


@pytest.mark.parametrize("p,n,expected", [(3, 1, 1), (3, 4, 3), (2, 5, 1), (5, 4, 4), (7, 6, 6)])
def test_mazur_number_values(p, n, expected):
    assert mazur_number(p, n) == expected


def test_mazur_table_p3():
    assert [MazurTable(3, 4)[n] for n in range(1, 5)] == [1, 2, 2, 3]


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_mazur_table_invariants(p):
    assert MazurTable(p, 64).check()


def test_mazur_number_rejects_bad_input():
    with pytest.raises(ArithError):
        mazur_number(4, 2)
    with pytest.raises(ArithError):
        mazur_number(3, 0)


@pytest.mark.parametrize("p,i,expected", [(5, 2, 2), (2, 4, 1), (3, -3, 0), (2, 0, 0)])
def test_pd_exponent(p, i, expected):
    assert pd_exponent(p, i) == expected


def test_vp_and_digit_sum():
    assert vp_int(18, 3) == 2
    assert vp_int(0, 3, cap=5) == 5
    assert digit_sum(8, 2) == 1
    assert digit_sum(40, 3) == 4


def test_inverse_mod_9():
    ctx = PrimeContext(3, 2)
    assert ctx(4).inverse() == ctx(7)


def test_valuation():
    ctx = PrimeContext(3, 3)
    assert ctx(18).valuation() == 2
    assert ctx(0).valuation() == 3


def test_non_unit_inverse_raises():
    with pytest.raises(NonUnitError):
        PrimeContext(3, 2)(3).inverse()


def test_f4_product(f4):
    a = f4.gen()
    assert a * (a + 1) == f4(15)


def test_f4_frobenius(f4):
    a = f4.gen()
    assert unramified_frobenius(a) == -1 - a
    assert unramified_frobenius(unramified_frobenius(a)) == a


def test_frobenius_trivial_for_f1(rng):
    ctx = PrimeContext(5, 3)
    for _ in range(20):
        x = ctx.random(rng)
        assert unramified_frobenius(x) == x


def test_sigma_involution_f2(f4, rng):
    for _ in range(50):
        x = f4.random(rng)
        assert sigma_power(x, 2) == x


def test_frobenius_is_ring_map_f3(rng):
    ctx = PrimeContext(2, 5, 3)
    for _ in range(20):
        x, y = ctx.random(rng), ctx.random(rng)
        assert unramified_frobenius(x * y) == unramified_frobenius(x) * unramified_frobenius(y)
        assert unramified_frobenius(x + y) == unramified_frobenius(x) + unramified_frobenius(y)
        assert (unramified_frobenius(x) - x ** 2).reduce(1).is_zero()


def test_minpoly_choice():
    assert default_minpoly(3, 2) == (1, 0, 1)
    assert is_irreducible_mod_p((1, 1, 0, 1), 2)
    assert not is_irreducible_mod_p((1, 0, 1), 2)


def test_reducible_minpoly_rejected():
    with pytest.raises(ArithError):
        PrimeContext(2, 3, 2, (1, 0, 1))


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([(2, 4, 2), (3, 3, 2), (5, 2, 1), (3, 2, 3)]), st.integers(0, 10 ** 6))
def test_ring_axioms(params, seed):
    ctx = PrimeContext(*params)
    r = random.Random(seed)
    x, y, z = ctx.random(r), ctx.random(r), ctx.random(r)
    assert x * (y + z) == x * y + x * z
    assert (x * y) * z == x * (y * z)
    assert x + y == y + x
    u = ctx.random(r, unit=True)
    assert u * u.inverse() == ctx.one()
