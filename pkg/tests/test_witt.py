import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from flgauge.arith import PrimeContext
from flgauge.laurent import RingDescriptor, gamma
from flgauge.witt import (WittIntegralityError, WittVec, bigwitt_pth_root, divided_teichmuller,
                          frobenius_W, from_ghost, ghost, sharp_lift, structure_polynomials,
                          teich_pow_over_p, teichmuller, verify_di_matrix, verify_psi_maz,
                          verschiebung, witt_one, z_component_degrees)


def test_sum_polynomial_p2():
    sp = structure_polynomials(2, 2)
    X0, X1, Y0, Y1 = sp.gens
    assert sp.sum[1] == X1 + Y1 - X0 * Y0


def test_product_polynomials_p2():
    sp = structure_polynomials(2, 2)
    X0, X1, Y0, Y1 = sp.gens
    assert sp.prod[0] == X0 * Y0
    assert sp.prod[1] == X0 ** 2 * Y1 + X1 * Y0 ** 2 + 2 * X1 * Y1


def test_length_warning():
    with pytest.warns(UserWarning):
        structure_polynomials(5, 3)


def test_ghost_of_teichmuller_and_v():
    a = 7
    assert ghost(teichmuller(3, 3, a)) == [a, a ** 3, a ** 9]
    one = witt_one(3, 3, 0)
    assert ghost(verschiebung(one)) == [0, 3, 3]


def test_frobenius_of_teichmuller():
    R = RingDescriptor("B", 2, D=32)
    v = R.vplus()
    assert frobenius_W(teichmuller(2, 3, v)) == teichmuller(2, 2, v ** 2)


def test_integers_behave():
    x = WittVec(2, [1, 0, 0])
    # ghost (2, 2, 2) solved by hand: x0 = 2, x0^2 + 2 x1 = 2, x0^4 + 2 x1^2 + 4 x2 = 2
    assert x.scalar(2) == WittVec(2, [2, -1, -4])
    assert ghost(x.scalar(5)) == [5, 5, 5]


def test_sharp_lift():
    R = RingDescriptor("B", 2, D=32)
    assert sharp_lift(R.zero(), 3).is_zero()
    y = sharp_lift(R.vplus(), 3)
    assert y.comps[1] == R.monomial(2, Fraction(-1, 2))
    assert frobenius_W(y).is_zero()


def test_sharp_lift_needs_divided_powers():
    R = RingDescriptor("B", 2, D=32)
    with pytest.raises(WittIntegralityError):
        sharp_lift(R.const(1), 2)


def test_divided_teichmuller_p2():
    z = divided_teichmuller(2, 3).z
    R = z.comps[0].ring
    assert z.comps[0] == gamma(R, 2)
    assert z.comps[1] == gamma(R, 4) * 3
    assert z.comps[2] == R.monomial(8, Fraction(13, 128))
    assert z_component_degrees(2, 3) == [2, 4, 8]


def test_divided_teichmuller_p3():
    z = divided_teichmuller(3, 2).z
    R = z.comps[0].ring
    assert z.comps[0] == gamma(R, 3) * 2
    assert z.comps[1] == R.monomial(9, Fraction(8, 81))


def test_window_check():
    with pytest.raises(ValueError):
        divided_teichmuller(2, 3, D=4)


def test_bigwitt_coefficients():
    g = bigwitt_pth_root(2, 8).g
    R = g.coeffs[0].ring
    assert g.coeffs[1] == R.monomial(2, Fraction(-1, 2))
    assert g.coeffs[2] == R.monomial(4, Fraction(-1, 8))


@pytest.mark.parametrize("p", [2, 3])
def test_bigwitt_root(p):
    r = bigwitt_pth_root(p, 8)
    assert r.integral and r.identity


def test_bigwitt_root_of_one():
    R = RingDescriptor("B", 3, D=40)
    r = bigwitt_pth_root(3, 4, a=R.zero())
    assert all(c.is_zero() for c in r.g.coeffs[1:])


@pytest.mark.parametrize("p,n", [(2, 3), (3, 2)])
def test_psi_maz(p, n):
    assert all(c.ok for c in verify_psi_maz(p, n))


@pytest.mark.parametrize("p,n", [(2, 3), (3, 2)])
def test_di_matrix(p, n):
    assert all(c.ok for c in verify_di_matrix(p, n))


def test_teichmuller_p_identity():
    R = RingDescriptor("B", 2, D=8)
    P = teichmuller(2, 3, R.const(2))
    q = teich_pow_over_p(P, 2)
    one = witt_one(2, 3, R.one())
    assert P + verschiebung(one - q) == one.scalar(2)


def test_from_ghost_inverts_ghost():
    R = RingDescriptor("B", 3, D=40)
    x = WittVec(3, [R.g(1), R.g(-1) * 2])
    assert from_ghost(3, ghost(x)) == x


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from([(2, 1), (2, 2), (2, 3), (3, 1), (3, 2)]))
def test_ring_axioms_over_zq(seed, pn):
    p, n = pn
    ctx = PrimeContext(p, 3, 2)
    r = random.Random(seed)
    x, y, z = (WittVec(p, [ctx.random(r) for _ in range(n)]) for _ in range(3))
    assert x * (y + z) == x * y + x * z
    assert (x + y) - y == x
    assert (x * y) * z == x * (y * z)
    assert frobenius_W(verschiebung(x, keep_length=False)) == x.scalar(p)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(-20, 20), min_size=2, max_size=2),
       st.lists(st.integers(-20, 20), min_size=2, max_size=2))
def test_ghost_is_ring_map_over_z(a, b):
    x, y = WittVec(3, a), WittVec(3, b)
    assert ghost(x * y) == [u * v for u, v in zip(ghost(x), ghost(y))]
    assert ghost(x + y) == [u + v for u, v in zip(ghost(x), ghost(y))]
