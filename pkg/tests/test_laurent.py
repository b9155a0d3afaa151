from fractions import Fraction

import pytest

from flgauge.laurent import (A_to_B_comparison, IntegralityError, ModElement, RingDescriptor,
                             TruncationError, gamma, integrality_check, is_integral, mod_g,
                             reduce_mod, verify_pd_relations)


@pytest.fixture
def B2():
    return RingDescriptor("B", 2, D=16)


@pytest.fixture
def B3():
    return RingDescriptor("B", 3, D=16)


def test_vplus_vminus_is_p(B3):
    assert B3.vplus() * B3.vminus() == B3.const(3)


def test_g_products(B2, B3):
    assert B3.g(2) * B3.g(3) == B3.g(5)
    assert B2.g(1) * B2.g(1) == B2.g(2) * 2


@pytest.mark.parametrize("p,deg,coef,ok", [(2, 4, Fraction(1, 8), True), (3, 1, Fraction(1, 3), False),
                                           (5, 1, Fraction(1, 5), False), (3, -2, Fraction(9), True)])
def test_integrality(p, deg, coef, ok):
    x = RingDescriptor("B", p, D=8).monomial(deg, coef)
    chk = integrality_check(x)
    assert chk.ok == ok
    if not ok:
        assert chk.degree == deg


def test_vminus_squared_integral(B3):
    assert is_integral(B3.vminus(2))


def test_gamma(B2):
    assert gamma(B2, 2) == B2.monomial(2, Fraction(1, 2))
    assert gamma(B2, 2) * 2 == B2.vplus(2)
    assert gamma(B2, 0) == B2.one()
    assert gamma(B2, 2, B2.vplus()) == gamma(B2, 2)


def test_pd_relation_values():
    R2 = RingDescriptor("B", 2, D=8)
    assert R2.vminus(2) * gamma(R2, 2) == R2.const(2)
    R3 = RingDescriptor("B", 3, D=8)
    v = R3.vminus(3) * gamma(R3, 3)
    assert v == R3.const(Fraction(27, 6))
    assert gamma(R2, 4) * 6 == gamma(R2, 2) ** 2


@pytest.mark.parametrize("p", [2, 3])
def test_verify_pd_relations(p):
    assert all(c.ok for c in verify_pd_relations(p, 2, D=p * p + p))


def test_window_too_small():
    with pytest.raises(ValueError):
        verify_pd_relations(2, 3, D=6)


def test_strict_truncation():
    R = RingDescriptor("B", 2, D=3, strict=True)
    with pytest.raises(TruncationError):
        R.vplus(2) * R.vplus(2)
    loose = RingDescriptor("B", 2, D=3)
    assert (loose.vplus(2) * loose.vplus(2)).truncated


def test_reduce_mod(B2):
    assert reduce_mod(gamma(B2, 2), 1) == mod_g(2, 1, 2)
    assert reduce_mod(B2.g(1) * 2, 1).is_zero()
    assert reduce_mod(B2.vminus(), 1) == mod_g(2, 1, -1)
    with pytest.raises(IntegralityError):
        reduce_mod(B2.monomial(1, Fraction(1, 2)), 1)


def test_reduction_is_ring_map(B3):
    xs = [B3.g(i) * c for i, c in [(1, 2), (2, 1), (3, 5), (-1, 4)]]
    for x in xs:
        for y in xs:
            assert reduce_mod(x * y, 2) == reduce_mod(x, 2) * reduce_mod(y, 2)
            assert reduce_mod(x + y, 2) == reduce_mod(x, 2) + reduce_mod(y, 2)


def test_c2_relation():
    vpp = ModElement("C2", 3, 1, {3: 1})
    vm = ModElement("C2", 3, 1, {-1: 1})
    assert (vpp * vm).is_zero()
    with pytest.raises(ValueError):
        ModElement("C2", 3, 1, {1: 1})


def test_a_to_b():
    cmp = A_to_B_comparison(3, range(-2, 5))
    assert all(cmp[i] == 0 for i in range(-2, 3))
    assert cmp[3] == 1 and cmp[4] == 1
