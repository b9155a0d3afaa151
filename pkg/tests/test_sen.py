import random

import pytest
from hypothesis import given, settings, strategies as st

from flgauge import linalg as la
from flgauge.arith import PrimeContext
from flgauge.fl import FLError, fl_validate, mod_p_twist, random_mod_p_module, tate_twist
from flgauge.sen import (alpha, char_poly_check, di_maz_endofunctor, extension_class, sen_theta,
                         standard_extension, theta_bar)


def test_theta_of_unit():
    assert la.to_ints(sen_theta(mod_p_twist(3, 0))) == [[0]]


def test_theta_of_split_sum():
    M = mod_p_twist(5, 0).direct_sum(mod_p_twist(5, 2)).direct_sum(mod_p_twist(5, 3))
    assert la.to_ints(sen_theta(M)) == [[0, 0, 0], [0, 3, 0], [0, 0, 2]]


@pytest.mark.parametrize("t", [0, 1, 2])
def test_theta_of_extension(k3, t):
    assert la.to_ints(sen_theta(standard_extension(k3, t))) == [[0, t], [0, 1]]


@pytest.mark.parametrize("t", [1, 2])
def test_alpha_of_extension(k3, t):
    E = standard_extension(k3, t)
    assert la.to_ints(theta_bar(E)) == [[t]]
    # gr coordinates: (gr^0 = e1-bar, gr^1 = 0, gr^2 = e2); alpha(e2) = t e1-bar
    assert la.to_ints(alpha(E)) == [[0, t], [0, 0]]


def test_alpha_vanishes_below_top(k3, rng):
    for _ in range(20):
        M = random_mod_p_module(k3, rng, wmax=1)
        assert la.is_zero(alpha(M))


@pytest.mark.parametrize("p", [3, 5])
def test_extension_becomes_split(p):
    ctx = PrimeContext(p, 1)
    split = standard_extension(ctx, 0)
    for t in range(p):
        out = di_maz_endofunctor(standard_extension(ctx, t))
        assert out == split
        assert la.to_ints(out.phi[p - 1]) == [[0], [1]]


def test_extension_over_f9(rng):
    ctx = PrimeContext(3, 1, 2)
    for _ in range(20):
        t = ctx.random(rng)
        E = standard_extension(ctx, t)
        ec = extension_class(E)
        assert ec.t == t and ec.splits == t.is_zero()
        after = extension_class(di_maz_endofunctor(E))
        assert not any(after.coords) and after.splits


def test_extension_class_values(k3):
    assert extension_class(standard_extension(k3, 0)).coords == [0]
    c = extension_class(standard_extension(k3, 2))
    assert c.coords == [2] and not c.splits


def test_wrong_shape_rejected(k3):
    with pytest.raises(FLError, match="wrong shape"):
        extension_class(mod_p_twist(3, 2).direct_sum(mod_p_twist(3, 0)))


def test_needs_mod_p(ctx3):
    with pytest.raises(FLError):
        sen_theta(tate_twist(ctx3, 0))


@pytest.mark.parametrize("p", [3, 5])
def test_identity_below_top_weight(p, rng):
    ctx = PrimeContext(p, 1)
    for _ in range(30):
        M = random_mod_p_module(ctx, rng, wmax=rng.randint(0, p - 2))
        assert di_maz_endofunctor(M) is M


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from([(3, 1), (5, 1), (3, 2)]))
def test_idempotent_on_extension_family(seed, pf):
    p, f = pf
    r = random.Random(seed)
    ctx = PrimeContext(p, 1, f)
    E = standard_extension(ctx, ctx.random(r))
    low = random_mod_p_module(ctx, r, wmax=p - 2, max_dim=2)
    M = E.direct_sum(low)
    once = di_maz_endofunctor(M)
    assert di_maz_endofunctor(once) == once


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from([(3, 1), (5, 1), (3, 2), (5, 2)]))
def test_random_top_weight(seed, pf):
    p, f = pf
    r = random.Random(seed)
    ctx = PrimeContext(p, 1, f)
    M = random_mod_p_module(ctx, r, wmax=p - 1, max_dim=3)
    A = alpha(M)
    assert la.is_zero(la.matmul(ctx, A, A))
    assert char_poly_check(M)
    assert fl_validate(di_maz_endofunctor(M)).ok
