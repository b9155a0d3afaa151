import random

import pytest
from hypothesis import given, settings, strategies as st

from flgauge import linalg as la
from flgauge.arith import PrimeContext
from flgauge.fl import (FLError, FLModule, FLMorphism, fl_cokernel, fl_hom_ext1, fl_kernel,
                        fl_validate, graded_dims_of_fiber, mod_p_twist, random_mod_p_module,
                        random_morphism, scalar_morphism, tate_twist, torsionfree_lift, twist,
                        zero_morphism)
from flgauge.gradmod import FPModule, GradedModule, NotNDetermined, weight_window_check
from flgauge.sen import extension_class, standard_extension


def line_module(ctx, vm, phis):
    """Rank-one pieces in degrees 0..len(phis)-1."""
    n = len(phis)
    pieces = [FPModule.free(ctx, 1)] * n
    return FLModule(GradedModule(ctx, pieces, [[[ctx(v)]] for v in vm]), [[[ctx(x)]] for x in phis])


@pytest.mark.parametrize("j", [0, 1, 2])
def test_tate_twists_valid(ctx3, j):
    W = tate_twist(ctx3, j)
    assert fl_validate(W).ok
    assert weight_window_check(W.base) == (j, j)


def test_tate_twist_range(ctx3):
    with pytest.raises(FLError):
        tate_twist(ctx3, 3)


def test_phi_span_failure(k3):
    M = line_module(k3, [], [0])
    v = fl_validate(M)
    assert not v.ok and v.witness == "Σ im(φ_i) ≠ F^0"


def test_split_injection_failure(k3):
    M = line_module(k3, [0], [1, 0])
    v = fl_validate(M)
    assert not v.ok and "split injection" in v.witness


def test_compatibility_failure(ctx3):
    M = line_module(ctx3, [1], [1, 1])
    v = fl_validate(M)
    assert not v.ok and v.witness == "compatibility fails in degree 1"


def test_mixed_precision_refused():
    ctx = PrimeContext(3, 2)
    pieces = [FPModule(ctx, [2, 1])]
    M = FLModule(GradedModule(ctx, pieces, []), [la.identity(ctx, 2)])
    with pytest.raises(NotNDetermined):
        fl_validate(M)


def test_twist(ctx3):
    assert twist(tate_twist(ctx3, 0), 1) == tate_twist(ctx3, 1)
    M = tate_twist(ctx3, 0).direct_sum(tate_twist(ctx3, 1))
    assert twist(M, 0) == M
    a, b = weight_window_check(M.base)
    assert weight_window_check(twist(M, 1).base) == (a + 1, b + 1)


def test_kernel_cokernel_of_zero(ctx3):
    W = tate_twist(ctx3, 1)
    z = zero_morphism(W, W)
    assert fl_kernel(z) == W
    assert fl_cokernel(z) == W


def test_cokernel_of_p(ctx3):
    C = fl_cokernel(scalar_morphism(tate_twist(ctx3, 0), 3))
    assert C.pieces[0].invariants() == (1,)
    assert C.reduce_mod_p() == mod_p_twist(3, 0)


def test_kernel_of_projection(ctx3):
    W0, W1 = tate_twist(ctx3, 0), tate_twist(ctx3, 1)
    S = W0.direct_sum(W1)
    proj = FLMorphism(S, W1, [[[ctx3(0), ctx3(1)]], [[ctx3(1)]]])
    assert proj.check() == []
    K = fl_kernel(proj)
    assert K.trimmed() == W0


def test_hom_ext_values():
    k0, k1, k2 = (mod_p_twist(3, j) for j in range(3))
    assert fl_hom_ext1(k0, k0).k_dims() == (1, 1)
    assert fl_hom_ext1(k2, k0).k_dims() == (0, 1)
    assert fl_hom_ext1(k0, k1).k_dims() == (0, 0)
    assert fl_hom_ext1(k1, k0).k_dims() == (0, 1)


def test_hom_ext_over_f9():
    k0 = mod_p_twist(3, 0, f=2)
    he = fl_hom_ext1(k0, k0)
    assert (he.hom_dim, he.ext1_dim) == (1, 1)


def test_hom_rejects_torsion_free(ctx3):
    with pytest.raises(FLError):
        fl_hom_ext1(tate_twist(ctx3, 0), tate_twist(ctx3, 0))


def test_lift_of_twist():
    for j in range(3):
        L = torsionfree_lift(mod_p_twist(3, j), 3)
        assert fl_validate(L).ok
        assert L.reduce_mod_p() == mod_p_twist(3, j)
        assert all(P.is_free() for P in L.pieces)


def test_lift_of_extension(k3):
    E = standard_extension(k3, 1)
    L = torsionfree_lift(E, 2)
    assert L.pieces[0].invariants() == (2, 2)
    assert extension_class(L.reduce_mod_p()).coords == [1]


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from([(2, 1), (3, 1), (5, 1), (3, 2)]))
def test_random_modules(seed, pf):
    p, f = pf
    ctx = PrimeContext(p, 1, f)
    r = random.Random(seed)
    M = random_mod_p_module(ctx, r, max_dim=4)
    v = fl_validate(M)
    assert v.ok
    assert all(v.diagnostics[f"Hminus1_zero_at_{a}"] for a in (0, 1, p))
    assert graded_dims_of_fiber(M, 0) == graded_dims_of_fiber(M, 1)
    assert torsionfree_lift(M, 2).reduce_mod_p() == M


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from([2, 3, 5]))
def test_random_morphisms(seed, p):
    r = random.Random(seed)
    f = random_morphism(PrimeContext(p, 1), r)
    assert f.check() == []
    K, C = fl_kernel(f), fl_cokernel(f)
    # graded lengths: dim S - dim K = dim T - dim C in every degree
    for i in range(f.w + 1):
        assert f.source.pieces[i].g - K.pieces[i].g == f.target.pieces[i].g - C.pieces[i].g


def test_exactness_bookkeeping(k3):
    # 0 -> k{0} -> E -> k{2} -> 0 with the standard extension
    E = standard_extension(k3, 1)
    k0, k2 = mod_p_twist(3, 0), mod_p_twist(3, 2)
    one, zero = k3.one(), k3.zero()
    inc = FLMorphism(k0, E, [[[one], [zero]], [[]], [[]]])
    proj = FLMorphism(E, k2, [[[zero, one]], [[one]], [[one]]])
    assert inc.check() == [] and proj.check() == []
    assert fl_kernel(proj).trimmed() == k0
    assert fl_cokernel(inc) == k2
