import random

import pytest
from hypothesis import given, settings, strategies as st

from flgauge import linalg as la
from flgauge.arith import PrimeContext
from flgauge.fl import FLError, FLModule, mod_p_twist, random_mod_p_module, tate_twist, torsionfree_lift
from flgauge.gradmod import FPModule, GradedModule
from flgauge.mazsyn import (MazurModule, fl_to_mazur, mazur_validate, syn_vs_ext_crosscheck,
                            syntomic_cohomology)


def invariants(M, i):
    s = syntomic_cohomology(M, i)
    return s.H0.invariants(), s.H1.invariants()


def test_unit_weight0(ctx3):
    assert invariants(tate_twist(ctx3, 0), 0) == ((4,), (4,))


def test_unit_weight1(ctx3):
    assert invariants(tate_twist(ctx3, 0), 1) == ((), (4,))


def test_unit_p5_weight2():
    assert invariants(tate_twist(PrimeContext(5, 3), 0), 2) == ((), (3,))


def test_unit_over_w_f9():
    # sigma - 1 on W(F_9)/9 is diag(0, -2) in the basis (1, a)
    ctx = PrimeContext(3, 2, 2)
    assert invariants(tate_twist(ctx, 0), 0) == ((2,), (2,))


def test_weight_range(ctx3):
    with pytest.raises(FLError):
        syntomic_cohomology(tate_twist(ctx3, 0), 2)


def test_twist_weight_matches():
    # weight-i cohomology of W{i}: phi_i - id = 0 on a rank-one piece
    ctx = PrimeContext(5, 2)
    assert invariants(tate_twist(ctx, 2), 2) == ((2,), (2,))


def test_fl_to_mazur_small_window(rng):
    ctx = PrimeContext(3, 1)
    for _ in range(20):
        M = random_mod_p_module(ctx, rng)
        Z = fl_to_mazur(M)
        assert all(la.equal(a, b) for a, b in zip(Z.phi, M.phi))
        assert mazur_validate(Z).ok


def test_unit_to_mazur(ctx3):
    Z = fl_to_mazur(tate_twist(ctx3, 0))
    assert la.to_ints(Z.phi[0]) == [[1]]


def test_rescaling_beyond_p():
    # W{2} for p = 2: [2] = 1, so phi_2 = 2 phi'_2
    ctx = PrimeContext(2, 4)
    one = [[ctx.one()]]
    pieces = [FPModule.free(ctx, 1)] * 3
    M = FLModule(GradedModule(ctx, pieces, [one, one]), [[[ctx(4)]], [[ctx(2)]], one])
    Z = fl_to_mazur(M)
    assert [la.to_ints(P) for P in Z.phi] == [[[4]], [[2]], [[2]]]
    assert mazur_validate(Z).ok


def test_perturbed_phi_fails(ctx3):
    W1 = tate_twist(ctx3, 1)
    bad = MazurModule(W1.base, [W1.phi[0], [[W1.phi[1][0][0] + 1]]])
    v = mazur_validate(bad)
    assert not v.ok and v.failing_degree == 0


def test_zero_module_valid(k3):
    Z = MazurModule(GradedModule(k3, [FPModule.zero(k3)], []), [[]])
    assert mazur_validate(Z).ok


def test_crosscheck_examples():
    k0 = mod_p_twist(3, 0)
    a = syn_vs_ext_crosscheck(k0, 0)
    assert a.ok and a.syn == (1, 1)
    b = syn_vs_ext_crosscheck(k0, 1)
    assert b.ok and b.syn == (0, 1)


def test_crosscheck_zero_module(k3):
    Z = FLModule(GradedModule(k3, [FPModule.zero(k3)], []), [[]])
    c = syn_vs_ext_crosscheck(Z, 0)
    assert c.ok and c.syn == (0, 0)


def test_crosscheck_needs_torsion(ctx3):
    with pytest.raises(FLError):
        syn_vs_ext_crosscheck(tate_twist(ctx3, 0), 0)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from([(2, 1), (3, 1), (5, 1), (3, 2)]))
def test_crosscheck_random(seed, pf):
    p, f = pf
    r = random.Random(seed)
    M = random_mod_p_module(PrimeContext(p, 1, f), r, max_dim=3)
    for i in range(p - 1):
        assert syn_vs_ext_crosscheck(M, i).ok


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from([3, 5]))
def test_additivity(seed, p):
    r = random.Random(seed)
    ctx = PrimeContext(p, 1)
    M = torsionfree_lift(random_mod_p_module(ctx, r, max_dim=2), 2)
    M2 = torsionfree_lift(random_mod_p_module(ctx, r, max_dim=2), 2)
    S = M.direct_sum(M2)
    for i in range(p - 1):
        a, b, s = invariants(M, i), invariants(M2, i), invariants(S, i)
        assert s == (tuple(sorted(a[0] + b[0])), tuple(sorted(a[1] + b[1])))
