import random

import pytest
from hypothesis import given, settings, strategies as st

from flgauge import linalg as la
from flgauge.arith import PrimeContext


def snf_divisors(ctx, rows):
    A = la.from_ints(ctx, rows)
    return la.smith_normal_form(ctx, A).divisors()


def test_snf_diagonal():
    assert snf_divisors(PrimeContext(3, 3), [[3, 0], [0, 1]]) == [1, 3]


def test_snf_jordan_block():
    assert snf_divisors(PrimeContext(2, 3), [[2, 1], [0, 2]]) == [1, 4]


def test_snf_zero():
    assert snf_divisors(PrimeContext(3, 2), [[0, 0], [0, 0]]) == [0, 0]


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(1, 4), st.integers(1, 4),
       st.sampled_from([(2, 3, 1), (3, 2, 1), (3, 2, 2), (5, 2, 1)]))
def test_snf_factorization(seed, m, n, params):
    ctx = PrimeContext(*params)
    r = random.Random(seed)
    A = la.random_matrix(ctx, m, n, r)
    s = la.smith_normal_form(ctx, A, ncols=n)
    assert la.equal(la.matmul(ctx, la.matmul(ctx, s.U, A, ncols=n), s.V, ncols=n), s.D)
    assert la.equal(la.matmul(ctx, s.U, s.Uinv), la.identity(ctx, m))
    assert la.equal(la.matmul(ctx, s.V, s.Vinv), la.identity(ctx, n))
    assert s.exps == sorted(s.exps)


def test_inverse_roundtrip(rng):
    ctx = PrimeContext(3, 3, 2)
    for _ in range(10):
        P = la.random_invertible(ctx, 3, rng)
        assert la.equal(la.matmul(ctx, P, la.inverse(ctx, P)), la.identity(ctx, 3))


def test_kernel_generators_are_in_kernel(rng):
    ctx = PrimeContext(2, 4)
    for _ in range(20):
        B = la.random_matrix(ctx, 2, 4, rng)
        K = la.kernel_generators(ctx, B, 4)
        assert la.is_zero(la.matmul(ctx, B, K, inner=4, ncols=len(K[0]) if K and K[0] else 0))


def test_solve(rng):
    ctx = PrimeContext(3, 3)
    B = la.from_ints(ctx, [[3, 0], [0, 1]])
    X = la.solve(ctx, B, la.from_ints(ctx, [[6], [5]]), 2, nrhs=1)
    assert la.equal(la.matmul(ctx, B, X, ncols=1), la.from_ints(ctx, [[6], [5]]))
    assert la.solve(ctx, B, la.from_ints(ctx, [[1], [0]]), 2, nrhs=1) is None


def test_rank_mod_p():
    ctx = PrimeContext(3, 2)
    assert la.rank_mod_p(ctx, la.from_ints(ctx, [[3, 0], [0, 1]])) == 1
