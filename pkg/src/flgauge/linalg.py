"""Matrices over Z_q/p^N and Smith normal form over the chain ring.

Matrices are lists of rows of Zq entries. Every routine is pure and returns
fresh lists.
"""

from __future__ import annotations

import random
from typing import Sequence

from .arith import PrimeContext, Zq, unramified_frobenius

Matrix = list  # list[list[Zq]]


def zeros(ctx: PrimeContext, m: int, n: int) -> Matrix:
    z = ctx.zero()
    return [[z] * n for _ in range(m)]


def identity(ctx: PrimeContext, n: int) -> Matrix:
    out = zeros(ctx, n, n)
    one = ctx.one()
    for i in range(n):
        out[i][i] = one
    return out


def from_ints(ctx: PrimeContext, rows: Sequence[Sequence]) -> Matrix:
    return [[ctx(x) for x in row] for row in rows]


def shape(A: Matrix, ncols: int | None = None) -> tuple[int, int]:
    if not A:
        return (0, ncols or 0)
    return (len(A), len(A[0]))


def copy(A: Matrix) -> Matrix:
    return [list(r) for r in A]


def matmul(ctx: PrimeContext, A: Matrix, B: Matrix, inner: int | None = None,
           ncols: int | None = None) -> Matrix:
    """A (m x k) times B (k x n). ``ncols`` is needed when B has no rows."""
    m = len(A)
    k = len(B) if B else (inner or 0)
    n = len(B[0]) if B else (ncols or 0)
    if ctx.f == 1:
        mod = ctx.modulus
        Bi = [[x.c[0] for x in r] for r in B]
        out = []
        for i in range(m):
            ai = [x.c[0] for x in A[i]]
            row = []
            for j in range(n):
                s = 0
                for t in range(k):
                    a = ai[t]
                    if a:
                        s += a * Bi[t][j]
                row.append(Zq._raw(ctx, (s % mod,)))
            out.append(row)
        return out
    z = ctx.zero()
    out = []
    for i in range(m):
        row = []
        for j in range(n):
            s = z
            for t in range(k):
                a = A[i][t]
                if a:
                    s = s + a * B[t][j]
            row.append(s)
        out.append(row)
    return out


def add(A: Matrix, B: Matrix) -> Matrix:
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(A, B)]


def sub(A: Matrix, B: Matrix) -> Matrix:
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(A, B)]


def scale(c, A: Matrix) -> Matrix:
    return [[c * x for x in r] for r in A]


def neg(A: Matrix) -> Matrix:
    return [[-x for x in r] for r in A]


def transpose(A: Matrix, nrows_if_empty: int = 0) -> Matrix:
    if not A:
        return [[] for _ in range(nrows_if_empty)]
    return [list(col) for col in zip(*A)]


def sigma(A: Matrix) -> Matrix:
    """Entrywise Frobenius."""
    return [[unramified_frobenius(x) for x in r] for r in A]


def hstack(ctx: PrimeContext, blocks: Sequence[Matrix], nrows: int) -> Matrix:
    out = [[] for _ in range(nrows)]
    for B in blocks:
        for i in range(nrows):
            out[i].extend(B[i])
    return out


def vstack(blocks: Sequence[Matrix]) -> Matrix:
    out = []
    for B in blocks:
        out.extend(list(r) for r in B)
    return out


def block_diag(ctx: PrimeContext, blocks: Sequence[tuple[Matrix, int, int]]) -> Matrix:
    """Block-diagonal matrix from (matrix, rows, cols) triples."""
    m = sum(b[1] for b in blocks)
    n = sum(b[2] for b in blocks)
    out = zeros(ctx, m, n)
    r0 = c0 = 0
    for B, r, c in blocks:
        for i in range(r):
            for j in range(c):
                out[r0 + i][c0 + j] = B[i][j]
        r0 += r
        c0 += c
    return out


def submatrix(A: Matrix, rows: Sequence[int], cols: Sequence[int]) -> Matrix:
    return [[A[i][j] for j in cols] for i in rows]


def columns(A: Matrix, cols: Sequence[int]) -> Matrix:
    return [[r[j] for j in cols] for r in A]


def is_zero(A: Matrix) -> bool:
    return all(x.is_zero() for r in A for x in r)


def equal(A: Matrix, B: Matrix) -> bool:
    if len(A) != len(B):
        return False
    return all(len(ra) == len(rb) and all(x == y for x, y in zip(ra, rb)) for ra, rb in zip(A, B))


def reduce_rows(A: Matrix, exps: Sequence[int]) -> Matrix:
    """Reduce row k modulo p^exps[k]."""
    return [[x.reduce(e) for x in r] for r, e in zip(A, exps)]


def to_ints(A: Matrix) -> list:
    """Plain nested lists: ints for f = 1, coefficient lists otherwise."""
    return [[x.c[0] if x.ctx.f == 1 else list(x.c) for x in r] for r in A]


def random_matrix(ctx: PrimeContext, m: int, n: int, rng: random.Random) -> Matrix:
    return [[ctx.random(rng) for _ in range(n)] for _ in range(m)]


def random_invertible(ctx: PrimeContext, n: int, rng: random.Random) -> Matrix:
    """Random element of GL_n, built as a product of triangular unipotents and a unit diagonal."""
    L = identity(ctx, n)
    Uu = identity(ctx, n)
    for i in range(n):
        for j in range(i):
            L[i][j] = ctx.random(rng)
            Uu[j][i] = ctx.random(rng)
        Uu[i][i] = ctx.random(rng, unit=True)
    perm = list(range(n))
    rng.shuffle(perm)
    P = [[ctx.one() if perm[i] == j else ctx.zero() for j in range(n)] for i in range(n)]
    return matmul(ctx, P, matmul(ctx, L, Uu))


class SNF:
    """U * A * V = diag(p^e_0, p^e_1, ...) with U, V invertible.

    ``exps`` lists the diagonal exponents (N meaning a zero entry), one per
    row index up to min(m, n); rows beyond n are zero rows.
    """

    __slots__ = ("ctx", "m", "n", "U", "Uinv", "V", "Vinv", "D", "exps")

    def divisors(self) -> list[int]:
        p, N = self.ctx.p, self.ctx.N
        return [0 if e >= N else p ** e for e in self.exps]

    def row_exps(self) -> list[int]:
        """Exponent of the relation on each row of U*A*V (N when the row is zero)."""
        N = self.ctx.N
        return list(self.exps) + [N] * (self.m - len(self.exps))

    def col_exps(self) -> list[int]:
        N = self.ctx.N
        return list(self.exps) + [N] * (self.n - len(self.exps))


def smith_normal_form(ctx: PrimeContext, A: Matrix, ncols: int | None = None,
                      track: bool = True) -> SNF:
    """Chain-ring SNF pivoting on minimal valuation; divisors come out sorted."""
    m = len(A)
    n = len(A[0]) if A else (ncols or 0)
    N = ctx.N
    M = copy(A)
    if track:
        U = identity(ctx, m)
        Uinv = identity(ctx, m)
        V = identity(ctx, n)
        Vinv = identity(ctx, n)
    exps = []
    for k in range(min(m, n)):
        best = None
        bv = N
        for i in range(k, m):
            row = M[i]
            for j in range(k, n):
                x = row[j]
                if x:
                    v = x.valuation()
                    if v < bv:
                        bv, best = v, (i, j)
                        if v == 0:
                            break
            if bv == 0:
                break
        if best is None:
            exps.extend([N] * (min(m, n) - k))
            break
        i0, j0 = best
        if i0 != k:
            M[k], M[i0] = M[i0], M[k]
            if track:
                U[k], U[i0] = U[i0], U[k]
                for r in Uinv:
                    r[k], r[i0] = r[i0], r[k]
        if j0 != k:
            for r in M:
                r[k], r[j0] = r[j0], r[k]
            if track:
                for r in V:
                    r[k], r[j0] = r[j0], r[k]
                Vinv[k], Vinv[j0] = Vinv[j0], Vinv[k]
        piv = M[k][k]
        u = piv.divide_p_power(bv)
        uinv = u.inverse()
        if u != 1:
            M[k] = [uinv * x for x in M[k]]
            if track:
                U[k] = [uinv * x for x in U[k]]
                for r in Uinv:
                    r[k] = r[k] * u
        # clear column k below the pivot
        rowk = M[k]
        for i in range(k + 1, m):
            x = M[i][k]
            if x:
                q = x.divide_p_power(bv)
                M[i] = [a - q * b for a, b in zip(M[i], rowk)]
                if track:
                    U[i] = [a - q * b for a, b in zip(U[i], U[k])]
                    for r in Uinv:
                        r[k] = r[k] + q * r[i]
        # clear row k right of the pivot
        for j in range(k + 1, n):
            x = M[k][j]
            if x:
                q = x.divide_p_power(bv)
                for r in M:
                    r[j] = r[j] - q * r[k]
                if track:
                    for r in V:
                        r[j] = r[j] - q * r[k]
                    Vinv[k] = [a + q * b for a, b in zip(Vinv[k], Vinv[j])]
        exps.append(bv)
    s = SNF()
    s.ctx, s.m, s.n, s.D, s.exps = ctx, m, n, M, exps
    if track:
        s.U, s.Uinv, s.V, s.Vinv = U, Uinv, V, Vinv
    else:
        s.U = s.Uinv = s.V = s.Vinv = None
    return s


def kernel_generators(ctx: PrimeContext, B: Matrix, ncols: int) -> Matrix:
    """Columns generating {z : B z = 0 mod p^N} (returned as an ncols x K matrix)."""
    s = smith_normal_form(ctx, B, ncols=ncols)
    N = ctx.N
    p = ctx.p
    cols = []
    for k, e in enumerate(s.col_exps()):
        if e == 0:
            continue
        c = ctx(p ** (N - e))
        cols.append([c * s.V[i][k] for i in range(ncols)])
    return transpose(cols, ncols) if cols else [[] for _ in range(ncols)]


def solve(ctx: PrimeContext, B: Matrix, C: Matrix, ncols: int, row_exps: Sequence[int] | None = None,
          nrhs: int | None = None):
    """Solve B X = C where row k is read modulo p^row_exps[k]; None if unsolvable."""
    m = len(B)
    N = ctx.N
    p = ctx.p
    nr = len(C[0]) if C else (nrhs or 0)
    if row_exps is None:
        row_exps = [N] * m
    rel_cols = [k for k in range(m) if row_exps[k] < N]
    Dblk = [[ctx(p ** row_exps[i]) if (i == k) else ctx.zero() for k in rel_cols] for i in range(m)]
    BB = [list(B[i]) + Dblk[i] for i in range(m)]
    tot = ncols + len(rel_cols)
    if m == 0:
        return zeros(ctx, ncols, nr)
    s = smith_normal_form(ctx, BB, ncols=tot)
    UC = matmul(ctx, s.U, C, inner=m, ncols=nr)
    Y = zeros(ctx, tot, nr)
    re = s.row_exps()
    for k in range(m):
        e = re[k]
        for j in range(nr):
            x = UC[k][j]
            if e >= N:
                if x:
                    return None
            elif e > 0:
                if x.valuation() < e:
                    return None
                Y[k][j] = x.divide_p_power(e)
            else:
                Y[k][j] = x
    X = matmul(ctx, s.V, Y, inner=tot, ncols=nr)
    return X[:ncols]


def rank_mod_p(ctx: PrimeContext, A: Matrix, ncols: int | None = None) -> int:
    s = smith_normal_form(ctx, A, ncols=ncols, track=False)
    return sum(1 for e in s.exps if e == 0)


def inverse(ctx: PrimeContext, A: Matrix) -> Matrix:
    n = len(A)
    s = smith_normal_form(ctx, A, ncols=n)
    if any(e != 0 for e in s.exps):
        raise ValueError("matrix is not invertible")
    # A = Uinv * I * Vinv so A^-1 = V * U
    return matmul(ctx, s.V, s.U, inner=n, ncols=n)
