"""Mazur modules and syntomic cohomology in weights 0..p-2."""

from __future__ import annotations

from dataclasses import dataclass

from . import linalg as la
from .arith import PrimeContext, Zq, pd_exponent, unramified_frobenius
from .fl import FLError, FLModule, fl_hom_ext1, tate_twist
from .gradmod import FPModule, GradedModule, ModuleMap, two_term_homology


class MazurModule:
    """Effective graded module with semilinear phi_i: F^i -> F^0, phi_i(x) = Phi_i sigma(x)."""

    def __init__(self, base: GradedModule, phi):
        self.base = base
        self.ctx = base.ctx
        F0 = base.pieces[0]
        self.phi = [ModuleMap(base.pieces[i], F0, P).matrix for i, P in enumerate(phi)]

    @property
    def wmax(self) -> int:
        return self.base.wmax

    @property
    def pieces(self):
        return self.base.pieces

    def Phi(self, i: int):
        return self.phi[i]

    def __eq__(self, other):
        return (isinstance(other, MazurModule) and self.base == other.base
                and all(la.equal(a, b) for a, b in zip(self.phi, other.phi)))


def fl_to_mazur(M: FLModule) -> MazurModule:
    """phi_i = p^{i - [i]} phi'_i."""
    ctx = M.ctx
    p = ctx.p
    phi = [la.scale(ctx(p ** (i - pd_exponent(p, i))), M.phi[i]) for i in range(M.wmax + 1)]
    return MazurModule(M.base, phi)


@dataclass
class MazurVerdict:
    ok: bool
    failing_degree: int | None = None

    def __bool__(self):
        return self.ok


def mazur_validate(M: MazurModule) -> MazurVerdict:
    """p^{[i+1]-[i]} phi_{i+1} = phi_i o v- in every degree."""
    ctx = M.ctx
    p = ctx.p
    exps0 = M.pieces[0].exps
    for i in range(M.wmax):
        c = ctx(p ** (pd_exponent(p, i + 1) - pd_exponent(p, i)))
        lhs = la.scale(c, M.phi[i + 1])
        rhs = la.matmul(ctx, M.phi[i], la.sigma(M.base.vm(i + 1).matrix),
                        inner=M.pieces[i].g, ncols=M.pieces[i + 1].g)
        if not la.equal(la.reduce_rows(lhs, exps0), la.reduce_rows(rhs, exps0)):
            return MazurVerdict(False, i)
    return MazurVerdict(True)


def _restrict_scalars_module(M: FPModule, ctxp: PrimeContext) -> FPModule:
    f = M.ctx.f
    return FPModule(ctxp, [e for e in M.exps for _ in range(f)])


def _restrict_scalars_semilinear(ctx: PrimeContext, A, B, src: FPModule, tgt: FPModule,
                                 ctxp: PrimeContext) -> ModuleMap:
    """Z_p-matrix of x -> A sigma(x) + B x."""
    f = ctx.f
    basis = [Zq(ctx, [1 if s == t else 0 for s in range(f)]) for t in range(f)]
    cols = []
    for j in range(src.g):
        for b in basis:
            sb = unramified_frobenius(b)
            col = []
            for r in range(tgt.g):
                y = A[r][j] * sb + B[r][j] * b
                col.extend(y.c)
            cols.append(col)
    S = _restrict_scalars_module(src, ctxp)
    T = _restrict_scalars_module(tgt, ctxp)
    mat = [[ctxp(cols[j][i]) for j in range(len(cols))] for i in range(T.g)]
    return ModuleMap(S, T, mat, check=False)


@dataclass
class SyntomicResult:
    H0: FPModule
    H1: FPModule
    n_determined: bool

    def divisors(self):
        return self.H0.divisors(), self.H1.divisors()


def syntomic_differential(M, i: int) -> ModuleMap:
    """phi_i - v-^i: F^i -> F^0, as a Z_p-linear map (restriction of scalars when f > 1)."""
    ctx = M.ctx
    p = ctx.p
    if i < 0 or i > p - 2:
        raise FLError(f"weight {i} outside [0, {p - 2}]")
    F0 = M.pieces[0]
    Fi = M.base.piece(i)
    if i > M.wmax:
        Phi = la.zeros(ctx, F0.g, 0)
    else:
        Phi = M.phi[i]
    V = M.base.vm_power(i).matrix if i <= M.wmax else la.zeros(ctx, F0.g, 0)
    if ctx.f == 1:
        return ModuleMap(Fi, F0, la.sub(Phi, V), check=False)
    ctxp = PrimeContext(p, ctx.N)
    return _restrict_scalars_semilinear(ctx, Phi, la.neg(V), Fi, F0, ctxp)


def syntomic_cohomology(M, i: int) -> SyntomicResult:
    """(H0, H1) of F^i -> F^0 with differential phi_i - v-^i, over Z_p/p^N."""
    d = syntomic_differential(M, i)
    H0, H1 = two_term_homology(d)
    nd = all(P.is_torsion() for P in M.pieces) or all(P.is_free() for P in M.pieces)
    return SyntomicResult(H0, H1, nd)


@dataclass
class CrosscheckResult:
    ok: bool
    syn: tuple[int, int]
    fl: tuple[int, int]

    def __bool__(self):
        return self.ok


def syn_vs_ext_crosscheck(M: FLModule, i: int) -> CrosscheckResult:
    """Compare F_p-dimensions of syntomic (H0, H1) with (Hom, Ext^1)(k{i}, M)."""
    if not M.is_mod_p():
        raise FLError("crosscheck needs a module killed by p")
    p = M.ctx.p
    if i < 0 or i > p - 2:
        raise FLError(f"weight {i} outside [0, {p - 2}]")
    s = syntomic_cohomology(M, i)
    unit = tate_twist(M.ctx, i, mod_p=True)
    he = fl_hom_ext1(unit, M)
    syn = (s.H0.length(), s.H1.length())
    fl = (he.hom_dim, he.ext1_dim)
    return CrosscheckResult(syn == fl, syn, fl)
