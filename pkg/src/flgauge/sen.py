"""Sen operator, the nilpotent correction alpha, and the endofunctor phi -> phi o (Id - alpha).

Works with mod-p FL modules with window inside [0, p-1]. The graded pieces
gr^i = F^i / v- F^{i+1} are presented by cokernels; the fiber matrix G sends
gr coordinates to F^0 (column block i is Phi_i sigma(L_i), L_i lifting gr^i).

Convention for f > 1: alpha is applied in the sigma-twisted coordinates of
the graded pieces, i.e. the new fiber matrix is G (Id - A) where A carries the
matrix of theta-bar itself. For f = 1 there is no choice to make.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import linalg as la
from .arith import PrimeContext, Zq
from .fl import FLError, FLModule, fl_hom_ext1, fl_validate, tate_twist
from .gradmod import FPModule, GradedModule, cokernel


def _check_input(M: FLModule) -> None:
    if not M.is_mod_p() or M.ctx.N != 1:
        raise FLError("the Sen operator is defined here for modules over the residue field")
    if M.wmax > M.ctx.p - 1:
        raise FLError("window must lie in [0, p-1]")


@dataclass
class GradedFiberData:
    gr_dims: list[int]
    offsets: list[int]
    lifts: list          # L_i: F^i coordinates of gr^i generators
    projs: list          # F^i -> gr^i
    G: la.Matrix         # fiber matrix, d0 x d0


def graded_fiber_data(M: FLModule) -> GradedFiberData:
    _check_input(M)
    ctx = M.ctx
    d0 = M.pieces[0].g
    lifts, projs, dims, offs = [], [], [], []
    G = [[] for _ in range(d0)]
    pos = 0
    for i in range(M.wmax + 1):
        c = cokernel(M.base.vm(i + 1))
        lifts.append(c.lifts)
        projs.append(c.proj.matrix)
        dims.append(c.module.g)
        offs.append(pos)
        pos += c.module.g
        blk = la.matmul(ctx, M.phi[i], la.sigma(c.lifts), inner=M.pieces[i].g, ncols=c.module.g)
        for r in range(d0):
            G[r].extend(blk[r])
    if pos != d0 or la.rank_mod_p(ctx, G, ncols=pos) != d0:
        raise FLError("fiber matrix is not invertible: module fails the FL condition")
    return GradedFiberData(dims, offs, lifts, projs, G)


def sen_theta(M: FLModule) -> la.Matrix:
    """Theta = G Theta' G^{-1} with Theta' = -i on gr^i (mod p)."""
    data = graded_fiber_data(M)
    ctx = M.ctx
    d0 = len(data.G)
    if d0 == 0:
        return []
    D = la.zeros(ctx, d0, d0)
    for i, (o, n) in enumerate(zip(data.offsets, data.gr_dims)):
        for k in range(n):
            D[o + k][o + k] = ctx(-i)
    Ginv = la.inverse(ctx, data.G)
    return la.matmul(ctx, la.matmul(ctx, data.G, D), Ginv)


def theta_bar(M: FLModule, theta: la.Matrix | None = None) -> la.Matrix:
    """F^{p-1} -> F^0 -> F^0 -> F^0 / F^1 (matrix gr^0 x F^{p-1})."""
    _check_input(M)
    ctx = M.ctx
    p = ctx.p
    top = M.base.piece(p - 1)
    g0 = cokernel(M.base.vm(1))
    if top.is_zero():
        return la.zeros(ctx, g0.module.g, 0)
    if theta is None:
        theta = sen_theta(M)
    V = M.base.vm_power(p - 1).matrix
    d0 = M.pieces[0].g
    m = la.matmul(ctx, theta, V, inner=d0, ncols=top.g)
    return la.matmul(ctx, g0.proj.matrix, m, inner=d0, ncols=top.g)


def alpha(M: FLModule) -> la.Matrix:
    """Nilpotent endomorphism of (+) gr^i: the single block gr^{p-1} -> gr^0 given by theta-bar."""
    data = graded_fiber_data(M)
    ctx = M.ctx
    d0 = len(data.G)
    A = la.zeros(ctx, d0, d0)
    p = ctx.p
    if M.wmax < p - 1 or M.pieces[p - 1].is_zero():
        return A
    tb = theta_bar(M)
    # gr^{p-1} = F^{p-1}; its lifts are the generators of F^{p-1}
    L = data.lifts[p - 1]
    blk = la.matmul(ctx, tb, L, inner=M.pieces[p - 1].g, ncols=data.gr_dims[p - 1])
    o0, op = data.offsets[0], data.offsets[p - 1]
    for r in range(data.gr_dims[0]):
        for k in range(data.gr_dims[p - 1]):
            A[o0 + r][op + k] = blk[r][k]
    return A


def di_maz_endofunctor(M: FLModule, validate: bool = True) -> FLModule:
    """Same graded module, phi replaced by phi o (Id - alpha)."""
    _check_input(M)
    ctx = M.ctx
    p = ctx.p
    if M.wmax < p - 1 or M.pieces[p - 1].is_zero():
        return M
    data = graded_fiber_data(M)
    A = alpha(M)
    if la.is_zero(A):
        return M
    d0 = len(data.G)
    Gn = la.matmul(ctx, data.G, la.sub(la.identity(ctx, d0), A))
    # only the block of gr^{p-1} changes; gr^{p-1} = F^{p-1}/0 so recover Phi_{p-1} through its lifts
    op, n = data.offsets[p - 1], data.gr_dims[p - 1]
    blk = [row[op:op + n] for row in Gn]
    L = data.lifts[p - 1]
    SL = la.sigma(L)
    Linv = la.inverse(ctx, SL)
    new_top = la.matmul(ctx, blk, Linv, inner=n, ncols=M.pieces[p - 1].g)
    phi = list(M.phi[:p - 1]) + [new_top]
    out = FLModule(M.base, phi)
    if validate:
        v = fl_validate(out)
        if not v:
            raise FLError(f"endofunctor output fails validation: {v.witness}")
    return out


def char_poly_check(M: FLModule) -> bool:
    """Theta is similar to the diagonal with -i repeated dim gr^i times (exact for the mod-p matrix)."""
    data = graded_fiber_data(M)
    theta = sen_theta(M)
    ctx = M.ctx
    d0 = len(theta)
    # compare generalized kernel dimensions of Theta + i
    for i, n in enumerate(data.gr_dims):
        if n == 0:
            continue
        shifted = la.add(theta, la.scale(ctx(i), la.identity(ctx, d0)))
        power = la.identity(ctx, d0)
        for _ in range(d0):
            power = la.matmul(ctx, power, shifted)
        mult = sum(m for j, m in enumerate(data.gr_dims) if (j - i) % ctx.p == 0)
        if d0 - la.rank_mod_p(ctx, power, ncols=d0) != mult:
            return False
    return True


# ---------------------------------------------------------------------------
# the extension of k{p-1} by k{0}

def standard_extension(ctx: PrimeContext, t) -> FLModule:
    """F^0 = k e1 + k e2, F^i = k e2 (1 <= i <= p-1), phi'_0 = [[1,0],[0,0]], phi'_{p-1} = [t; 1]."""
    if ctx.N != 1:
        ctx = ctx.with_precision(1)
    p = ctx.p
    t = ctx(t)
    pieces = [FPModule(ctx, [1, 1])] + [FPModule(ctx, [1]) for _ in range(p - 1)]
    vms = [[[ctx.zero()], [ctx.one()]]] + [[[ctx.one()]] for _ in range(p - 2)]
    phi = [[[ctx.one(), ctx.zero()], [ctx.zero(), ctx.zero()]]]
    phi += [[[ctx.zero()], [ctx.zero()]] for _ in range(1, p - 1)]
    phi += [[[t], [ctx.one()]]]
    return FLModule(GradedModule(ctx, pieces, vms), phi)


def _shape_ok(M: FLModule) -> bool:
    ctx = M.ctx
    p = ctx.p
    if M.wmax != p - 1 or M.dims() != [2] + [1] * (p - 1):
        return False
    z, o = ctx.zero(), ctx.one()
    if not la.equal(M.V(1), [[z], [o]]):
        return False
    if any(not la.equal(M.V(i), [[o]]) for i in range(2, p)):
        return False
    if not la.equal(M.phi[0], [[o, z], [z, z]]):
        return False
    if any(not la.is_zero(M.phi[i]) for i in range(1, p - 1)):
        return False
    return M.phi[p - 1][1][0] == o


@dataclass
class ExtensionClass:
    t: Zq
    coords: list[int]
    splits: bool


def extension_class(M: FLModule) -> ExtensionClass:
    """Class in Ext^1(k{p-1}, k{0}) of an extension in the standard presentation."""
    _check_input(M)
    if not _shape_ok(M):
        raise FLError("wrong shape: expected the standard presentation of an extension of k{p-1} by k{0}")
    ctx = M.ctx
    p = ctx.p
    sub = tate_twist(ctx, 0, mod_p=True)
    quo = tate_twist(ctx, p - 1, mod_p=True)
    he = fl_hom_ext1(quo, sub)
    # cocycle: e1-component of phi_E(s(x)) - s(phi_Q(x)) on the generator of gr^{p-1}(k{p-1})
    cocycle = [M.phi[p - 1][0][0]]
    flat = list(cocycle[0].c)
    ctxp = PrimeContext(p, 1)
    vec = [[ctxp(x)] for x in flat]
    coords = la.matmul(ctxp, he.ext_proj, vec, inner=len(vec), ncols=1)
    coords = [r[0].c[0] for r in coords]
    t = Zq(ctx, coords) if len(coords) == ctx.f else cocycle[0]
    return ExtensionClass(t, coords, _splits(M))


def _splits(M: FLModule) -> bool:
    """Is there an FL section of E -> k{p-1}? Solved as a linear system on Hom_FL(k{p-1}, E)."""
    ctx = M.ctx
    p = ctx.p
    quo = tate_twist(ctx, p - 1, mod_p=True)
    he = fl_hom_ext1(quo, M)
    # projection E -> k{p-1} reads the e2 coordinate in F^0 and the only coordinate above
    # a section s needs (proj o s)_{p-1} = id, i.e. the F^{p-1} component equals 1
    vals = [fs[p - 1][0][0] for fs in he.hom_basis]
    # F_p-span of vals contains 1?
    ctxp = PrimeContext(p, 1)
    if not vals:
        return False
    A = [[ctxp(v.c[t]) for v in vals] for t in range(ctx.f)]
    one = [[ctxp(1 if t == 0 else 0)] for t in range(ctx.f)]
    return la.solve(ctxp, A, one, len(vals), nrhs=1) is not None
