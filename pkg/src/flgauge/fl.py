"""Fontaine-Laffaille modules: validation, kernels, cokernels, Hom/Ext^1, twists, lifts.

An FLModule is an effective GradedModule F^0 <- F^1 <- ... <- F^w together with
sigma-semilinear maps phi'_i: F^i -> F^0 stored as matrices Phi_i, acting by
x -> Phi_i sigma(x). Compatibility reads Phi_{i-1} sigma(V_i) = p Phi_i.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Sequence

from . import linalg as la
from .arith import PrimeContext, Zq
from .gradmod import (FPModule, GradedModule, ModuleMap, NotNDetermined, cokernel, cokernel_of_matrix,
                      graded_fiber, induced_on_cokernels, kernel, lift_through)


class FLError(ValueError):
    pass


class FLModule:
    def __init__(self, base: GradedModule, phi: Sequence[la.Matrix]):
        if len(phi) != base.wmax + 1:
            raise FLError(f"need {base.wmax + 1} phi matrices, got {len(phi)}")
        self.base = base
        self.ctx = base.ctx
        F0 = base.pieces[0]
        mats = []
        for i, P in enumerate(phi):
            Fi = base.pieces[i]
            if len(P) != F0.g or any(len(r) != Fi.g for r in P):
                raise FLError(f"phi {i}: matrix shape does not match pieces ({F0.g}x{Fi.g} expected)")
            mats.append(ModuleMap(Fi, F0, P).matrix)
        self.phi = mats

    @property
    def wmax(self) -> int:
        return self.base.wmax

    @property
    def pieces(self) -> list[FPModule]:
        return self.base.pieces

    def V(self, i: int) -> la.Matrix:
        return self.base.vm(i).matrix

    def Phi(self, i: int) -> la.Matrix:
        if i > self.wmax:
            return la.zeros(self.ctx, self.pieces[0].g, 0)
        return self.phi[i]

    def is_mod_p(self) -> bool:
        return all(e == 1 for P in self.pieces for e in P.exps)

    def __eq__(self, other):
        return (isinstance(other, FLModule) and self.base == other.base
                and all(la.equal(a, b) for a, b in zip(self.phi, other.phi)))

    def __repr__(self):
        dims = [P.exps for P in self.pieces]
        return f"FLModule(p={self.ctx.p}, pieces={dims})"

    def dims(self) -> list[int]:
        return [P.g for P in self.pieces]

    def padded(self, w: int) -> "FLModule":
        """Same module viewed in the window [0, w] (zero pieces appended)."""
        if w <= self.wmax:
            return self
        ctx = self.ctx
        pieces = list(self.pieces) + [FPModule.zero(ctx)] * (w - self.wmax)
        vms = [self.base.vm(i).matrix for i in range(1, self.wmax + 1)]
        vms += [la.zeros(ctx, pieces[i - 1].g, 0) for i in range(self.wmax + 1, w + 1)]
        phi = list(self.phi) + [la.zeros(ctx, pieces[0].g, 0) for _ in range(w - self.wmax)]
        return FLModule(GradedModule(ctx, pieces, vms), phi)

    def trimmed(self) -> "FLModule":
        """Drop zero pieces at the top of the window."""
        w = self.wmax
        while w > 0 and self.pieces[w].is_zero():
            w -= 1
        if w == self.wmax:
            return self
        return FLModule(GradedModule(self.ctx, self.pieces[:w + 1],
                                     [self.base.vm(i) for i in range(1, w + 1)]), self.phi[:w + 1])

    def direct_sum(self, other: "FLModule") -> "FLModule":
        w = max(self.wmax, other.wmax)
        a, b = self.padded(w), other.padded(w)
        base = a.base.direct_sum(b.base)
        phi = [la.block_diag(self.ctx, [(a.phi[i], a.pieces[0].g, a.pieces[i].g),
                                         (b.phi[i], b.pieces[0].g, b.pieces[i].g)]) for i in range(w + 1)]
        return FLModule(base, phi)

    def change_coordinates(self, P: Sequence[la.Matrix]) -> "FLModule":
        """Transport along x = P_i x' in each degree."""
        ctx = self.ctx
        Pinv = [la.inverse(ctx, Pi) if Pi else [] for Pi in P]
        vms = []
        for i in range(1, self.wmax + 1):
            m = la.matmul(ctx, self.V(i), P[i], inner=self.pieces[i].g, ncols=self.pieces[i].g)
            vms.append(la.matmul(ctx, Pinv[i - 1], m, inner=self.pieces[i - 1].g, ncols=self.pieces[i].g)
                       if self.pieces[i - 1].g else [])
        phi = []
        g0 = self.pieces[0].g
        for i in range(self.wmax + 1):
            m = la.matmul(ctx, self.phi[i], la.sigma(P[i]), inner=self.pieces[i].g, ncols=self.pieces[i].g)
            phi.append(la.matmul(ctx, Pinv[0], m, inner=g0, ncols=self.pieces[i].g) if g0 else [])
        return FLModule(GradedModule(ctx, self.pieces, vms), phi)

    def reduce_mod_p(self) -> "FLModule":
        """Reduction to the residue field (precision 1)."""
        ctx1 = self.ctx.with_precision(1)
        pieces = [FPModule(ctx1, [1] * P.g) for P in self.pieces]
        conv = lambda A: [[Zq(ctx1, x.c) for x in r] for r in A]
        vms = [conv(self.V(i)) for i in range(1, self.wmax + 1)]
        return FLModule(GradedModule(ctx1, pieces, vms), [conv(P) for P in self.phi])


# ---------------------------------------------------------------------------
# validation

@dataclass
class Verdict:
    ok: bool
    witness: str = ""
    diagnostics: dict = field(default_factory=dict)

    def __bool__(self):
        return self.ok


def compatibility_failures(M: FLModule) -> list[int]:
    ctx = M.ctx
    bad = []
    for i in range(1, M.wmax + 1):
        lhs = la.matmul(ctx, M.phi[i - 1], la.sigma(M.V(i)), inner=M.pieces[i - 1].g, ncols=M.pieces[i].g)
        rhs = la.scale(ctx(ctx.p), M.phi[i])
        if not la.equal(la.reduce_rows(lhs, M.pieces[0].exps), la.reduce_rows(rhs, M.pieces[0].exps)):
            bad.append(i)
    return bad


def total_phi(M: FLModule) -> la.Matrix:
    """Phi_total: (+)_i F^i -> F^0."""
    ctx = M.ctx
    return la.hstack(ctx, [M.phi[i] for i in range(M.wmax + 1)], M.pieces[0].g)


def fiber_map(M: FLModule, a=None):
    """(fiber at a, matrix of the semilinear map H0 -> F^0 induced by Phi_total)."""
    ctx = M.ctx
    if a is None:
        a = ctx.p
    fib = graded_fiber(M.base, a)
    L = fib.H0.lifts
    tot = sum(P.g for P in M.pieces)
    G = la.matmul(ctx, total_phi(M), la.sigma(L), inner=tot, ncols=fib.H0.module.g)
    return fib, G


def fl_validate(M: FLModule, certify: bool = True) -> Verdict:
    ctx = M.ctx
    diag: dict = {}
    bad = compatibility_failures(M)
    diag["compatibility_failures"] = bad
    for a in (0, 1, ctx.p):
        fib = graded_fiber(M.base, a)
        diag[f"Hminus1_zero_at_{a}"] = fib.Hminus1.module.is_zero()
    if bad:
        return Verdict(False, f"compatibility fails in degree {bad[0]}", diag)
    all_pieces = M.pieces
    torsion = all(P.is_torsion() for P in all_pieces)
    free = all(P.is_free() for P in all_pieces)
    diag["n_determined"] = torsion or free
    if M.is_mod_p() or (ctx.N == 1):
        inj = all(kernel(M.base.vm(i)).module.is_zero() for i in range(1, M.wmax + 1))
        g0 = M.pieces[0].g
        span = la.rank_mod_p(ctx, total_phi(M), ncols=sum(P.g for P in all_pieces)) if g0 else 0
        diag["vminus_injective"] = inj
        diag["phi_images_span"] = span == g0
        if not inj:
            return Verdict(False, "split injection fails: v- is not injective", diag)
        if span != g0:
            return Verdict(False, "Σ im(φ_i) ≠ F^0", diag)
    if certify and not (torsion or free):
        raise NotNDetermined("pieces mix free and torsion summands; precision cannot certify the fiber map")
    fib, G = fiber_map(M)
    H0 = fib.H0.module
    F0 = M.pieces[0]
    f = ModuleMap(H0, F0, G, check=False)
    if H0.invariants() != F0.invariants():
        return Verdict(False, "fiber at v- = p is not isomorphic to F^0", diag)
    iso = cokernel(f).module.is_zero()
    diag["fiber_iso"] = iso
    if not iso:
        return Verdict(False, "fiber map is not an isomorphism", diag)
    return Verdict(True, "", diag)


# ---------------------------------------------------------------------------
# morphisms, kernels, cokernels

class FLMorphism:
    def __init__(self, source: FLModule, target: FLModule, maps: Sequence[la.Matrix]):
        w = max(source.wmax, target.wmax)
        self.source = source.padded(w)
        self.target = target.padded(w)
        if len(maps) < w + 1:
            ctx = source.ctx
            maps = list(maps) + [la.zeros(ctx, self.target.pieces[i].g, self.source.pieces[i].g)
                                 for i in range(len(maps), w + 1)]
        self.maps = [ModuleMap(self.source.pieces[i], self.target.pieces[i], m).matrix
                     for i, m in enumerate(maps)]

    @property
    def w(self) -> int:
        return self.source.wmax

    def map(self, i: int) -> ModuleMap:
        return ModuleMap(self.source.pieces[i], self.target.pieces[i], self.maps[i], check=False)

    def check(self) -> list[str]:
        ctx = self.source.ctx
        S, T = self.source, self.target
        errs = []
        for i in range(1, self.w + 1):
            a = self.map(i - 1).compose(S.base.vm(i))
            b = T.base.vm(i).compose(self.map(i))
            if a != b:
                errs.append(f"v- commutation fails in degree {i}")
        for i in range(self.w + 1):
            g0 = T.pieces[0].g
            lhs = la.matmul(ctx, self.maps[0], S.phi[i], inner=S.pieces[0].g, ncols=S.pieces[i].g)
            rhs = la.matmul(ctx, T.phi[i], la.sigma(self.maps[i]), inner=T.pieces[i].g, ncols=S.pieces[i].g)
            if not la.equal(la.reduce_rows(lhs, T.pieces[0].exps), la.reduce_rows(rhs, T.pieces[0].exps)):
                errs.append(f"phi commutation fails in degree {i}")
        return errs


def fl_kernel(f: FLMorphism, validate: bool = True) -> FLModule:
    ctx = f.source.ctx
    S = f.source
    ks = [kernel(f.map(i)) for i in range(f.w + 1)]
    pieces = [k.module for k in ks]
    vms = []
    for i in range(1, f.w + 1):
        h = lift_through(ks[i - 1].incl, S.base.vm(i).compose(ks[i].incl))
        vms.append(h.matrix)
    phi = []
    for i in range(f.w + 1):
        img = la.matmul(ctx, S.phi[i], la.sigma(ks[i].incl.matrix), inner=S.pieces[i].g, ncols=pieces[i].g)
        h = lift_through(ks[0].incl, ModuleMap(pieces[i], S.pieces[0], img, check=False))
        if h is None:
            raise FLError(f"phi_{i} does not preserve the kernel")
        phi.append(h.matrix)
    K = FLModule(GradedModule(ctx, pieces, vms), phi)
    if validate:
        v = fl_validate(K)
        if not v:
            raise FLError(f"kernel fails validation: {v.witness}")
    return K


def fl_cokernel(f: FLMorphism, validate: bool = True) -> FLModule:
    ctx = f.source.ctx
    T = f.target
    cs = [cokernel(f.map(i)) for i in range(f.w + 1)]
    pieces = [c.module for c in cs]
    vms = [induced_on_cokernels(cs[i], cs[i - 1], T.V(i)).matrix for i in range(1, f.w + 1)]
    phi = []
    for i in range(f.w + 1):
        m = la.matmul(ctx, T.phi[i], la.sigma(cs[i].lifts), inner=T.pieces[i].g, ncols=pieces[i].g)
        phi.append(la.matmul(ctx, cs[0].proj.matrix, m, inner=T.pieces[0].g, ncols=pieces[i].g))
    C = FLModule(GradedModule(ctx, pieces, vms), phi)
    if validate:
        v = fl_validate(C)
        if not v:
            raise FLError(f"cokernel fails validation: {v.witness}")
    return C


def zero_morphism(S: FLModule, T: FLModule) -> FLMorphism:
    w = max(S.wmax, T.wmax)
    S2, T2 = S.padded(w), T.padded(w)
    return FLMorphism(S2, T2, [la.zeros(S.ctx, T2.pieces[i].g, S2.pieces[i].g) for i in range(w + 1)])


def scalar_morphism(M: FLModule, c: int) -> FLMorphism:
    ctx = M.ctx
    return FLMorphism(M, M, [la.scale(ctx(c), la.identity(ctx, P.g)) for P in M.pieces])


# ---------------------------------------------------------------------------
# Tate twists

def unit_module(ctx: PrimeContext) -> FLModule:
    return tate_twist(ctx, 0)


def tate_twist(ctx: PrimeContext, j: int, u: Zq | int = 1, mod_p: bool = False) -> FLModule:
    """W{j} (or k{j} with mod_p): F^i = W for i <= j, v- = id, phi'_{j-m} = p^m u."""
    if j < 0 or j > ctx.p - 1:
        raise FLError(f"twist weight {j} outside [0, {ctx.p - 1}]")
    u = ctx(u)
    if not u.is_unit():
        raise FLError("Tate twist needs a unit")
    e = 1 if mod_p else ctx.N
    pieces = [FPModule(ctx, [e]) for _ in range(j + 1)]
    vms = [[[ctx.one()]] for _ in range(j)]
    phi = [[[u * ctx(ctx.p ** (j - i))]] for i in range(j + 1)]
    return FLModule(GradedModule(ctx, pieces, vms), phi)


def mod_p_twist(p: int, j: int, f: int = 1, minpoly=None) -> FLModule:
    ctx = PrimeContext(p, 1, f, minpoly)
    return tate_twist(ctx, j)


def twist(M: FLModule, i: int) -> FLModule:
    """Shift weights up by i: F'^m = F^{m-i}, phi''_m = phi'_{m-i} (m >= i), p^{i-m} phi'_0 below."""
    if i < 0:
        raise FLError("only non-negative twists keep the module effective")
    if i == 0:
        return M
    ctx = M.ctx
    F0 = M.pieces[0]
    pieces = [F0] * i + list(M.pieces)
    vms = [la.identity(ctx, F0.g) for _ in range(i)] + [M.V(m) for m in range(1, M.wmax + 1)]
    phi = [la.scale(ctx(ctx.p ** (i - m)), M.phi[0]) for m in range(i)] + list(M.phi)
    return FLModule(GradedModule(ctx, pieces, vms), phi)


# ---------------------------------------------------------------------------
# mod-p modules: adapted coordinates, random generation, lifts

def adapted_basis(M: FLModule) -> tuple[list[la.Matrix], list[int]]:
    """P_i with P_{i-1}^{-1} V_i P_i = [I; 0] and the weight h(k) of each basis vector of F^0."""
    ctx = M.ctx
    w = M.wmax
    d = M.dims()
    P: list = [None] * (w + 1)
    P[w] = la.identity(ctx, d[w])
    for i in range(w, 0, -1):
        top = la.matmul(ctx, M.V(i), P[i], inner=d[i], ncols=d[i])
        P[i - 1] = _extend_to_basis(ctx, top, d[i - 1], d[i])
    h = []
    for k in range(d[0]):
        h.append(max(i for i in range(w + 1) if k < d[i]))
    return P, h


def _extend_to_basis(ctx: PrimeContext, cols: la.Matrix, n: int, r: int) -> la.Matrix:
    """Append standard vectors to r independent columns (over a field) to get an n x n basis."""
    chosen = [[cols[i][j] for i in range(n)] for j in range(r)]
    for k in range(n):
        if len(chosen) == n:
            break
        e = [ctx.one() if i == k else ctx.zero() for i in range(n)]
        trial = la.transpose(chosen + [e], n)
        if la.rank_mod_p(ctx, trial, ncols=len(chosen) + 1) == len(chosen) + 1:
            chosen.append(e)
    if len(chosen) != n or la.rank_mod_p(ctx, la.transpose(chosen, n), ncols=n) != n:
        raise FLError("v- is not injective; no adapted basis")
    return la.transpose(chosen, n)


def fiber_matrix_adapted(M: FLModule, P, h) -> la.Matrix:
    """C with column k = phi'_{h(k)} applied to basis vector k in adapted coordinates."""
    ctx = M.ctx
    d = M.dims()
    P0inv = la.inverse(ctx, P[0]) if d[0] else []
    C = la.zeros(ctx, d[0], d[0])
    for i in range(M.wmax + 1):
        ad = la.matmul(ctx, M.phi[i], la.sigma(P[i]), inner=d[i], ncols=d[i])
        ad = la.matmul(ctx, P0inv, ad, inner=d[0], ncols=d[i])
        for k in range(d[i]):
            if h[k] == i:
                for r in range(d[0]):
                    C[r][k] = ad[r][k]
    return C


def adapted_module(ctx: PrimeContext, dims: Sequence[int], C: la.Matrix, e: int | None = None) -> FLModule:
    """Module with V_i = [I; 0] and Phi_i = C[:, :d_i] diag(p^{h(k) - i}) in precision ctx."""
    p = ctx.p
    e = ctx.N if e is None else e
    w = len(dims) - 1
    d0 = dims[0]
    h = [max(i for i in range(w + 1) if k < dims[i]) for k in range(d0)]
    pieces = [FPModule(ctx, [e] * di) for di in dims]
    vms = [[[ctx.one() if (r == c) else ctx.zero() for c in range(dims[i])] for r in range(dims[i - 1])]
           for i in range(1, w + 1)]
    phi = []
    for i in range(w + 1):
        phi.append([[C[r][k] * ctx(p ** (h[k] - i)) for k in range(dims[i])] for r in range(d0)])
    return FLModule(GradedModule(ctx, pieces, vms), phi)


def random_dims(rng: random.Random, p: int, wmax: int, max_dim: int = 4) -> list[int]:
    w = rng.randint(0, wmax)
    d0 = rng.randint(1, max_dim)
    dims = [d0]
    for _ in range(w):
        dims.append(rng.randint(0, dims[-1]))
    while len(dims) > 1 and dims[-1] == 0:
        dims.pop()
    return dims


def random_mod_p_module(ctx: PrimeContext, rng: random.Random, wmax: int | None = None,
                        max_dim: int = 4, dims: Sequence[int] | None = None) -> FLModule:
    """Random valid mod-p FL module: adapted data with a random invertible C, then a random base change."""
    if ctx.N != 1:
        ctx = ctx.with_precision(1)
    if wmax is None:
        wmax = ctx.p - 1
    if dims is None:
        dims = random_dims(rng, ctx.p, wmax, max_dim)
    C = la.random_invertible(ctx, dims[0], rng)
    M = adapted_module(ctx, dims, C)
    P = [la.random_invertible(ctx, di, rng) for di in dims]
    return M.change_coordinates(P)


def torsionfree_lift(M: FLModule, N: int) -> FLModule:
    """Free FL module over precision N reducing to M."""
    if not M.is_mod_p():
        raise FLError("torsion-free lifts are built from mod-p modules")
    v = fl_validate(M)
    if not v:
        raise FLError(f"input is not a valid FL module: {v.witness}")
    ctx1 = M.ctx
    ctxN = ctx1.with_precision(N)
    P, h = adapted_basis(M)
    C = fiber_matrix_adapted(M, P, h)
    lift = lambda A: [[Zq(ctxN, x.c) for x in r] for r in A]
    L = adapted_module(ctxN, M.dims(), lift(C))
    out = L.change_coordinates([la.inverse(ctxN, lift(Pi)) if Pi else [] for Pi in P])
    v = fl_validate(out)
    if not v:
        raise FLError(f"lift fails validation: {v.witness}")
    if out.reduce_mod_p() != M:
        raise FLError("lift does not reduce to the input")
    return out


# ---------------------------------------------------------------------------
# F_p-linear algebra over k by restriction of scalars

def _basis_elements(ctx: PrimeContext) -> list[Zq]:
    return [Zq(ctx, [1 if s == t else 0 for s in range(ctx.f)]) for t in range(ctx.f)]


def _flatten(xs: Sequence[Zq]) -> list[int]:
    out = []
    for x in xs:
        out.extend(x.c)
    return out


def fp_matrix_of(ctx: PrimeContext, n_slots: int, fn: Callable[[list[Zq]], list[Zq]], n_out: int) -> la.Matrix:
    """F_p matrix of an F_p-linear map k^n_slots -> k^n_out (mod-p contexts only)."""
    ctxp = PrimeContext(ctx.p, 1)
    cols = []
    for s in range(n_slots):
        for b in _basis_elements(ctx):
            vec = [ctx.zero()] * n_slots
            vec[s] = b
            cols.append(_flatten(fn(vec)))
    rows = n_out * ctx.f
    if not cols:
        return [[] for _ in range(rows)]
    return [[ctxp(cols[j][i]) for j in range(len(cols))] for i in range(rows)]


def fp_vector_to_slots(ctx: PrimeContext, v: Sequence[int]) -> list[Zq]:
    f = ctx.f
    return [Zq(ctx, v[s * f:(s + 1) * f]) for s in range(len(v) // f)]


@dataclass
class HomExt:
    hom_dim: int               # over F_p
    ext1_dim: int              # over F_p
    f: int
    hom_basis: list            # list of lists of matrices f_i
    ext_proj: la.Matrix        # F_p matrix sending a cocycle (flattened) to Ext^1 coordinates
    hom_gr_dim: int
    target_dim: int

    def k_dims(self):
        """Dimensions over k when divisible by f."""
        if self.hom_dim % self.f or self.ext1_dim % self.f:
            return None
        return self.hom_dim // self.f, self.ext1_dim // self.f


def _unpack_graded(ctx, vec, shapes):
    out = []
    pos = 0
    for (r, c) in shapes:
        m = [[vec[pos + a * c + b] for b in range(c)] for a in range(r)]
        pos += r * c
        out.append(m)
    return out


def fl_hom_ext1(M: FLModule, Nm: FLModule) -> HomExt:
    """Hom and Ext^1 between mod-p FL modules as kernel and cokernel of the fiber difference map."""
    if not (M.is_mod_p() and Nm.is_mod_p()):
        raise FLError("Hom/Ext^1 is only certified for modules killed by p")
    ctx = M.ctx
    if ctx.N != 1:
        raise FLError("mod-p modules must live at precision 1")
    ctxp = PrimeContext(ctx.p, 1)
    w = max(M.wmax, Nm.wmax)
    M, Nm = M.padded(w), Nm.padded(w)
    shapes = [(Nm.pieces[i].g, M.pieces[i].g) for i in range(w + 1)]
    n_slots = sum(r * c for r, c in shapes)
    cons_shapes = [(Nm.pieces[i - 1].g, M.pieces[i].g) for i in range(1, w + 1)]
    n_cons = sum(r * c for r, c in cons_shapes)

    def constraints(vec):
        fs = _unpack_graded(ctx, vec, shapes)
        out = []
        for i in range(1, w + 1):
            a = la.matmul(ctx, fs[i - 1], M.V(i), inner=M.pieces[i - 1].g, ncols=M.pieces[i].g)
            b = la.matmul(ctx, Nm.V(i), fs[i], inner=Nm.pieces[i].g, ncols=M.pieces[i].g)
            for r in la.sub(a, b):
                out.extend(r)
        return out

    Cm = fp_matrix_of(ctx, n_slots, constraints, n_cons)
    nvars = n_slots * ctx.f
    if n_cons:
        H = la.kernel_generators(ctxp, Cm, nvars)
    else:
        H = la.identity(ctxp, nvars)
    hdim = len(H[0]) if H and H[0] else 0

    fibM, GM = fiber_map(M, 0)
    fibN, GN = fiber_map(Nm, 0)
    LM = fibM.H0.lifts
    h0 = fibM.H0.module.g
    g0N = Nm.pieces[0].g
    totM = sum(P.g for P in M.pieces)
    totN = sum(P.g for P in Nm.pieces)
    PhiM = total_phi(M)
    PhiN = total_phi(Nm)

    def delta(fs):
        ftot = la.block_diag(ctx, [(fs[i], Nm.pieces[i].g, M.pieces[i].g) for i in range(w + 1)])
        D = la.sub(la.matmul(ctx, fs[0], PhiM, inner=M.pieces[0].g, ncols=totM),
                   la.matmul(ctx, PhiN, la.sigma(ftot), inner=totN, ncols=totM))
        G = la.matmul(ctx, D, la.sigma(LM), inner=totM, ncols=h0)
        return [x for r in G for x in r]

    tdim = g0N * h0 * ctx.f
    hom_basis = []
    cols = []
    for j in range(hdim):
        v = [H[i][j].c[0] for i in range(nvars)]
        fs = _unpack_graded(ctx, fp_vector_to_slots(ctx, v), shapes)
        hom_basis.append(fs)
        cols.append(_flatten(delta(fs)))
    Delta = [[ctxp(cols[j][i]) for j in range(hdim)] for i in range(tdim)]
    rank = la.rank_mod_p(ctxp, Delta, ncols=hdim) if tdim and hdim else 0
    target = FPModule(ctxp, [1] * tdim)
    cok = cokernel_of_matrix(ctxp, target, Delta, hdim)
    # Hom_FL basis: kernel of Delta inside Hom_gr
    if hdim and tdim:
        Kd = la.kernel_generators(ctxp, Delta, hdim)
        kd = len(Kd[0]) if Kd and Kd[0] else 0
        fl_basis = []
        for j in range(kd):
            coeffs = [Kd[i][j].c[0] for i in range(hdim)]
            comb = [[[ctx.zero() for _ in range(c)] for _ in range(r)] for r, c in shapes]
            for cj, fs in zip(coeffs, hom_basis):
                if cj:
                    comb = [la.add(a, la.scale(ctx(cj), b)) for a, b in zip(comb, fs)]
            fl_basis.append(comb)
    else:
        fl_basis = hom_basis
    return HomExt(hdim - rank, tdim - rank, ctx.f, fl_basis, cok.proj.matrix, hdim, tdim)


def random_fl_hom(M: FLModule, Nm: FLModule, rng: random.Random) -> FLMorphism:
    """Random F_p-combination of a basis of Hom_FL(M, N)."""
    he = fl_hom_ext1(M, Nm)
    ctx = M.ctx
    w = max(M.wmax, Nm.wmax)
    M2, N2 = M.padded(w), Nm.padded(w)
    maps = [la.zeros(ctx, N2.pieces[i].g, M2.pieces[i].g) for i in range(w + 1)]
    for fs in he.hom_basis:
        c = rng.randrange(ctx.p)
        if c:
            maps = [la.add(a, la.scale(ctx(c), b)) for a, b in zip(maps, fs)]
    return FLMorphism(M2, N2, maps)


def random_morphism(ctx: PrimeContext, rng: random.Random, max_dim: int = 2,
                    wmax: int | None = None) -> FLMorphism:
    """f: A + B -> B + C, (a, b) -> (b, g(a)) with g random in Hom_FL(A, C), in random coordinates."""
    if ctx.N != 1:
        ctx = ctx.with_precision(1)
    A = random_mod_p_module(ctx, rng, wmax, max_dim)
    B = random_mod_p_module(ctx, rng, wmax, max_dim)
    C = random_mod_p_module(ctx, rng, wmax, max_dim)
    g = random_fl_hom(A, C, rng)
    w = max(A.wmax, B.wmax, C.wmax)
    A, B, C = A.padded(w), B.padded(w), C.padded(w)
    S = A.direct_sum(B)
    T = B.direct_sum(C)
    maps = []
    for i in range(w + 1):
        a, b, c = A.pieces[i].g, B.pieces[i].g, C.pieces[i].g
        m = la.zeros(ctx, b + c, a + b)
        for r in range(b):
            m[r][a + r] = ctx.one()
        gi = g.maps[i] if i < len(g.maps) else la.zeros(ctx, c, a)
        for r in range(c):
            for s in range(a):
                m[b + r][s] = gi[r][s]
        maps.append(m)
    P = [la.random_invertible(ctx, Pc.g, rng) for Pc in S.pieces]
    Q = [la.random_invertible(ctx, Pc.g, rng) for Pc in T.pieces]
    S2 = S.change_coordinates(P)
    T2 = T.change_coordinates(Q)
    maps2 = []
    for i in range(w + 1):
        m = la.matmul(ctx, maps[i], P[i], inner=S.pieces[i].g, ncols=S.pieces[i].g)
        Qi = la.inverse(ctx, Q[i]) if Q[i] else []
        maps2.append(la.matmul(ctx, Qi, m, inner=T.pieces[i].g, ncols=S.pieces[i].g) if T.pieces[i].g
                     else [])
    return FLMorphism(S2, T2, maps2)


def graded_dims_of_fiber(M: FLModule, a) -> int:
    return graded_fiber(M.base, a).H0.module.length()
