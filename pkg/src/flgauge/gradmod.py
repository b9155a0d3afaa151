"""Finitely presented modules over Z_q/p^N and graded modules with v-, v+ actions.

A module is a direct sum of cyclic pieces Z_q/p^e with 1 <= e <= N, where
e = N stands for a free generator at precision N. Maps are matrices acting on
generator coordinates (columns are images of source generators).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Sequence

from . import linalg as la
from .arith import PrimeContext, Zq, pd_exponent


class NotNDetermined(RuntimeError):
    """Raised when precision N cannot certify an isomorphism."""


class DimensionError(ValueError):
    pass


class FPModule:
    """Direct sum of cyclic modules Z_q/p^e, one per generator."""

    __slots__ = ("ctx", "exps")

    def __init__(self, ctx: PrimeContext, exps: Sequence[int]):
        exps = tuple(int(e) for e in exps)
        for e in exps:
            if not 1 <= e <= ctx.N:
                raise ValueError(f"exponent {e} outside [1, {ctx.N}]")
        self.ctx = ctx
        self.exps = exps

    @classmethod
    def free(cls, ctx: PrimeContext, r: int) -> "FPModule":
        return cls(ctx, [ctx.N] * r)

    @classmethod
    def zero(cls, ctx: PrimeContext) -> "FPModule":
        return cls(ctx, [])

    @property
    def g(self) -> int:
        return len(self.exps)

    def invariants(self) -> tuple[int, ...]:
        return tuple(sorted(self.exps))

    def divisors(self) -> list[int]:
        """Elementary divisors p^e (0 for a free generator), ascending."""
        p, N = self.ctx.p, self.ctx.N
        return [0 if e == N else p ** e for e in self.invariants()]

    def is_zero(self) -> bool:
        return not self.exps

    def is_free(self) -> bool:
        return all(e == self.ctx.N for e in self.exps)

    def is_torsion(self) -> bool:
        return all(e < self.ctx.N for e in self.exps)

    def n_determined(self) -> bool:
        return self.is_torsion()

    def length(self) -> int:
        """Length as a Z_q-module (sum of exponents), equal to k-dimension when killed by p."""
        return sum(self.exps)

    def free_rank(self) -> int:
        return sum(1 for e in self.exps if e == self.ctx.N)

    def torsion_exps(self) -> list[int]:
        return sorted(e for e in self.exps if e < self.ctx.N)

    def relation_matrix(self) -> la.Matrix:
        """g x r matrix whose columns p^e_j * e_j present the module (free columns omitted)."""
        ctx = self.ctx
        rel = [j for j, e in enumerate(self.exps) if e < ctx.N]
        return [[ctx(ctx.p ** self.exps[j]) if i == j else ctx.zero() for j in rel] for i in range(self.g)]

    def isomorphic(self, other: "FPModule") -> bool:
        return self.invariants() == other.invariants()

    def direct_sum(self, other: "FPModule") -> "FPModule":
        return FPModule(self.ctx, self.exps + other.exps)

    def __eq__(self, other):
        return isinstance(other, FPModule) and self.ctx == other.ctx and self.exps == other.exps

    def __hash__(self):
        return hash(self.exps)

    def __repr__(self):
        return f"FPModule{self.exps}"

    def random_element(self, rng: random.Random) -> la.Matrix:
        return [[self.ctx.random(rng).reduce(e)] for e in self.exps]


class ModuleMap:
    """Homomorphism given by a target.g x source.g matrix."""

    __slots__ = ("source", "target", "matrix")

    def __init__(self, source: FPModule, target: FPModule, matrix: la.Matrix, check: bool = True):
        if len(matrix) != target.g or any(len(r) != source.g for r in matrix):
            raise DimensionError(
                f"matrix shape {len(matrix)}x{len(matrix[0]) if matrix else source.g} "
                f"does not match {target.g}x{source.g}")
        self.source = source
        self.target = target
        self.matrix = la.reduce_rows(matrix, target.exps)
        if check and not self.well_defined():
            raise ValueError("matrix does not define a module homomorphism")

    @classmethod
    def zero(cls, source: FPModule, target: FPModule) -> "ModuleMap":
        return cls(source, target, la.zeros(source.ctx, target.g, source.g), check=False)

    @classmethod
    def identity(cls, M: FPModule) -> "ModuleMap":
        return cls(M, M, la.identity(M.ctx, M.g), check=False)

    def well_defined(self) -> bool:
        N = self.source.ctx.N
        for k, ek in enumerate(self.target.exps):
            for l, dl in enumerate(self.source.exps):
                x = self.matrix[k][l]
                if x and dl < N and x.valuation() < ek - dl:
                    return False
        return True

    def compose(self, other: "ModuleMap") -> "ModuleMap":
        """self o other."""
        ctx = self.source.ctx
        M = la.matmul(ctx, self.matrix, other.matrix, inner=self.source.g, ncols=other.source.g)
        return ModuleMap(other.source, self.target, M, check=False)

    def __add__(self, other: "ModuleMap") -> "ModuleMap":
        return ModuleMap(self.source, self.target, la.add(self.matrix, other.matrix), check=False)

    def __sub__(self, other: "ModuleMap") -> "ModuleMap":
        return ModuleMap(self.source, self.target, la.sub(self.matrix, other.matrix), check=False)

    def scale(self, c) -> "ModuleMap":
        return ModuleMap(self.source, self.target, la.scale(c, self.matrix), check=False)

    def is_zero(self) -> bool:
        return la.is_zero(self.matrix)

    def __eq__(self, other):
        return (isinstance(other, ModuleMap) and self.source == other.source
                and self.target == other.target and la.equal(self.matrix, other.matrix))

    def __repr__(self):
        return f"ModuleMap({self.source} -> {self.target}, {la.to_ints(self.matrix)})"

    def apply(self, col: la.Matrix) -> la.Matrix:
        ctx = self.source.ctx
        return la.reduce_rows(la.matmul(ctx, self.matrix, col, inner=self.source.g, ncols=1),
                              self.target.exps)


def direct_sum_maps(maps: Sequence[ModuleMap]) -> ModuleMap:
    ctx = maps[0].source.ctx
    src = FPModule(ctx, sum((m.source.exps for m in maps), ()))
    tgt = FPModule(ctx, sum((m.target.exps for m in maps), ()))
    M = la.block_diag(ctx, [(m.matrix, m.target.g, m.source.g) for m in maps])
    return ModuleMap(src, tgt, M, check=False)


@dataclass
class Cokernel:
    module: FPModule
    proj: ModuleMap            # target -> module
    lifts: la.Matrix           # target.g x module.g, columns lift the new generators


@dataclass
class Kernel:
    module: FPModule
    incl: ModuleMap            # module -> source


def cokernel_of_matrix(ctx: PrimeContext, target: FPModule, A: la.Matrix, ncols: int) -> Cokernel:
    """Cokernel of target <- Z^ncols given by A (columns are images)."""
    t = target.g
    D = target.relation_matrix()
    BB = [list(A[i]) + list(D[i]) for i in range(t)]
    tot = ncols + len(D[0]) if D else ncols
    s = la.smith_normal_form(ctx, BB, ncols=tot)
    keep = [k for k, e in enumerate(s.row_exps()) if e > 0]
    exps = [s.row_exps()[k] for k in keep]
    Q = FPModule(ctx, exps)
    P = [list(s.U[k]) for k in keep]
    lifts = la.columns(s.Uinv, keep)
    return Cokernel(Q, ModuleMap(target, Q, P, check=False), lifts)


def cokernel(f: ModuleMap) -> Cokernel:
    return cokernel_of_matrix(f.source.ctx, f.target, f.matrix, f.source.g)


def submodule_from_generators(M: FPModule, G: la.Matrix, K: int) -> Kernel:
    """Submodule of M generated by the K columns of G, with a reduced presentation."""
    ctx = M.ctx
    g = M.g
    if K == 0:
        Z = FPModule.zero(ctx)
        return Kernel(Z, ModuleMap(Z, M, [[] for _ in range(g)], check=False))
    D = M.relation_matrix()
    r = len(D[0]) if D and D[0] else 0
    BB = [list(G[i]) + list(D[i]) for i in range(g)]
    Z = la.kernel_generators(ctx, BB, K + r)
    R = Z[:K]                         # relations among the K generators
    nrel = len(R[0]) if R and R[0] else 0
    s = la.smith_normal_form(ctx, R, ncols=nrel)
    re = s.row_exps()
    keep = [k for k in range(K) if re[k] > 0]
    exps = [re[k] for k in keep]
    incl = la.matmul(ctx, G, la.columns(s.Uinv, keep), inner=K, ncols=len(keep))
    S = FPModule(ctx, exps)
    return Kernel(S, ModuleMap(S, M, incl, check=False))


def kernel(f: ModuleMap) -> Kernel:
    ctx = f.source.ctx
    t = f.target.g
    g = f.source.g
    D = f.target.relation_matrix()
    r = len(D[0]) if D and D[0] else 0
    BB = [list(f.matrix[i]) + list(D[i]) for i in range(t)]
    if t == 0:
        G = la.identity(ctx, g)
        K = g
    else:
        Z = la.kernel_generators(ctx, BB, g + r)
        G = Z[:g]
        K = len(G[0]) if G and G[0] else 0
    # add relations of the source so the presentation is computed inside M
    return submodule_from_generators(f.source, G, K)


def image(f: ModuleMap) -> Kernel:
    return submodule_from_generators(f.target, f.matrix, f.source.g)


def kernel_cokernel(f: ModuleMap) -> tuple[FPModule, FPModule]:
    return kernel(f).module, cokernel(f).module


def two_term_homology(d: ModuleMap) -> tuple[FPModule, FPModule]:
    """Complex in degrees 0 -> 1: H0 = ker d, H1 = coker d."""
    return kernel_cokernel(d)


def lift_through(inj: ModuleMap, g: ModuleMap) -> ModuleMap | None:
    """h with inj o h = g, or None."""
    ctx = inj.source.ctx
    X = la.solve(ctx, inj.matrix, g.matrix, inj.source.g, row_exps=inj.target.exps, nrhs=g.source.g)
    if X is None:
        return None
    return ModuleMap(g.source, inj.source, X, check=False)


def induced_on_kernels(K1: Kernel, K2: Kernel, phi_matrix: la.Matrix, target: FPModule) -> ModuleMap:
    """Map K1 -> K2 induced by the ambient matrix phi (K1 ambient -> K2 ambient)."""
    ctx = target.ctx
    img = la.matmul(ctx, phi_matrix, K1.incl.matrix, inner=K1.incl.target.g, ncols=K1.module.g)
    h = lift_through(K2.incl, ModuleMap(K1.module, target, img, check=False))
    if h is None:
        raise ValueError("map does not preserve the kernels")
    return h


def induced_on_cokernels(C1: Cokernel, C2: Cokernel, phi_matrix: la.Matrix) -> ModuleMap:
    ctx = C1.module.ctx
    n1 = len(C1.lifts)
    M = la.matmul(ctx, phi_matrix, C1.lifts, inner=n1, ncols=C1.module.g)
    M = la.matmul(ctx, C2.proj.matrix, M, inner=len(M), ncols=C1.module.g)
    return ModuleMap(C1.module, C2.module, M, check=False)


def is_isomorphism(f: ModuleMap, certify: bool = True) -> bool:
    """Isomorphism test at precision N.

    With ``certify`` the answer is refused (NotNDetermined) when the modules
    mix free and torsion pieces, since then precision N cannot decide it.
    """
    if certify:
        for M in (f.source, f.target):
            if not (M.is_torsion() or M.is_free()):
                raise NotNDetermined("mixed free/torsion pieces: precision cannot certify")
        if f.source.is_free() != f.target.is_free() and not (f.source.is_zero() or f.target.is_zero()):
            raise NotNDetermined("free and torsion modules compared")
    if f.source.invariants() != f.target.invariants():
        return False
    return cokernel(f).module.is_zero()


def zero_if_empty(ctx, m):
    return m if m is not None else FPModule.zero(ctx)


# ---------------------------------------------------------------------------
# graded modules with v- only (effective windows [0, wmax])

class GradedModule:
    """Pieces F^0..F^wmax with v-: F^i -> F^{i-1}; F^i = F^0 below 0, 0 above wmax."""

    def __init__(self, ctx: PrimeContext, pieces: Sequence[FPModule], vminus: Sequence[ModuleMap | la.Matrix]):
        self.ctx = ctx
        self.pieces = list(pieces)
        if len(vminus) != len(self.pieces) - 1:
            raise DimensionError(f"need {len(self.pieces) - 1} vminus maps, got {len(vminus)}")
        vm = []
        for i, m in enumerate(vminus, start=1):
            if not isinstance(m, ModuleMap):
                src, tgt = self.pieces[i], self.pieces[i - 1]
                if len(m) != tgt.g or any(len(r) != src.g for r in m):
                    raise DimensionError(f"vminus {i}: matrix shape does not match pieces "
                                         f"({tgt.g}x{src.g} expected)")
                m = ModuleMap(src, tgt, m)
            vm.append(m)
        self.vminus = [None] + vm

    @property
    def wmax(self) -> int:
        return len(self.pieces) - 1

    def piece(self, i: int) -> FPModule:
        if i < 0:
            return self.pieces[0]
        if i > self.wmax:
            return FPModule.zero(self.ctx)
        return self.pieces[i]

    def vm(self, i: int) -> ModuleMap:
        """v-: F^i -> F^{i-1} with the out-of-window conventions."""
        if i <= 0:
            return ModuleMap.identity(self.pieces[0])
        if i > self.wmax:
            return ModuleMap.zero(self.piece(i), self.piece(i - 1))
        return self.vminus[i]

    def vm_power(self, i: int) -> ModuleMap:
        """Composite F^i -> F^0 (identity for i <= 0)."""
        if i <= 0:
            return ModuleMap.identity(self.pieces[0])
        m = self.vm(i)
        for j in range(i - 1, 0, -1):
            m = self.vm(j).compose(m)
        return m

    def is_zero(self) -> bool:
        return all(P.is_zero() for P in self.pieces)

    def direct_sum(self, other: "GradedModule") -> "GradedModule":
        w = max(self.wmax, other.wmax)
        pieces = [self.piece(i).direct_sum(other.piece(i)) for i in range(w + 1)]
        vms = [direct_sum_maps([self.vm(i), other.vm(i)]) for i in range(1, w + 1)]
        return GradedModule(self.ctx, pieces, vms)

    def __eq__(self, other):
        return (isinstance(other, GradedModule) and self.pieces == other.pieces
                and self.vminus[1:] == other.vminus[1:])

    def __repr__(self):
        return f"GradedModule({[P.exps for P in self.pieces]})"


@dataclass
class FiberResult:
    H0: Cokernel
    Hminus1: Kernel
    source: FPModule
    target: FPModule
    d: ModuleMap
    offsets: list = field(default_factory=list)   # start index of F^i in the target sum


def graded_fiber(M: GradedModule, a) -> FiberResult:
    """Finite-window fiber at v- = a: cone of d(x_i) = v-(x_i) - a x_i."""
    ctx = M.ctx
    a = ctx(a) if not isinstance(a, Zq) else a
    w = M.wmax
    tgt_exps = []
    offsets = []
    for i in range(w + 1):
        offsets.append(len(tgt_exps))
        tgt_exps.extend(M.pieces[i].exps)
    src_exps = []
    src_off = []
    for i in range(1, w + 1):
        src_off.append(len(src_exps))
        src_exps.extend(M.pieces[i].exps)
    S = FPModule(ctx, src_exps)
    T = FPModule(ctx, tgt_exps)
    D = la.zeros(ctx, T.g, S.g)
    for i in range(1, w + 1):
        vm = M.vminus[i].matrix
        gi = M.pieces[i].g
        gi1 = M.pieces[i - 1].g
        c0 = src_off[i - 1]
        for r in range(gi1):
            for c in range(gi):
                D[offsets[i - 1] + r][c0 + c] = vm[r][c]
        if a:
            for c in range(gi):
                D[offsets[i] + c][c0 + c] = D[offsets[i] + c][c0 + c] - a
    d = ModuleMap(S, T, D, check=False)
    return FiberResult(cokernel(d), kernel(d), S, T, d, offsets)


def weight_window_check(M) -> tuple[int, int] | str:
    """Hodge-Tate window [a, b] of a GradedModule or AGradedModule."""
    if isinstance(M, AGradedModule):
        return M.weight_window()
    if M.is_zero():
        return "unbounded"
    b = max(i for i in range(M.wmax + 1) if not M.pieces[i].is_zero())
    a = 0
    for i in range(1, b + 1):
        if not is_isomorphism(M.vminus[i], certify=False):
            break
        a = i
    return (a, b)


# ---------------------------------------------------------------------------
# graded modules over A = W[v+, v-]/(v+ v- - p)

class AGradedModule:
    """Pieces M^lo..M^hi with v- (M^i -> M^{i-1}) and v+ (M^i -> M^{i+1}).

    Outside the window the data is stable: below lo, M^i = M^lo with v- = id
    and v+ = p; above hi, M^i = M^hi with v+ = id and v- = p.
    """

    def __init__(self, ctx: PrimeContext, lo: int, pieces: Sequence[FPModule],
                 vm: Sequence[la.Matrix], vp: Sequence[la.Matrix], check: bool = True):
        self.ctx = ctx
        self.lo = lo
        self.pieces = list(pieces)
        n = len(self.pieces)
        if len(vm) != n - 1 or len(vp) != n - 1:
            raise DimensionError("need len(pieces) - 1 maps in each direction")
        self.vm_ = [ModuleMap(self.pieces[k + 1], self.pieces[k], m) for k, m in enumerate(vm)]
        self.vp_ = [ModuleMap(self.pieces[k], self.pieces[k + 1], m) for k, m in enumerate(vp)]
        if check:
            self.check_relations()

    @property
    def hi(self) -> int:
        return self.lo + len(self.pieces) - 1

    def piece(self, i: int) -> FPModule:
        return self.pieces[min(max(i, self.lo), self.hi) - self.lo]

    def vm(self, i: int) -> ModuleMap:
        P = self.piece(i)
        if i <= self.lo:
            return ModuleMap.identity(P)
        if i > self.hi:
            return ModuleMap.identity(P).scale(self.ctx.p)
        return self.vm_[i - 1 - self.lo]

    def vp(self, i: int) -> ModuleMap:
        P = self.piece(i)
        if i >= self.hi:
            return ModuleMap.identity(P)
        if i < self.lo:
            return ModuleMap.identity(P).scale(self.ctx.p)
        return self.vp_[i - self.lo]

    def check_relations(self) -> None:
        p = self.ctx.p
        for i in range(self.lo - 1, self.hi + 2):
            a = self.vm(i + 1).compose(self.vp(i))
            b = self.vp(i - 1).compose(self.vm(i))
            if a != ModuleMap.identity(self.piece(i)).scale(p) or b != ModuleMap.identity(self.piece(i)).scale(p):
                raise ValueError(f"v+ v- = p fails in degree {i}")

    def weight_window(self) -> tuple[int, int] | str:
        if all(P.is_zero() for P in self.pieces):
            return "unbounded"
        a = self.lo
        while a < self.hi and is_isomorphism(self.vm(a + 1), certify=False):
            a += 1
        b = self.hi
        while b > self.lo and is_isomorphism(self.vp(b - 1), certify=False):
            b -= 1
        return (a, b)

    def normalized(self) -> "AGradedModule":
        """Trim window ends that already follow the stable conventions."""
        lo, hi = self.lo, self.hi
        while lo < hi and self.vm(lo + 1) == ModuleMap.identity(self.piece(lo)) \
                and self.piece(lo + 1) == self.piece(lo) \
                and self.vp(lo) == ModuleMap.identity(self.piece(lo)).scale(self.ctx.p):
            lo += 1
        while hi > lo and self.vp(hi - 1) == ModuleMap.identity(self.piece(hi)) \
                and self.piece(hi - 1) == self.piece(hi) \
                and self.vm(hi) == ModuleMap.identity(self.piece(hi)).scale(self.ctx.p):
            hi -= 1
        return self.restrict(lo, hi)

    def restrict(self, lo: int, hi: int) -> "AGradedModule":
        pieces = [self.piece(i) for i in range(lo, hi + 1)]
        vm = [self.vm(i).matrix for i in range(lo + 1, hi + 1)]
        vp = [self.vp(i).matrix for i in range(lo, hi)]
        return AGradedModule(self.ctx, lo, pieces, vm, vp, check=False)

    def same_data(self, other: "AGradedModule") -> bool:
        a, b = self.normalized(), other.normalized()
        return (a.lo == b.lo and a.pieces == b.pieces
                and all(x == y for x, y in zip(a.vm_, b.vm_))
                and all(x == y for x, y in zip(a.vp_, b.vp_)))

    def is_effective(self) -> bool:
        return all(is_isomorphism(self.vm(i), certify=False) for i in range(self.lo + 1, 1))

    def reduce(self, t: int) -> "AGradedModule":
        """Quotient by p^t."""
        ctx = self.ctx
        pieces = [FPModule(ctx, [min(e, t) for e in P.exps]) for P in self.pieces]
        # drop nothing: exponent t >= 1 keeps every generator
        vm = [m.matrix for m in self.vm_]
        vp = [m.matrix for m in self.vp_]
        return AGradedModule(ctx, self.lo, pieces, vm, vp)

    def to_graded(self, wmax: int) -> GradedModule:
        """Forget v+ and keep degrees 0..wmax (requires effectivity)."""
        pieces = [self.piece(i) for i in range(wmax + 1)]
        return GradedModule(self.ctx, pieces, [self.vm(i) for i in range(1, wmax + 1)])


def free_A(ctx: PrimeContext, rank: int = 1, shift: int = 0) -> AGradedModule:
    """A^rank generated in degree ``shift``: v- = p above, v+ = p below."""
    return AGradedModule(ctx, shift, [FPModule.free(ctx, rank)], [], [])


def weight_truncate(M: AGradedModule, b: int) -> AGradedModule:
    """w_{<=b}: keep M^i for i < b, freeze M^b above with v+ = id and v- = p."""
    if b < M.lo:
        return AGradedModule(M.ctx, b, [M.piece(b)], [], [])
    return M.restrict(min(M.lo, b), b)


def random_effective_A(ctx: PrimeContext, rng: random.Random, rank: int, hi: int,
                       torsion: int | None = None) -> AGradedModule:
    """Random lattice chain pL^i <= L^{i+1} <= L^i with L^i = L^0 for i <= 0.

    Above ``hi`` the chain continues as L^{i+1} = p L^i. With ``torsion`` the
    result is reduced mod p^torsion.
    """
    p = ctx.p
    pieces = [FPModule.free(ctx, rank)]
    vms, vps = [], []
    for _ in range(1, hi + 1):
        s = rng.randint(0, rank)
        Q = la.random_invertible(ctx, rank, rng)
        Qi = la.inverse(ctx, Q)
        d_m = [ctx.one() if k < s else ctx(p) for k in range(rank)]
        d_p = [ctx(p) if k < s else ctx.one() for k in range(rank)]
        vm = [[Q[i][k] * d_m[k] for k in range(rank)] for i in range(rank)]
        vp = [[d_p[i] * Qi[i][k] for k in range(rank)] for i in range(rank)]
        vms.append(vm)
        vps.append(vp)
        pieces.append(FPModule.free(ctx, rank))
    M = AGradedModule(ctx, 0, pieces, vms, vps)
    if torsion is not None:
        M = M.reduce(torsion)
    return M


# ---------------------------------------------------------------------------
# base change to B

def b_constants(p: int, l: int) -> tuple[int, int]:
    """(c+, c-) exponents with v+ g_l = p^c+ g_{l+1} and v- g_l = p^c- g_{l-1}."""
    e = lambda i: pd_exponent(p, i)
    return e(l) + 1 - e(l + 1), e(l) - e(l - 1)


@dataclass
class BaseChangePiece:
    degree: int
    module: FPModule
    comparison: ModuleMap       # M^i -> (M (x) B)^i, n -> n (x) g_0
    is_iso: bool


def base_change_degree(M: AGradedModule, i: int) -> BaseChangePiece:
    """Presentation of (M (x)_A B)^i on generators M^{i-j} (x) g_j, 0 <= j <= max(i, 0)."""
    ctx = M.ctx
    p = ctx.p
    js = list(range(0, max(i, 0) + 1))
    blocks = [M.piece(i - j) for j in js]
    off = []
    exps = []
    for P in blocks:
        off.append(len(exps))
        exps.extend(P.exps)
    G = FPModule(ctx, exps)
    rels = []   # columns

    def col_zero():
        return [ctx.zero()] * G.g

    # R1: (v+ n) (x) g_l = p^c+ n (x) g_{l+1}, n in M^{i-l-1}, 0 <= l <= i-1
    for l in range(0, i):
        src = M.piece(i - l - 1)
        vp = M.vp(i - l - 1).matrix
        cp, _ = b_constants(p, l)
        for c in range(src.g):
            col = col_zero()
            for r in range(len(vp)):
                col[off[l] + r] = col[off[l] + r] + vp[r][c]
            col[off[l + 1] + c] = col[off[l + 1] + c] - ctx(p ** cp)
            rels.append(col)
    # R2: (v- n) (x) g_l = p^c- n (x) g_{l-1}, n in M^{i-l+1}, 1 <= l <= i
    for l in range(1, i + 1):
        src = M.piece(i - l + 1)
        vm = M.vm(i - l + 1).matrix
        _, cm = b_constants(p, l)
        for c in range(src.g):
            col = col_zero()
            for r in range(len(vm)):
                col[off[l] + r] = col[off[l] + r] + vm[r][c]
            col[off[l - 1] + c] = col[off[l - 1] + c] - ctx(p ** cm)
            rels.append(col)
    A = la.transpose(rels, G.g) if rels else [[] for _ in range(G.g)]
    C = cokernel_of_matrix(ctx, G, A, len(rels))
    Mi = M.piece(i)
    emb = [[ctx.one() if r == off[0] + c else ctx.zero() for c in range(Mi.g)] for r in range(G.g)]
    comp_m = la.matmul(ctx, C.proj.matrix, emb, inner=G.g, ncols=Mi.g)
    comp = ModuleMap(Mi, C.module, comp_m, check=False)
    return BaseChangePiece(i, C.module, comp, is_isomorphism(comp, certify=False))


def base_change_A_to_B(M: AGradedModule, degrees: Sequence[int] | None = None) -> dict:
    """Pieces of M (x)_A B and the comparison table for 0 <= i <= p-1."""
    p = M.ctx.p
    if degrees is None:
        degrees = range(0, p + 1)
    pieces = {i: base_change_degree(M, i) for i in degrees}
    table = {i: pieces[i].is_iso for i in pieces if 0 <= i <= p - 1}
    return {"pieces": pieces, "iso_below_p": table}


def tor1_B_over_A(ctx: PrimeContext, degrees: Sequence[int]) -> dict:
    """For each degree i: ker(p) on (B/A)^i next to (A/(v-)){p} in degree i, as invariants."""
    A = free_A(ctx)
    out = {}
    for i in degrees:
        bc = base_change_degree(A, i)
        Q = cokernel(bc.comparison).module
        pk = kernel(ModuleMap.identity(Q).scale(ctx.p)).module
        # (A/(v-)) in degree i - p: coker of v-: A^{i-p+1} -> A^{i-p}
        j = i - ctx.p
        quot = cokernel(A.vm(j + 1)).module
        out[i] = (pk.invariants(), quot.invariants())
    return out
