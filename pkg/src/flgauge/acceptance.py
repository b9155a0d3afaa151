"""The acceptance suite: eleven criteria shared by ``flgauge selftest`` and the tests."""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from math import factorial
from typing import Callable

from . import linalg as la
from .arith import PrimeContext, Zq, mazur_number, vp_int
from .fl import (fl_cokernel, fl_kernel, fl_validate, graded_dims_of_fiber, random_mod_p_module,
                 random_morphism, tate_twist, torsionfree_lift)
from .gradmod import base_change_A_to_B, random_effective_A, tor1_B_over_A
from .laurent import RingDescriptor, verify_pd_relations
from .mazsyn import syn_vs_ext_crosscheck, syntomic_cohomology
from .sen import alpha, di_maz_endofunctor, extension_class, standard_extension
from .witt import (WittVec, bigwitt_pth_root, divided_teichmuller, frobenius_W, ghost,
                   random_b_element, teichmuller, verify_di_matrix, verify_psi_maz, verschiebung)


@dataclass
class CriterionResult:
    number: int
    name: str
    ok: bool
    detail: str
    seconds: float

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        return f"[{status}] {self.number:2d} {self.name} (tol={TOLERANCE}): {self.detail} ({self.seconds:.2f}s)"


# every criterion is an exact equality of integers, rationals or residues
TOLERANCE = "exact"


# 1 ---------------------------------------------------------------------------

def mazur_oracle(p: int, n: int) -> int:
    """min over n <= m <= 2n of v_p(p^m / m!) with m! computed exactly.

    m = 2n is enough: for p = 2 a power of two lies in [n, 2n], and for p > 2
    the valuation is at least m (p-2)/(p-1), which exceeds n beyond 2n.
    """
    best = None
    fact = factorial(n - 1)
    for m in range(n, 2 * n + 1):
        fact *= m
        v = m - vp_int(fact, p)
        best = v if best is None else min(best, v)
    return best


def crit_mazur() -> tuple[bool, str]:
    bad = []
    for p in (2, 3, 5, 7):
        vals = {n: mazur_number(p, n) for n in range(1, 65)}
        for n, v in vals.items():
            if v != mazur_oracle(p, n):
                bad.append(f"p={p} n={n}")
            if n < p and v != n:
                bad.append(f"p={p} [n]!=n at {n}")
            if n + 1 in vals and vals[n + 1] - v not in (0, 1):
                bad.append(f"p={p} step at {n}")
    return not bad, "256 values agree with the factorial oracle" if not bad else ", ".join(bad[:5])


# 2 ---------------------------------------------------------------------------

def crit_pd() -> tuple[bool, str]:
    checks = []
    for p in (2, 3):
        checks += [(p, c) for c in verify_pd_relations(p, 2, D=p * p + p)]
    bad = [f"p={p} {c.name} n={c.n}" for p, c in checks if not c.ok]
    return not bad, f"{len(checks)} relations exact" if not bad else ", ".join(bad)


# 3 ---------------------------------------------------------------------------

def crit_divisibility() -> tuple[bool, str]:
    # divided_teichmuller raises on any failure
    parts = []
    for p, n in ((2, 3), (3, 2)):
        dt = divided_teichmuller(p, n)
        ok = dt.z.scalar(p) == teichmuller(p, n, dt.z.comps[0].ring.vplus() ** p)
        if not ok:
            return False, f"p*z != [v+^p] for p={p}"
        parts.append(f"p={p} z={[repr(c) for c in dt.z.comps]}")
    return True, "; ".join(parts)


# 4 ---------------------------------------------------------------------------

def crit_bigwitt() -> tuple[bool, str]:
    for p in (2, 3):
        r = bigwitt_pth_root(p, 8)
        if not (r.integral and r.identity):
            return False, f"p={p}"
    return True, "g^p = 1 - v+^p x to order 8, p=2,3"


# 5, 6 ------------------------------------------------------------------------

def _report(checks) -> tuple[bool, str]:
    bad = [c.name for c in checks if not c.ok]
    return not bad, f"{len(checks)} identities exact" if not bad else "failed: " + ", ".join(bad)


def crit_psi_maz() -> tuple[bool, str]:
    return _report(verify_psi_maz(2, 3, panel_size=50) + verify_psi_maz(3, 2, panel_size=50))


def crit_di_matrix() -> tuple[bool, str]:
    return _report(verify_di_matrix(2, 3) + verify_di_matrix(3, 2))


# 7 ---------------------------------------------------------------------------

def crit_effectivity(cases: int = 100, seed: int = 7) -> tuple[bool, str]:
    rng = random.Random(seed)
    bad = []
    for p in (2, 3, 5):
        ctx = PrimeContext(p, 3)
        for k in range(cases):
            M = random_effective_A(ctx, rng, rank=rng.randint(1, 2), hi=rng.randint(0, p),
                                   torsion=rng.choice([None, 1, 2]))
            table = base_change_A_to_B(M, range(0, p))["iso_below_p"]
            if not all(table.values()):
                bad.append(f"p={p} case {k}")
        tor = tor1_B_over_A(ctx, range(0, 2 * p + 2))
        for i, (pk, quot) in tor.items():
            want = (1,) if i >= p else ()
            if pk != want or quot != want:
                bad.append(f"p={p} tor1 degree {i}")
    n = 3 * cases
    return not bad, f"{n} base changes iso in degrees 0..p-1, Tor1 = k exactly in degrees >= p" \
        if not bad else ", ".join(bad[:5])


# 8 ---------------------------------------------------------------------------

def crit_fl_suite(modules: int = 200, morphisms: int = 200, lifts: int = 100,
                  seed: int = 8) -> tuple[bool, str]:
    rng = random.Random(seed)
    bad = []
    for p in (2, 3, 5):
        ctx = PrimeContext(p, 1)
        for k in range(modules):
            M = random_mod_p_module(ctx, rng, max_dim=4)
            v = fl_validate(M)
            if not v:
                bad.append(f"p={p} module {k}: {v.witness}")
                continue
            if not all(v.diagnostics[f"Hminus1_zero_at_{a}"] for a in (0, 1, p)):
                bad.append(f"p={p} module {k}: H^-1 != 0")
            if graded_dims_of_fiber(M, 0) != graded_dims_of_fiber(M, 1):
                bad.append(f"p={p} module {k}: fiber dimensions differ")
            if k < lifts:
                L = torsionfree_lift(M, 3)
                if L.reduce_mod_p() != M:
                    bad.append(f"p={p} lift {k}")
        for k in range(morphisms):
            f = random_morphism(ctx, rng, max_dim=2)
            if f.check():
                bad.append(f"p={p} morphism {k} is not FL")
                continue
            try:
                fl_kernel(f)
                fl_cokernel(f)
            except ValueError as e:
                bad.append(f"p={p} morphism {k}: {e}")
    detail = (f"{3 * modules} modules, {3 * morphisms} morphisms, {3 * lifts} lifts over p = 2, 3, 5"
              if not bad else "; ".join(bad[:5]))
    return not bad, detail


# 9 ---------------------------------------------------------------------------

def snf_homology_oracle(ctx: PrimeContext, d: la.Matrix, ncols: int) -> tuple[tuple, tuple]:
    """(ker, coker) invariants of a map of free Z/p^N modules straight from the Smith form."""
    N = ctx.N
    nrows = len(d)
    snf = la.smith_normal_form(ctx, d, ncols=ncols, track=False)
    diag = [min(snf.D[k][k].valuation(), N) if k < min(nrows, ncols) else N for k in range(max(nrows, ncols))]
    coker = sorted(diag[k] for k in range(nrows) if diag[k] > 0)
    ker = sorted(diag[k] for k in range(ncols) if diag[k] > 0)
    return tuple(ker), tuple(coker)


def crit_syntomic(cases: int = 50, seed: int = 9) -> tuple[bool, str]:
    bad = []
    ctx = PrimeContext(3, 4)
    unit = tate_twist(ctx, 0)
    expect = {0: ((4,), (4,)), 1: ((), (4,))}
    for i, (h0, h1) in expect.items():
        s = syntomic_cohomology(unit, i)
        got = (s.H0.invariants(), s.H1.invariants())
        g0, gi = unit.pieces[0].g, unit.base.piece(i).g
        if i <= unit.wmax:
            d = la.sub(unit.Phi(i), unit.base.vm_power(i).matrix)
        else:
            d = la.zeros(ctx, g0, gi)
        oracle = snf_homology_oracle(ctx, d, gi)
        if got != (h0, h1) or oracle != (h0, h1):
            bad.append(f"unit i={i}: got {got}, oracle {oracle}")
    rng = random.Random(seed)
    n = 0
    for p in (2, 3, 5):
        cp = PrimeContext(p, 1)
        for k in range(cases):
            M = random_mod_p_module(cp, rng, max_dim=3)
            for i in range(p - 1):
                n += 1
                cc = syn_vs_ext_crosscheck(M, i)
                if not cc:
                    bad.append(f"p={p} case {k} i={i}: syn {cc.syn} vs fl {cc.fl}")
    return not bad, f"unit gauge exact; {n} crosschecks agree" if not bad else "; ".join(bad[:5])


# 10 --------------------------------------------------------------------------

def crit_sen(cases: int = 100, seed: int = 10) -> tuple[bool, str]:
    rng = random.Random(seed)
    bad = []
    for p in (3, 5):
        ctx = PrimeContext(p, 1)
        for k in range(cases):
            M = random_mod_p_module(ctx, rng, wmax=rng.randint(0, p - 2), max_dim=3)
            out = di_maz_endofunctor(M)
            if not (out == M and _phi_bitwise_equal(out, M)):
                bad.append(f"p={p} low case {k} moved")
            M2 = random_mod_p_module(ctx, rng, wmax=p - 1, max_dim=3)
            A = alpha(M2)
            if not la.is_zero(la.matmul(ctx, A, A)):
                bad.append(f"p={p} alpha^2 != 0 on case {k}")
        split = standard_extension(ctx, 0)
        ts = [ctx(t) for t in range(p)]
        for t in ts:
            E = standard_extension(ctx, t)
            out = di_maz_endofunctor(E)
            if out != split or extension_class(out).coords != [0]:
                bad.append(f"p={p} t={t.to_int()}: image is not split")
        ctx2 = PrimeContext(p, 1, 2)
        for _ in range(20):
            t = ctx2.random(rng)
            ec = extension_class(di_maz_endofunctor(standard_extension(ctx2, t)))
            if any(ec.coords) or not ec.splits:
                bad.append(f"p={p} t={t.c} over F_p^2: class survives")
    return not bad, f"{2 * cases} fixed modules, extensions split over F_p and F_p^2, alpha^2 = 0" \
        if not bad else "; ".join(bad[:5])


def _phi_bitwise_equal(a, b) -> bool:
    return all(la.equal(x, y) for x, y in zip(a.phi, b.phi))


# 11 --------------------------------------------------------------------------

def _rand_witt(p: int, n: int, gen: Callable) -> WittVec:
    return WittVec(p, [gen() for _ in range(n)])


def crit_witt_core(cases: int = 1000, seed: int = 11) -> tuple[bool, str]:
    rng = random.Random(seed)
    bad = []
    count = 0
    R = {p: RingDescriptor("B", p, D=200) for p in (2, 3)}
    zq = {p: PrimeContext(p, 4, 2) for p in (2, 3)}
    while count < cases:
        p = rng.choice((2, 3))
        n = rng.randint(2, 3 if p == 2 else 2) if count % 4 == 0 else rng.randint(1, 3)
        kind = count % 3
        if kind == 0:
            gen = lambda: rng.randint(-5, 5)
        elif kind == 1:
            gen = lambda: zq[p].random(rng)
        else:
            n = min(n, 2)
            gen = lambda: random_b_element(R[p], rng, -1, 1)
        x, y, z = (_rand_witt(p, n, gen) for _ in range(3))
        count += 1
        one = teichmuller(p, n, x.comps[0] * 0 + 1)
        zero = x - x
        checks = {
            "add comm": x + y == y + x,
            "mul comm": x * y == y * x,
            "add assoc": (x + y) + z == x + (y + z),
            "mul assoc": (x * y) * z == x * (y * z),
            "distrib": x * (y + z) == x * y + x * z,
            "unit": x * one == x and x + zero == x,
            "neg": (x + (-x)).is_zero(),
            "teich mult": teichmuller(p, n, x.comps[0]) * teichmuller(p, n, y.comps[0])
                          == teichmuller(p, n, x.comps[0] * y.comps[0]),
            "FV = p": frobenius_W(verschiebung(x, keep_length=False)) == x.scalar(p),
        }
        if kind == 2:
            gs = ghost(x * y + z)
            gx, gy, gz = ghost(x), ghost(y), ghost(z)
            checks["ghost hom"] = all(gs[m] == gx[m] * gy[m] + gz[m] for m in range(n))
        for name, ok in checks.items():
            if not ok:
                bad.append(f"{name} p={p} n={n} kind={kind}")
    return not bad, f"{count} random cases over Z, W(F_q)/p^4 and B" if not bad else "; ".join(bad[:5])


CRITERIA: list[tuple[int, str, Callable[[], tuple[bool, str]]]] = [
    (1, "mazur numbers", crit_mazur),
    (2, "pd relations", crit_pd),
    (3, "divisibility", crit_divisibility),
    (4, "big witt root", crit_bigwitt),
    (5, "psi-maz identities", crit_psi_maz),
    (6, "di matrix", crit_di_matrix),
    (7, "effectivity", crit_effectivity),
    (8, "fl abelian suite", crit_fl_suite),
    (9, "syntomic cohomology", crit_syntomic),
    (10, "sen endofunctor", crit_sen),
    (11, "witt core", crit_witt_core),
]


def run_criterion(number: int) -> CriterionResult:
    num, name, fn = CRITERIA[number - 1]
    t0 = time.perf_counter()
    try:
        ok, detail = fn()
    except Exception as e:  # a crash is a failed criterion, reported as such
        ok, detail = False, f"{type(e).__name__}: {e}"
    return CriterionResult(num, name, ok, detail, time.perf_counter() - t0)


def run_all() -> list[CriterionResult]:
    return [run_criterion(n) for n, _, _ in CRITERIA]
