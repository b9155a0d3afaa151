"""p-typical Witt vectors of finite length, big Witt p-th roots, and identity verifiers.

Structure polynomials come from the ghost recursion over Q, are checked to
have integer coefficients, and are then compiled to plain Python functions
so they can be evaluated in any coefficient ring with +, -, * and int powers
(Zq, BElement, ModElement).
"""

from __future__ import annotations

import random
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence

from sympy import QQ
from sympy.polys.rings import ring as poly_ring

from .arith import _check_prime
from .laurent import (BElement, ModElement, RingDescriptor, integrality_check,
                      is_integral, reduce_mod)

DEFAULT_MAX_LEN = {2: 4, 3: 3, 5: 2}


class WittIntegralityError(AssertionError):
    pass


def _ghost_poly(p: int, xs, m: int):
    return sum((p ** i) * xs[i] ** (p ** (m - i)) for i in range(m + 1))


def _solve_ghost(p: int, targets, n: int):
    """Components s_0..s_{n-1} with ghost_m(s) = targets[m]."""
    s = []
    for m in range(n):
        acc = targets[m] - sum((p ** i) * s[i] ** (p ** (m - i)) for i in range(m))
        s.append(acc * QQ(1, p ** m))
    return s


@dataclass
class StructurePolynomials:
    p: int
    n: int
    sum: list
    diff: list
    prod: list
    frob: list         # length n - 1, in X_0..X_{m+1}
    gens: tuple
    funcs: dict = field(default_factory=dict)


def _assert_integral(polys, label: str) -> None:
    for m, P in enumerate(polys):
        for _, c in P.terms():
            if c.denominator != 1:
                raise WittIntegralityError(f"{label}_{m} has non-integral coefficient {c}")


def _compile(polys, names: list[str], label: str) -> Callable:
    """Python function of the variable tuple returning a list of component values."""
    lines = [f"def _f({', '.join(names)}):", "    out = []"]
    for P in polys:
        terms = []
        for monom, c in P.terms():
            c = int(c.numerator)
            factors = []
            for v, e in zip(names, monom):
                if e == 1:
                    factors.append(v)
                elif e > 1:
                    factors.append(f"{v}**{e}")
            if not factors:
                terms.append(f"({c})")
            elif c == 1:
                terms.append("*".join(factors))
            else:
                terms.append(f"({c})*" + "*".join(factors))
        expr = " + ".join(terms) if terms else "0"
        lines.append(f"    out.append({expr})")
    lines.append("    return out")
    ns: dict = {}
    exec(compile("\n".join(lines), f"<witt {label}>", "exec"), ns)
    return ns["_f"]


def structure_polynomials(p: int, n: int, allow_large: bool = False) -> StructurePolynomials:
    """Sum, difference, product and Frobenius polynomials for W_n, cached per (p, n)."""
    _check_prime(p)
    if n < 1:
        raise ValueError("length must be >= 1")
    bound = DEFAULT_MAX_LEN.get(p, 1)
    if n > bound and not allow_large:
        warnings.warn(f"Witt length {n} above the default bound {bound} for p={p}", stacklevel=2)
    return _structure_cached(p, n)


@lru_cache(maxsize=None)
def _structure_cached(p: int, n: int) -> StructurePolynomials:
    names = [f"X{i}" for i in range(n)] + [f"Y{i}" for i in range(n)]
    R, *gens = poly_ring(",".join(names), QQ)
    X, Y = gens[:n], gens[n:]
    gx = [_ghost_poly(p, X, m) for m in range(n)]
    gy = [_ghost_poly(p, Y, m) for m in range(n)]
    S = _solve_ghost(p, [a + b for a, b in zip(gx, gy)], n)
    Dd = _solve_ghost(p, [a - b for a, b in zip(gx, gy)], n)
    P = _solve_ghost(p, [a * b for a, b in zip(gx, gy)], n)
    Fr = _solve_ghost(p, [_ghost_poly(p, X, m + 1) for m in range(n - 1)], n - 1) if n > 1 else []
    for polys, label in ((S, "S"), (Dd, "D"), (P, "P"), (Fr, "F")):
        _assert_integral(polys, label)
    sp = StructurePolynomials(p, n, S, Dd, P, Fr, tuple(gens))
    sp.funcs["add"] = _compile(S, names, f"S p={p} n={n}")
    sp.funcs["sub"] = _compile(Dd, names, f"D p={p} n={n}")
    sp.funcs["mul"] = _compile(P, names, f"P p={p} n={n}")
    sp.funcs["frob"] = _compile(Fr, names[:n], f"F p={p} n={n}")
    return sp


def _zero_like(x):
    return x * 0


def _one_like(x):
    return x * 0 + 1


class WittVec:
    """Length-n p-typical Witt vector over a coefficient ring."""

    __slots__ = ("p", "comps")

    def __init__(self, p: int, comps: Sequence):
        if not comps:
            raise ValueError("Witt vectors need at least one component")
        self.p = p
        self.comps = tuple(comps)

    @property
    def n(self) -> int:
        return len(self.comps)

    def _sp(self) -> StructurePolynomials:
        return structure_polynomials(self.p, self.n, allow_large=True)

    def _check(self, other: "WittVec") -> None:
        if not isinstance(other, WittVec) or other.p != self.p or other.n != self.n:
            raise ValueError("Witt vectors of different prime or length")

    def __add__(self, other):
        if isinstance(other, int):
            other = witt_integer(self, other)
        self._check(other)
        return WittVec(self.p, self._sp().funcs["add"](*self.comps, *other.comps))

    def __sub__(self, other):
        if isinstance(other, int):
            other = witt_integer(self, other)
        self._check(other)
        return WittVec(self.p, self._sp().funcs["sub"](*self.comps, *other.comps))

    def __neg__(self):
        return WittVec(self.p, [_zero_like(c) for c in self.comps]) - self

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scalar(other)
        self._check(other)
        return WittVec(self.p, self._sp().funcs["mul"](*self.comps, *other.comps))

    def __rmul__(self, other):
        if isinstance(other, int):
            return self.scalar(other)
        return NotImplemented

    def scalar(self, k: int) -> "WittVec":
        """k * x by double-and-add."""
        if k < 0:
            return -self.scalar(-k)
        result = WittVec(self.p, [_zero_like(c) for c in self.comps])
        base = self
        while k:
            if k & 1:
                result = result + base
            k >>= 1
            if k:
                base = base + base
        return result

    def __eq__(self, other):
        if not isinstance(other, WittVec):
            return NotImplemented
        return self.p == other.p and self.comps == other.comps

    def __hash__(self):
        return hash(self.comps)

    def __repr__(self):
        return f"W({', '.join(map(repr, self.comps))})"

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.comps)

    def truncate(self, m: int) -> "WittVec":
        return WittVec(self.p, self.comps[:m])

    def map(self, fn: Callable) -> "WittVec":
        return WittVec(self.p, [fn(c) for c in self.comps])


def witt_zero(p: int, n: int, like) -> WittVec:
    return WittVec(p, [_zero_like(like)] * n)


def witt_one(p: int, n: int, like) -> WittVec:
    return teichmuller(p, n, _one_like(like))


def witt_integer(x: WittVec, k: int) -> WittVec:
    return witt_one(x.p, x.n, x.comps[0]).scalar(k)


def teichmuller(p: int, n: int, r) -> WittVec:
    z = _zero_like(r)
    return WittVec(p, [r] + [z] * (n - 1))


def frobenius_W(x: WittVec) -> WittVec:
    """F: W_n -> W_{n-1}."""
    if x.n < 2:
        raise ValueError("Frobenius needs length >= 2")
    sp = x._sp()
    return WittVec(x.p, sp.funcs["frob"](*x.comps))


def verschiebung(x: WittVec, keep_length: bool = True) -> WittVec:
    """V(x) = (0, x0, x1, ...); truncated back to length n unless keep_length is False."""
    comps = [_zero_like(x.comps[0])] + list(x.comps)
    if keep_length:
        comps = comps[:-1]
    return WittVec(x.p, comps)


def ghost(x: WittVec) -> list:
    p = x.p
    return [sum((p ** i) * x.comps[i] ** (p ** (m - i)) for i in range(m + 1)) for m in range(x.n)]


def from_ghost(p: int, w: Sequence) -> WittVec:
    """Inverse ghost map over a coefficient ring where p is invertible (BElement)."""
    s = []
    for m in range(len(w)):
        acc = w[m] - sum((p ** i) * s[i] ** (p ** (m - i)) for i in range(m))
        s.append(acc * Fraction(1, p ** m))
    return WittVec(p, s)


def witt_ring_ops(x: WittVec, y: WittVec) -> dict:
    return {"add": x + y, "sub": x - y, "mul": x * y}


# ---------------------------------------------------------------------------
# sharp lifts and the divided Teichmuller element over B

def sharp_lift(t: BElement, n: int) -> WittVec:
    """The y in ker F with y_0 = t: ghost components gh_m(y) = 0 for m >= 1."""
    p = t.ring.p
    comps = [t]
    for m in range(1, n):
        acc = sum(((p ** i) * comps[i] ** (p ** (m - i)) for i in range(m)), t.ring.zero())
        comps.append(-acc * Fraction(1, p ** m))
    for m, c in enumerate(comps):
        chk = integrality_check(c)
        if not chk:
            raise WittIntegralityError(
                f"sharp lift component {m} not integral (degree {chk.degree}); "
                "the element has no divided powers")
    return WittVec(p, comps)


def default_window(p: int, n: int) -> int:
    return p ** n + p


def b_ring(p: int, D: int, strict: bool = True) -> RingDescriptor:
    return RingDescriptor("B", p, D=D, strict=strict)


@dataclass
class DividedTeichmuller:
    z: WittVec
    y: WittVec
    diff: WittVec           # [v+] - y at length n + 1


def divided_teichmuller(p: int, n: int, D: int | None = None) -> DividedTeichmuller:
    """z with V(z) = [v+] - sharp_lift(v+); asserts integrality and p z = [v+^p]."""
    if D is None:
        D = max(default_window(p, n), p ** (n + 1))
    if D < p ** n:
        raise ValueError("window D must be >= p^n")
    # the length n + 1 computation reaches degree p^(n+1)
    R = b_ring(p, max(D, p ** (n + 1)))
    v = R.vplus()
    y = sharp_lift(v, n + 1)
    d = teichmuller(p, n + 1, v) - y
    if not d.comps[0].is_zero():
        raise WittIntegralityError("component 0 of [v+] - y is not zero")
    z = WittVec(p, d.comps[1:])
    for m, c in enumerate(z.comps):
        chk = integrality_check(c)
        if not chk:
            raise WittIntegralityError(f"z component {m} not integral (degree {chk.degree})")
    lhs = z.scalar(p)
    rhs = teichmuller(p, n, v ** p)
    if lhs != rhs:
        bad = next(m for m in range(n) if lhs.comps[m] != rhs.comps[m])
        raise WittIntegralityError(f"p*z != [v+^p] in component {bad}")
    return DividedTeichmuller(z, y, d)


# ---------------------------------------------------------------------------
# big Witt vectors: truncated unit power series 1 + c1 x + ... + cD x^D

class BigWitt:
    """Unit power series truncated at x^D; the group law is multiplication."""

    def __init__(self, coeffs: Sequence, D: int):
        if coeffs[0] != 1:
            raise ValueError("big Witt vectors have constant term 1")
        self.D = D
        zero = _zero_like(coeffs[0])
        self.coeffs = list(coeffs[:D + 1]) + [zero] * max(0, D + 1 - len(coeffs))

    def __mul__(self, other: "BigWitt") -> "BigWitt":
        D = min(self.D, other.D)
        zero = _zero_like(self.coeffs[0])
        out = [zero] * (D + 1)
        for i in range(D + 1):
            a = self.coeffs[i]
            if a == 0:
                continue
            for j in range(D + 1 - i):
                b = other.coeffs[j]
                if b != 0:
                    out[i + j] = out[i + j] + a * b
        return BigWitt(out, D)

    def __pow__(self, e: int) -> "BigWitt":
        result = BigWitt([_one_like(self.coeffs[0])], self.D)
        for _ in range(e):
            result = result * self
        return result

    def __eq__(self, other):
        return isinstance(other, BigWitt) and self.D == other.D and self.coeffs == other.coeffs

    def __repr__(self):
        return f"BigWitt({self.coeffs})"


def _series_exp_log_root(a: BElement, p: int, D: int) -> list:
    """Coefficients of exp((1/p) log(1 - a x)) up to x^D."""
    zero = a.ring.zero()
    # L = (1/p) log(1 - a x) = -(1/p) sum a^k x^k / k
    L = [zero] + [(a ** k) * Fraction(-1, p * k) for k in range(1, D + 1)]
    # g' = L' g  ->  k g_k = sum_{j=1}^{k} j L_j g_{k-j}
    g = [a.ring.one()]
    for k in range(1, D + 1):
        acc = zero
        for j in range(1, k + 1):
            acc = acc + L[j] * g[k - j] * j
        g.append(acc * Fraction(1, k))
    return g


@dataclass
class BigWittRoot:
    g: BigWitt
    integral: bool
    identity: bool


def bigwitt_pth_root(p: int, D: int, a: BElement | None = None) -> BigWittRoot:
    """g = exp((1/p) log(1 - v+^p x)) truncated at x^D; checks integrality and g^p = 1 - v+^p x."""
    if D < 2:
        raise ValueError("need D >= 2")
    R = b_ring(p, p * D + p)
    if a is None:
        a = R.vplus() ** p
    coeffs = _series_exp_log_root(a, p, D)
    g = BigWitt(coeffs, D)
    integral = all(is_integral(c) for c in coeffs)
    target = BigWitt([R.one(), -a], D)
    ok = (g ** p) == target
    if not integral:
        bad = next(k for k, c in enumerate(coeffs) if not is_integral(c))
        raise WittIntegralityError(f"coefficient of x^{bad} is not integral")
    if not ok:
        raise WittIntegralityError("g^p != 1 - v+^p x")
    return BigWittRoot(g, integral, ok)


# ---------------------------------------------------------------------------
# reports

@dataclass
class Check:
    name: str
    ok: bool
    detail: str = ""


def _fmt(w: WittVec) -> str:
    return "(" + ", ".join(map(repr, w.comps)) + ")"


def _check_eq(name: str, lhs: WittVec, rhs: WittVec) -> Check:
    ok = lhs == rhs
    return Check(name, ok, "" if ok else f"lhs={_fmt(lhs)} rhs={_fmt(rhs)}")


def random_b_element(R: RingDescriptor, rng: random.Random, lo: int = -2, hi: int = 3) -> BElement:
    """Random integral element: small integer combination of g_i."""
    x = R.zero()
    for i in range(lo, hi + 1):
        c = rng.randint(-3, 3)
        if c:
            x = x + R.g(i) * c
    return x


def psi_maz_panel(p: int, n: int, R: RingDescriptor, size: int = 50, seed: int = 0) -> list[tuple[WittVec, WittVec]]:
    """Pairs (x, y) of integral Witt vectors: sharp lifts, Teichmullers, random vectors."""
    rng = random.Random(seed)
    v = R.vplus()
    pairs = []
    base = [sharp_lift(v, n), sharp_lift(v * 2, n), teichmuller(p, n, v), witt_one(p, n, v),
            witt_zero(p, n, v), teichmuller(p, n, R.vminus())]
    for x in base:
        pairs.append((x, witt_one(p, n, v)))
    while len(pairs) < size:
        kind = rng.randrange(4)
        if kind == 0:
            x = sharp_lift(R.g(rng.randint(1, 2)) * rng.randint(1, 3), n)
        elif kind == 1:
            x = teichmuller(p, n, random_b_element(R, rng, -1, 1))
        else:
            x = WittVec(p, [random_b_element(R, rng, -1, 1) for _ in range(n)])
        y = WittVec(p, [random_b_element(R, rng, -1, 1) for _ in range(n)])
        pairs.append((x, y))
    return pairs[:size]


def verify_psi_maz(p: int, n: int, D: int | None = None, panel_size: int = 50) -> list[Check]:
    """w = [v+] - V(z): F(w) = 0, [v-] w + V(1) = p, and V(y F(x)) = x V(y) on a panel."""
    dt = divided_teichmuller(p, n, D)
    z = dt.z
    R = z.comps[0].ring
    v = R.vplus()
    w = teichmuller(p, n, v) - verschiebung(z)
    out = []
    Fw = frobenius_W(w)
    out.append(Check("F(w) = 0", Fw.is_zero(), "" if Fw.is_zero() else f"F(w)={_fmt(Fw)}"))
    one = witt_one(p, n, v)
    lhs = teichmuller(p, n, R.vminus()) * w + verschiebung(one)
    out.append(_check_eq("[v-] w + V(1) = p", lhs, one.scalar(p)))
    # the same identity at the Teichmuller level over Z_p inside B degree 0
    P = teichmuller(p, n, R.const(p))
    q = teich_pow_over_p(P, p)
    lhs_t = P + verschiebung(one - q)
    out.append(_check_eq("[p] + V(1 - [p]^p / p) = p", lhs_t, one.scalar(p)))
    # panel in a larger window
    Rbig = RingDescriptor("B", p, D=max(R.D, 8 * p ** n), strict=True)
    panel = psi_maz_panel(p, n, Rbig, panel_size)
    bad = []
    for k, (x, y) in enumerate(panel):
        l = verschiebung(y.truncate(n - 1) * frobenius_W(x), keep_length=False)
        r = x * verschiebung(y)
        if l != r:
            bad.append(k)
    out.append(Check(f"V(y F(x)) = x V(y) on {len(panel)} pairs", not bad,
                     "" if not bad else f"failing pairs {bad}"))
    sharp_ok = all((x * verschiebung(dt.z)).is_zero() for x, _ in panel[:2])
    out.append(Check("V(z) x = 0 for sharp x", sharp_ok))
    return out


def teich_pow_over_p(P: WittVec, p: int) -> WittVec:
    """The Witt vector [p]^p / p, via ghost components p^(p^(m+1) - 1); asserted integral."""
    c = P.comps[0]
    q = from_ghost(p, [c ** (p ** (m + 1)) * Fraction(1, p) for m in range(P.n)])
    if not all(is_integral(x) for x in q.comps):
        raise WittIntegralityError("[p]^p / p is not integral")
    return q


def verify_di_matrix(p: int, n: int, D: int | None = None) -> list[Check]:
    """f + V(u) = [v+] over B/p with u = z mod p, and homogeneity of z."""
    dt = divided_teichmuller(p, n, D)
    z = dt.z
    out = []
    degs = []
    homog = True
    for m, c in enumerate(z.comps):
        ds = c.degrees()
        degs.append(ds[0] if len(ds) == 1 else ds)
        if not c.is_homogeneous(p ** (m + 1)):
            homog = False
    out.append(Check("component m of z has degree p^(m+1)", homog, f"degrees={degs}"))
    u = z.map(lambda c: reduce_mod(c, 1))
    vplus = ModElement("B_mod_p", p, 1, {1: 1})
    tv = teichmuller(p, n, vplus)
    f = tv - verschiebung(u)
    out.append(_check_eq("f + V(u) = [v+]", f + verschiebung(u), tv))
    low = u.map(lambda c: ModElement(c.kind, c.p, c.M, {i: x for i, x in c.c.items() if i < p - 1}))
    out.append(Check("u vanishes in degrees < p-1", low.is_zero()))
    return out


def z_component_degrees(p: int, n: int) -> list[int]:
    z = divided_teichmuller(p, n).z
    return [c.degrees()[0] for c in z.comps]
