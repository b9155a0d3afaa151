"""Base arithmetic: truncated unramified p-adic rings, Frobenius, Mazur numbers.

Elements of W_N(F_{p^f}) are stored as coefficient tuples in the generator
``a`` of a monic integer polynomial whose reduction mod p is irreducible.
"""

from __future__ import annotations

import itertools
import random
from functools import lru_cache
from typing import Iterable, Sequence

from sympy import isprime


class ArithError(ValueError):
    pass


class NonUnitError(ArithError):
    def __init__(self, valuation: int):
        super().__init__(f"non-unit: valuation {valuation}")
        self.valuation = valuation


def vp_int(x: int, p: int, cap: int | None = None) -> int:
    """p-adic valuation of an integer, capped at ``cap`` (0 maps to cap)."""
    if x == 0:
        if cap is None:
            raise ArithError("valuation of 0 without a cap")
        return cap
    v = 0
    while x % p == 0:
        x //= p
        v += 1
        if cap is not None and v >= cap:
            return cap
    return v


def digit_sum(m: int, p: int) -> int:
    s = 0
    while m:
        s += m % p
        m //= p
    return s


def _check_prime(p: int) -> None:
    if not isinstance(p, int) or p < 2 or not isprime(p):
        raise ArithError(f"not a prime: {p!r}")


def ord_p_pm_over_mfact(p: int, m: int) -> int:
    """ord_p(p^m / m!) via Legendre's formula."""
    return (m * (p - 2) + digit_sum(m, p)) // (p - 1)


def mazur_number(p: int, n: int) -> int:
    """[n] = min over m >= n of ord_p(p^m/m!)."""
    _check_prime(p)
    if not isinstance(n, int) or n <= 0:
        raise ArithError(f"mazur_number needs n >= 1, got {n!r}")
    return _mazur_cached(p, n)


@lru_cache(maxsize=None)
def _mazur_cached(p: int, n: int) -> int:
    hi = max(4 * n, 4 * p * (n + 1))
    return min(ord_p_pm_over_mfact(p, m) for m in range(n, hi + 1))


def pd_exponent(p: int, i: int) -> int:
    """e(i) = [i] for i >= 1 and 0 otherwise."""
    if i <= 0:
        return 0
    return mazur_number(p, i)


class MazurTable:
    """Table n -> [n] for 1 <= n <= nmax."""

    def __init__(self, p: int, nmax: int):
        _check_prime(p)
        self.p = p
        self.values = {n: mazur_number(p, n) for n in range(1, nmax + 1)}

    def __getitem__(self, n: int) -> int:
        return self.values[n]

    def check(self) -> bool:
        v = self.values
        ok_small = all(v[n] == n for n in v if n < self.p)
        ok_steps = all(v[n + 1] - v[n] in (0, 1) for n in v if n + 1 in v)
        return ok_small and ok_steps


# polynomials over F_p, coefficient lists low -> high

def _poly_mod_p(c: Sequence[int], p: int) -> list[int]:
    out = [x % p for x in c]
    while out and out[-1] == 0:
        out.pop()
    return out


def _poly_rem_p(a: list[int], b: list[int], p: int) -> list[int]:
    a = _poly_mod_p(a, p)
    inv = pow(b[-1], -1, p)
    db = len(b) - 1
    while len(a) - 1 >= db and a:
        c = a[-1] * inv % p
        shift = len(a) - 1 - db
        for k, bk in enumerate(b):
            a[shift + k] = (a[shift + k] - c * bk) % p
        while a and a[-1] == 0:
            a.pop()
    return a


def is_irreducible_mod_p(poly: Sequence[int], p: int) -> bool:
    """Brute-force factor search over monic polynomials of degree <= deg/2."""
    f = _poly_mod_p(poly, p)
    d = len(f) - 1
    if d < 1:
        return False
    for k in range(1, d // 2 + 1):
        for tail in itertools.product(range(p), repeat=k):
            g = list(tail) + [1]
            if not _poly_rem_p(f, g, p):
                return False
    return True


@lru_cache(maxsize=None)
def default_minpoly(p: int, f: int) -> tuple[int, ...]:
    """First monic irreducible of degree f over F_p in lexicographic search."""
    if f == 1:
        return (0, 1)
    for tail in itertools.product(range(p), repeat=f):
        cand = tuple(reversed(tail)) + (1,)
        if cand[0] != 0 and is_irreducible_mod_p(cand, p):
            return cand
    raise ArithError(f"no irreducible polynomial of degree {f} mod {p}")


class PrimeContext:
    """Prime p, precision N and residue degree f with a chosen minpoly."""

    __slots__ = ("p", "N", "f", "minpoly", "modulus", "_frob")

    def __init__(self, p: int, N: int, f: int = 1, minpoly: Sequence[int] | None = None):
        _check_prime(p)
        if N < 1:
            raise ArithError(f"precision N must be >= 1, got {N}")
        if f < 1:
            raise ArithError(f"residue degree f must be >= 1, got {f}")
        if minpoly is None:
            minpoly = default_minpoly(p, f)
        minpoly = tuple(int(c) for c in minpoly)
        if f == 1 and len(minpoly) != 2:
            minpoly = (0, 1)
        if len(minpoly) != f + 1 or minpoly[-1] != 1:
            raise ArithError(f"minpoly must be monic of degree {f}")
        if f > 1 and not is_irreducible_mod_p(minpoly, p):
            raise ArithError(f"minpoly {minpoly} is reducible mod {p}")
        self.p = p
        self.N = N
        self.f = f
        self.minpoly = minpoly
        self.modulus = p ** N
        self._frob = None

    def key(self):
        return (self.p, self.N, self.f, self.minpoly)

    def __eq__(self, other):
        return isinstance(other, PrimeContext) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        if self.f == 1:
            return f"PrimeContext(p={self.p}, N={self.N})"
        return f"PrimeContext(p={self.p}, N={self.N}, f={self.f}, minpoly={self.minpoly})"

    def with_precision(self, N: int) -> "PrimeContext":
        return PrimeContext(self.p, N, self.f, self.minpoly)

    # constructors
    def __call__(self, x) -> "Zq":
        if isinstance(x, Zq):
            if x.ctx == self:
                return x
            return Zq(self, x.c)
        if isinstance(x, int):
            return Zq(self, (x,) + (0,) * (self.f - 1))
        return Zq(self, tuple(x))

    def zero(self) -> "Zq":
        return self(0)

    def one(self) -> "Zq":
        return self(1)

    def gen(self) -> "Zq":
        if self.f == 1:
            raise ArithError("f = 1 has no extension generator")
        return Zq(self, (0, 1) + (0,) * (self.f - 2))

    def random(self, rng: random.Random, unit: bool = False) -> "Zq":
        while True:
            x = Zq(self, tuple(rng.randrange(self.modulus) for _ in range(self.f)))
            if not unit or x.valuation() == 0:
                return x

    def residue_field(self) -> list["Zq"]:
        """All Teichmuller-free lifts of elements of F_{p^f} with digits in [0, p)."""
        return [Zq(self, t) for t in itertools.product(range(self.p), repeat=self.f)]

    def frobenius_root(self) -> "Zq":
        """Root of minpoly congruent to a^p mod p, Hensel lifted to precision N."""
        if self._frob is None:
            self._frob = _hensel_frobenius_root(self)
        return self._frob


def _eval_poly(coeffs: Sequence[int], x: "Zq") -> "Zq":
    acc = x.ctx.zero()
    for c in reversed(coeffs):
        acc = acc * x + x.ctx(c)
    return acc


def _hensel_frobenius_root(ctx: PrimeContext) -> "Zq":
    m = ctx.minpoly
    dm = [k * m[k] for k in range(1, len(m))]
    r = ctx.gen() ** ctx.p
    for _ in range(ctx.N.bit_length() + 2):
        r = r - _eval_poly(m, r) * _eval_poly(dm, r).inverse()
    if _eval_poly(m, r) != ctx.zero():
        raise ArithError("Hensel lifting failed: minpoly inseparable mod p")
    return r


class Zq:
    """Element of W_N(F_{p^f}) as a coefficient tuple in the generator."""

    __slots__ = ("ctx", "c")

    def __init__(self, ctx: PrimeContext, coeffs: Iterable[int]):
        m = ctx.modulus
        c = tuple(int(x) % m for x in coeffs)
        if len(c) != ctx.f:
            raise ArithError(f"expected {ctx.f} coefficients, got {len(c)}")
        self.ctx = ctx
        self.c = c

    @classmethod
    def _raw(cls, ctx: PrimeContext, c: tuple) -> "Zq":
        obj = object.__new__(cls)
        obj.ctx = ctx
        obj.c = c
        return obj

    def _coerce(self, other) -> "Zq":
        if isinstance(other, Zq):
            if other.ctx is not self.ctx and other.ctx != self.ctx:
                raise ArithError("mixed PrimeContexts")
            return other
        if isinstance(other, int):
            return self.ctx(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        m = self.ctx.modulus
        return Zq._raw(self.ctx, tuple((x + y) % m for x, y in zip(self.c, o.c)))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        m = self.ctx.modulus
        return Zq._raw(self.ctx, tuple((x - y) % m for x, y in zip(self.c, o.c)))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        m = self.ctx.modulus
        return Zq._raw(self.ctx, tuple(-x % m for x in self.c))

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        ctx = self.ctx
        m = ctx.modulus
        if ctx.f == 1:
            return Zq._raw(ctx, (self.c[0] * o.c[0] % m,))
        f = ctx.f
        prod = [0] * (2 * f - 1)
        for i, x in enumerate(self.c):
            if x:
                for j, y in enumerate(o.c):
                    prod[i + j] += x * y
        mp = ctx.minpoly
        for k in range(2 * f - 2, f - 1, -1):
            t = prod[k]
            if t:
                for j in range(f):
                    prod[k - f + j] -= t * mp[j]
        return Zq._raw(ctx, tuple(x % m for x in prod[:f]))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = self.ctx.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ctx(other)
        if not isinstance(other, Zq):
            return NotImplemented
        return self.c == other.c and self.ctx == other.ctx

    def __hash__(self):
        return hash(self.c)

    def __bool__(self):
        return any(self.c)

    def __repr__(self):
        if self.ctx.f == 1:
            return f"Zq({self.c[0]})"
        return f"Zq({list(self.c)})"

    def is_zero(self) -> bool:
        return not any(self.c)

    def valuation(self) -> int:
        ctx = self.ctx
        return min(vp_int(x, ctx.p, ctx.N) for x in self.c)

    def is_unit(self) -> bool:
        return any(x % self.ctx.p for x in self.c)

    def inverse(self) -> "Zq":
        ctx = self.ctx
        if not self.is_unit():
            raise NonUnitError(self.valuation())
        if ctx.f == 1:
            return Zq._raw(ctx, (pow(self.c[0], -1, ctx.modulus),))
        # inverse in the residue field, then Newton y <- y(2 - xy)
        y = self ** (ctx.p ** ctx.f - 2)
        for _ in range(ctx.N.bit_length() + 1):
            y = y * (2 - self * y)
        return y

    def divide_p_power(self, v: int) -> "Zq":
        """Exact division by p^v; the result is a representative mod p^(N-v)."""
        q = self.ctx.p ** v
        if any(x % q for x in self.c):
            raise ArithError(f"not divisible by p^{v}")
        return Zq._raw(self.ctx, tuple(x // q for x in self.c))

    def reduce(self, e: int) -> "Zq":
        """Representative reduced mod p^e (e <= N)."""
        q = self.ctx.p ** e
        return Zq._raw(self.ctx, tuple(x % q for x in self.c))

    def lift_to(self, ctx: PrimeContext) -> "Zq":
        """Least non-negative residue representative in a context of another precision."""
        return Zq(ctx, self.c)

    def frobenius(self) -> "Zq":
        return unramified_frobenius(self)

    def to_int(self) -> int:
        if self.ctx.f != 1 and any(self.c[1:]):
            raise ArithError("element does not lie in Z/p^N")
        return self.c[0]


def unramified_frobenius(x: Zq) -> Zq:
    """sigma(x): substitute the Hensel-lifted Frobenius root for the generator."""
    ctx = x.ctx
    if ctx.f == 1:
        return x
    r = ctx.frobenius_root()
    acc = ctx.zero()
    for c in reversed(x.c):
        acc = acc * r + ctx(c)
    return acc


def sigma_power(x: Zq, k: int) -> Zq:
    k %= x.ctx.f
    for _ in range(k):
        x = unramified_frobenius(x)
    return x


def zq_ops(a: Zq, b: Zq) -> dict:
    """Bundle of the basic ring operations, for reports and the CLI."""
    out = {"add": a + b, "sub": a - b, "mul": a * b,
           "val_a": a.valuation(), "val_b": b.valuation()}
    if a.is_unit():
        out["inv_a"] = a.inverse()
    return out
