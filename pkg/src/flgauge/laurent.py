"""Graded coefficient rings realized inside Q[v+^{+-1}] with v- = p / v+.

BElement stores exact rational coefficients c_i of c_i v+^i. Integrality in
the divided-power Rees algebra B is the predicate val_p(c_i) >= e(i) - i,
where e is the pd exponent. ModElement carries coordinates in the basis g_i
with coefficients mod p^M, for the quotients B/p^M, A/p^M and C2.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Callable

from .arith import ArithError, _check_prime, pd_exponent, vp_int

KINDS = ("A", "A_mod_p", "C2", "B", "B_mod_p", "Wkv_minus")


class TruncationError(ArithError):
    pass


class IntegralityError(ArithError):
    pass


def vp_frac(x: Fraction, p: int) -> int | None:
    """p-adic valuation of a rational; None for zero."""
    if x == 0:
        return None
    return vp_int(x.numerator, p) - vp_int(x.denominator, p)


@dataclass(frozen=True)
class RingDescriptor:
    kind: str
    p: int
    N: int = 1
    D: int = 8
    strict: bool = False

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown ring kind {self.kind!r}")
        _check_prime(self.p)
        if self.D < 1:
            raise ValueError("window D must be >= 1")

    def min_valuation(self, i: int) -> int:
        """Least valuation of the v+^i coefficient of an integral element."""
        p = self.p
        if self.kind in ("B", "B_mod_p"):
            return pd_exponent(p, i) - i
        return max(0, -i)

    # constructors
    def zero(self) -> "BElement":
        return BElement(self, {})

    def one(self) -> "BElement":
        return BElement(self, {0: Fraction(1)})

    def const(self, c) -> "BElement":
        c = Fraction(c)
        return BElement(self, {0: c} if c else {})

    def vplus(self, k: int = 1) -> "BElement":
        return BElement(self, {k: Fraction(1)})

    def vminus(self, k: int = 1) -> "BElement":
        return BElement(self, {-k: Fraction(self.p) ** k})

    def g(self, i: int) -> "BElement":
        """Basis element g_i = p^{e(i)} v+^i / p^i of B^i."""
        p = self.p
        return BElement(self, {i: Fraction(p) ** (pd_exponent(p, i) - i)})

    def monomial(self, i: int, c) -> "BElement":
        c = Fraction(c)
        return BElement(self, {i: c} if c else {})


class BElement:
    """Truncated Laurent element sum c_i v+^i with exact rational coefficients."""

    __slots__ = ("ring", "coeffs", "truncated")

    def __init__(self, ring: RingDescriptor, coeffs: dict, truncated: bool = False):
        D = ring.D
        out = {}
        for i, c in coeffs.items():
            if not c:
                continue
            if -D <= i <= D:
                out[i] = Fraction(c)
            else:
                if ring.strict:
                    raise TruncationError(f"degree {i} outside window [-{D}, {D}]")
                truncated = True
        self.ring = ring
        self.coeffs = out
        self.truncated = truncated

    def _coerce(self, other) -> "BElement":
        if isinstance(other, BElement):
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.const(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        c = dict(self.coeffs)
        for i, x in o.coeffs.items():
            c[i] = c.get(i, 0) + x
        return BElement(self.ring, c, self.truncated or o.truncated)

    __radd__ = __add__

    def __neg__(self):
        return BElement(self.ring, {i: -x for i, x in self.coeffs.items()}, self.truncated)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return BElement(self.ring, {}, self.truncated)
            return BElement(self.ring, {i: x * other for i, x in self.coeffs.items()}, self.truncated)
        if not isinstance(other, BElement):
            return NotImplemented
        c: dict = {}
        for i, x in self.coeffs.items():
            for j, y in other.coeffs.items():
                c[i + j] = c.get(i + j, 0) + x * y
        return BElement(self.ring, c, self.truncated or other.truncated)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (Fraction(1) / Fraction(other))
        return NotImplemented

    def __pow__(self, e: int):
        if e < 0:
            raise ArithError("negative powers are not supported")
        result = self.ring.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.const(other)
        if not isinstance(other, BElement):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(tuple(sorted(self.coeffs.items())))

    def __bool__(self):
        return bool(self.coeffs)

    def __repr__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for i in sorted(self.coeffs):
            c = self.coeffs[i]
            terms.append(f"{c}*v+^{i}" if i else f"{c}")
        return " + ".join(terms)

    def is_zero(self) -> bool:
        return not self.coeffs

    def degrees(self) -> list[int]:
        return sorted(self.coeffs)

    def is_homogeneous(self, d: int | None = None) -> bool:
        ds = self.degrees()
        if not ds:
            return True
        return len(ds) == 1 and (d is None or ds[0] == d)

    def coefficient(self, i: int) -> Fraction:
        return self.coeffs.get(i, Fraction(0))

    def g_coordinates(self) -> dict:
        """Coefficients b_i with self = sum b_i g_i."""
        p = self.ring.p
        return {i: c * Fraction(p) ** (i - pd_exponent(p, i)) for i, c in self.coeffs.items()}

    def map_coeffs(self, fn: Callable) -> "BElement":
        return BElement(self.ring, {i: fn(c) for i, c in self.coeffs.items()}, self.truncated)


def laurent_ring_ops(x: BElement, y: BElement) -> dict:
    return {"add": x + y, "mul": x * y, "sub": x - y}


@dataclass
class IntegralityResult:
    ok: bool
    degree: int | None = None
    gap: int | None = None

    def __bool__(self):
        return self.ok


def integrality_check(x: BElement) -> IntegralityResult:
    """True iff every coefficient meets the B (or A) valuation bound; else the first failing degree."""
    ring = x.ring
    p = ring.p
    for i in x.degrees():
        if ring.kind == "Wkv_minus" and i > 0:
            return IntegralityResult(False, i, None)
        v = vp_frac(x.coeffs[i], p)
        need = ring.min_valuation(i)
        if v < need:
            return IntegralityResult(False, i, need - v)
    return IntegralityResult(True)


def is_integral(x: BElement) -> bool:
    return integrality_check(x).ok


def gamma(ring: RingDescriptor, n: int, x: BElement | None = None) -> BElement:
    """Divided power gamma_n(x) = x^n / n!, default x = v+."""
    if n < 0:
        raise ValueError("gamma needs n >= 0")
    if x is None:
        if n > ring.D:
            raise TruncationError(f"gamma_{n} outside window D={ring.D}")
        return ring.monomial(n, Fraction(1, factorial(n)))
    return (x ** n) / factorial(n)


@dataclass
class RelationCheck:
    name: str
    n: int
    lhs: BElement
    rhs: BElement
    ok: bool


def verify_pd_relations(p: int, n_max: int, D: int | None = None) -> list[RelationCheck]:
    """Both divided-power relations of B for 1 <= n <= n_max, by exact arithmetic."""
    if D is None:
        D = p ** n_max + p
    if p ** n_max > D:
        raise ValueError("window too small: need p^n_max <= D")
    ring = RingDescriptor("B", p, D=D, strict=True)
    out = []
    for n in range(1, n_max + 1):
        pn, pn1 = p ** n, p ** (n - 1)
        c = Fraction(factorial(pn), factorial(pn1) ** p)
        lhs = gamma(ring, pn) * c
        rhs = gamma(ring, pn1) ** p
        out.append(RelationCheck("frobenius", n, lhs, rhs, lhs == rhs and is_integral(lhs)))
        lhs2 = ring.vminus(pn) * gamma(ring, pn)
        rhs2 = ring.const(Fraction(p ** pn, factorial(pn)))
        out.append(RelationCheck("vminus", n, lhs2, rhs2, lhs2 == rhs2 and is_integral(lhs2)))
    return out


# ---------------------------------------------------------------------------
# reductions: coordinates in a fixed graded basis with coefficients mod p^M

def _frac_mod(c: Fraction, q: int) -> int:
    return c.numerator * pow(c.denominator, -1, q) % q


class ModElement:
    """Element of B/p^M, A/p^M or C2 as {degree: coefficient mod p^M} in the standard basis.

    Bases: B uses g_i; A uses v+^i (i >= 0) and v-^{-i} (i < 0); C2 (mod p
    only) uses (v+^p)^m in degree pm and v-^m in degree -m.
    """

    __slots__ = ("kind", "p", "M", "c")

    def __init__(self, kind: str, p: int, M: int, coeffs: dict):
        q = p ** M
        self.kind = kind
        self.p = p
        self.M = M
        self.c = {i: x % q for i, x in coeffs.items() if x % q}
        if kind == "C2":
            for i in self.c:
                if i > 0 and i % p:
                    raise ValueError(f"C2 has no basis element in degree {i}")

    def _const(self, n: int) -> "ModElement":
        return ModElement(self.kind, self.p, self.M, {0: n})

    def _coerce(self, o):
        if isinstance(o, ModElement):
            return o
        if isinstance(o, int):
            return self._const(o)
        return NotImplemented

    def structure_exponent(self, i: int, j: int) -> int | None:
        """b_i b_j = p^s b_{i+j}; None when the product is zero."""
        p = self.p
        if self.kind in ("B", "B_mod_p"):
            e = lambda k: pd_exponent(p, k)
            return e(i) + e(j) - e(i + j)
        if self.kind in ("A", "A_mod_p"):
            if (i >= 0) == (j >= 0) or i == 0 or j == 0:
                return 0
            return min(abs(i), abs(j))
        # C2: v+^p v- = 0
        if (i > 0 and j < 0) or (i < 0 and j > 0):
            return None
        return 0

    def __add__(self, o):
        o = self._coerce(o)
        if o is NotImplemented:
            return o
        c = dict(self.c)
        for i, x in o.c.items():
            c[i] = c.get(i, 0) + x
        return ModElement(self.kind, self.p, self.M, c)

    __radd__ = __add__

    def __neg__(self):
        return ModElement(self.kind, self.p, self.M, {i: -x for i, x in self.c.items()})

    def __sub__(self, o):
        o = self._coerce(o)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, o):
        return self._coerce(o) - self

    def __mul__(self, o):
        if isinstance(o, int):
            return ModElement(self.kind, self.p, self.M, {i: x * o for i, x in self.c.items()})
        if not isinstance(o, ModElement):
            return NotImplemented
        q = self.p ** self.M
        out: dict = {}
        for i, x in self.c.items():
            for j, y in o.c.items():
                s = self.structure_exponent(i, j)
                if s is None or s >= self.M:
                    continue
                out[i + j] = (out.get(i + j, 0) + x * y * self.p ** s) % q
        return ModElement(self.kind, self.p, self.M, out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        result = self._const(1)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __eq__(self, o):
        if isinstance(o, int):
            o = self._const(o)
        if not isinstance(o, ModElement):
            return NotImplemented
        return self.kind == o.kind and self.c == o.c

    def __hash__(self):
        return hash(tuple(sorted(self.c.items())))

    def __bool__(self):
        return bool(self.c)

    def is_zero(self) -> bool:
        return not self.c

    def degrees(self) -> list[int]:
        return sorted(self.c)

    def __repr__(self):
        if not self.c:
            return "0"
        name = {"B": "g", "B_mod_p": "g", "A": "a", "A_mod_p": "a", "C2": "c"}[self.kind]
        return " + ".join(f"{self.c[i]}*{name}{i}" for i in sorted(self.c))


def reduce_mod(x: BElement, M: int) -> ModElement:
    """Rewrite an integral element of B in the g-basis, coefficients mod p^M."""
    chk = integrality_check(x)
    if not chk:
        raise IntegralityError(f"not integral in degree {chk.degree} (gap {chk.gap})")
    p = x.ring.p
    q = p ** M
    coords = {i: _frac_mod(b, q) for i, b in x.g_coordinates().items()}
    kind = "B_mod_p" if M == 1 else "B"
    return ModElement(kind, p, M, coords)


def mod_g(p: int, M: int, i: int, c: int = 1) -> ModElement:
    return ModElement("B_mod_p" if M == 1 else "B", p, M, {i: c})


def A_to_B_comparison(p: int, degrees) -> dict:
    """For each degree: exponent k with A^i = p^k B^i (0 means equality)."""
    out = {}
    for i in degrees:
        # A^i is spanned by v+^i (i >= 0) or v-^{-i} = p^{-i} v+^i
        a_val = max(0, -i)
        b_val = pd_exponent(p, i) - i
        out[i] = a_val - b_val
    return out
