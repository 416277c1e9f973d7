"""Exact arithmetic over Q, F_p, F_p[t] and F_p(t), with places and reduction.

Elements of Q are plain ``int`` or :class:`fractions.Fraction`.  Elements of
F_p(t) are :class:`RatFunc`; residue fields are :class:`FiniteField` with
elements :class:`FFElem`.  Every field object exposes the same small
protocol (``zero``, ``one``, ``convert``, ``div``, ``characteristic``) so the
form and map code above it is written once.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from functools import lru_cache, total_ordering

from sympy import factorint, isprime
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_factor

from .errors import NegativeValuation

INF = math.inf


# --------------------------------------------------------------------------
# F_p[t]
# --------------------------------------------------------------------------

@total_ordering
class FpPoly:
    """Polynomial over F_p, coefficients stored low degree first.

    The zero polynomial has an empty coefficient tuple.  Instances are
    immutable and hashable; ordering is by (degree, coefficients from the top)
    which gives a deterministic enumeration order.
    """

    __slots__ = ("c", "p")

    def __init__(self, coeffs, p):
        c = [int(a) % p for a in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.c = tuple(c)
        self.p = p

    @classmethod
    def _raw(cls, c, p):
        obj = object.__new__(cls)
        obj.c = c
        obj.p = p
        return obj

    @classmethod
    def const(cls, a, p):
        return cls((a,), p)

    @classmethod
    def gen(cls, p):
        return cls((0, 1), p)

    @property
    def deg(self):
        return len(self.c) - 1 if self.c else -1

    @property
    def lc(self):
        return self.c[-1] if self.c else 0

    def is_zero(self):
        return not self.c

    def is_const(self):
        return len(self.c) <= 1

    def _coerce(self, other):
        if isinstance(other, FpPoly):
            return other
        if isinstance(other, int):
            return FpPoly((other,), self.p)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.c, other.c
        if len(a) < len(b):
            a, b = b, a
        p = self.p
        return FpPoly([(x + y) % p for x, y in itertools.zip_longest(a, b, fillvalue=0)], p)

    __radd__ = __add__

    def __neg__(self):
        return FpPoly._raw(tuple((-x) % self.p for x in self.c), self.p)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.c, other.c
        if not a or not b:
            return FpPoly._raw((), self.p)
        p = self.p
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return FpPoly(out, p)

    __rmul__ = __mul__

    def __pow__(self, n):
        result = FpPoly((1,), self.p)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __divmod__(self, other):
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        p = self.p
        r = list(self.c)
        db = other.deg
        inv = pow(other.lc, -1, p)
        q = [0] * max(len(r) - db, 0)
        for k in range(len(r) - 1, db - 1, -1):
            coef = r[k] * inv % p
            if coef:
                q[k - db] = coef
                for j, y in enumerate(other.c):
                    r[k - db + j] = (r[k - db + j] - coef * y) % p
        return FpPoly(q, p), FpPoly(r[:db] if db > 0 else [], p)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __eq__(self, other):
        if isinstance(other, FpPoly):
            return self.p == other.p and self.c == other.c
        if isinstance(other, int):
            return self.c == FpPoly((other,), self.p).c
        return NotImplemented

    def __hash__(self):
        return hash((self.c, self.p))

    def __lt__(self, other):
        return (self.deg, self.c[::-1]) < (other.deg, other.c[::-1])

    def __call__(self, x):
        acc = 0
        for a in reversed(self.c):
            acc = acc * x + a
        if isinstance(acc, int):
            return acc % self.p
        return acc

    def monic(self):
        if not self.c or self.c[-1] == 1:
            return self
        inv = pow(self.c[-1], -1, self.p)
        return FpPoly([a * inv for a in self.c], self.p)

    def derivative(self):
        return FpPoly([i * a for i, a in enumerate(self.c)][1:], self.p)

    def is_pth_power(self):
        return all(a == 0 for i, a in enumerate(self.c) if i % self.p)

    def pth_root(self):
        # Frobenius is the identity on F_p
        if not self.is_pth_power():
            raise ValueError(f"{self} is not a p-th power")
        return FpPoly(self.c[:: self.p], self.p)

    def __repr__(self):
        return f"FpPoly({self}, p={self.p})"

    def __str__(self):
        return poly_str(self.c, "t")


def poly_str(coeffs, var):
    """Render low-to-high coefficients as ``3*t^2+t+1``."""
    if not coeffs:
        return "0"
    terms = []
    for i in range(len(coeffs) - 1, -1, -1):
        a = coeffs[i]
        if not a:
            continue
        if i == 0:
            terms.append(str(a))
        else:
            mono = var if i == 1 else f"{var}^{i}"
            terms.append(mono if a == 1 else f"{a}*{mono}")
    return "+".join(terms)


def fp_gcd(a, b):
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def fp_xgcd(a, b):
    """Return (g, s, t) with s*a + t*b = g monic."""
    p = a.p
    r0, r1 = a, b
    s0, s1 = FpPoly((1,), p), FpPoly((), p)
    t0, t1 = FpPoly((), p), FpPoly((1,), p)
    while not r1.is_zero():
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    inv = pow(r0.lc, -1, p)
    return r0 * inv, s0 * inv, t0 * inv


def monic_polys(p, degree):
    """All monic polynomials over F_p of exactly the given degree."""
    for tail in itertools.product(range(p), repeat=degree):
        yield FpPoly(tail + (1,), p)


def is_irreducible(f):
    """Trial division by every monic polynomial of degree <= deg f / 2."""
    if f.deg < 1:
        return False
    for k in range(1, f.deg // 2 + 1):
        for g in monic_polys(f.p, k):
            if (f % g).is_zero():
                return False
    return True


def fp_factor(f):
    """Monic irreducible factors of f with multiplicities, sorted."""
    if f.deg < 1:
        return []
    dense = [ZZ(a) for a in reversed(f.c)]
    _, facs = gf_factor(dense, f.p, ZZ)
    out = [(FpPoly([int(a) for a in reversed(g)], f.p), e) for g, e in facs]
    return sorted(out)


# --------------------------------------------------------------------------
# F_p(t)
# --------------------------------------------------------------------------

class RatFunc:
    """Element of F_p(t) as a reduced fraction with monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        p = num.p
        if den is None:
            den = FpPoly._raw((1,), p)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            self.num, self.den = num, FpPoly._raw((1,), p)
            return
        if den.deg > 0:
            g = fp_gcd(num, den)
            if g.deg > 0:
                num, den = num // g, den // g
        if den.lc != 1:
            inv = pow(den.lc, -1, p)
            num, den = num * inv, den * inv
        self.num, self.den = num, den

    @property
    def p(self):
        return self.num.p

    def _coerce(self, other):
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, FpPoly):
            return RatFunc(other)
        if isinstance(other, int):
            return RatFunc(FpPoly((other,), self.p))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.den == other.den:
            return RatFunc(self.num + other.num, self.den)
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.num.is_zero():
            raise ZeroDivisionError("division by zero in F_p(t)")
        return RatFunc(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, n):
        if n < 0:
            return RatFunc(self.den, self.num) ** (-n)
        return RatFunc(self.num ** n, self.den ** n)

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return False
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        if self.den.deg == 0 and self.num.deg <= 0:
            return hash(self.num.c[0] if self.num.c else 0)
        return hash((self.num, self.den))

    def is_zero(self):
        return self.num.is_zero()

    def derivative(self):
        """d/dt via the quotient rule."""
        n, d = self.num, self.den
        return RatFunc(n.derivative() * d - n * d.derivative(), d * d)

    def __repr__(self):
        return f"RatFunc({self})"

    def __str__(self):
        if self.den.deg == 0:
            return str(self.num)
        return f"({self.num})/({self.den})"


# --------------------------------------------------------------------------
# Residue fields F_p[t]/(pi)
# --------------------------------------------------------------------------

class FFElem:
    """Element of a finite field F_p[t]/(pi), stored as a reduced polynomial."""

    __slots__ = ("poly", "field")

    def __init__(self, poly, field):
        self.poly = poly
        self.field = field

    def _coerce(self, other):
        if isinstance(other, FFElem):
            return other
        if isinstance(other, int):
            return self.field.convert(other)
        return NotImplemented

    def _wrap(self, poly):
        if poly.deg >= self.field.k:
            poly = poly % self.field.modulus
        return FFElem(poly, self.field)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return FFElem(self.poly + other.poly, self.field)

    __radd__ = __add__

    def __neg__(self):
        return FFElem(-self.poly, self.field)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return FFElem(self.poly - other.poly, self.field)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._wrap(self.poly * other.poly)

    __rmul__ = __mul__

    def inverse(self):
        if self.poly.is_zero():
            raise ZeroDivisionError("inverse of zero in a finite field")
        if self.field.k == 1:
            return FFElem(FpPoly((pow(self.poly.c[0], -1, self.field.p),), self.field.p), self.field)
        g, s, _ = fp_xgcd(self.poly, self.field.modulus)
        return FFElem(s % self.field.modulus, self.field)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.field.one
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return False
        return self.field == other.field and self.poly == other.poly

    def __hash__(self):
        if self.poly.deg <= 0:
            return hash(self.poly.c[0] if self.poly.c else 0)
        return hash((self.poly, self.field.modulus))

    def is_zero(self):
        return self.poly.is_zero()

    def __repr__(self):
        return f"FFElem({self})"

    def __str__(self):
        return poly_str(self.poly.c, "a") if self.field.k > 1 else str(self.poly.c[0] if self.poly.c else 0)


# --------------------------------------------------------------------------
# Field objects
# --------------------------------------------------------------------------

class RationalField:
    """The field Q; elements are ``int`` or ``Fraction``."""

    characteristic = 0
    is_finite = False
    zero = 0
    one = 1

    def convert(self, x):
        if isinstance(x, (int, Fraction)):
            return x
        raise TypeError(f"cannot convert {x!r} to Q")

    def div(self, a, b):
        if b == 0:
            raise ZeroDivisionError("division by zero in Q")
        if type(a) is int and type(b) is int:
            if a % b == 0:
                return a // b
            return Fraction(a, b)
        q = Fraction(a) / b
        return q.numerator if q.denominator == 1 else q

    def gen_points(self):
        """Distinct elements used for interpolation."""
        return itertools.count()

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")

    def __repr__(self):
        return "QQ"


QQ = RationalField()


class FunctionField:
    """The rational function field F_p(t)."""

    is_finite = False

    def __init__(self, p):
        if not isprime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.characteristic = p
        self.zero = RatFunc(FpPoly((), p))
        self.one = RatFunc(FpPoly((1,), p))
        self.t = RatFunc(FpPoly((0, 1), p))

    def convert(self, x):
        if isinstance(x, RatFunc):
            return x
        if isinstance(x, FpPoly):
            return RatFunc(x)
        if isinstance(x, int):
            return RatFunc(FpPoly((x,), self.p))
        if isinstance(x, Fraction):
            return self.div(self.convert(x.numerator), self.convert(x.denominator))
        raise TypeError(f"cannot convert {x!r} to F_{self.p}(t)")

    def div(self, a, b):
        return self.convert(a) / self.convert(b)

    def poly(self, coeffs):
        return RatFunc(FpPoly(coeffs, self.p))

    def pth_root(self, a):
        return RatFunc(a.num.pth_root(), a.den.pth_root())

    def is_pth_power(self, a):
        return a.num.is_pth_power() and a.den.is_pth_power()

    def gen_points(self):
        """Distinct elements: constants first, then polynomials of rising degree."""
        p = self.p
        for deg in itertools.count(0):
            for tail in itertools.product(range(p), repeat=deg):
                for lead in range(1 if deg else 0, p):
                    yield RatFunc(FpPoly(tail + (lead,), p))

    def __eq__(self, other):
        return isinstance(other, FunctionField) and other.p == self.p

    def __hash__(self):
        return hash(("Fp(t)", self.p))

    def __repr__(self):
        return f"F_{self.p}(t)"


class FiniteField:
    """F_p[t]/(modulus) for a monic irreducible modulus."""

    is_finite = True

    def __init__(self, p, modulus=None):
        if modulus is None:
            modulus = FpPoly((0, 1), p)
        self.p = p
        self.characteristic = p
        self.modulus = modulus
        self.k = modulus.deg
        self.order = p ** self.k
        self.zero = FFElem(FpPoly((), p), self)
        self.one = FFElem(FpPoly((1,), p), self)

    def convert(self, x):
        if isinstance(x, FFElem):
            if x.field != self:
                raise TypeError("element of a different finite field")
            return x
        if isinstance(x, int):
            return FFElem(FpPoly((x,), self.p), self)
        if isinstance(x, FpPoly):
            return FFElem(x % self.modulus, self)
        raise TypeError(f"cannot convert {x!r} to {self!r}")

    def div(self, a, b):
        return self.convert(a) / self.convert(b)

    def elements(self):
        for cs in itertools.product(range(self.p), repeat=self.k):
            yield FFElem(FpPoly(cs, self.p), self)

    def pth_root(self, a):
        return a ** (self.order // self.p)

    def is_pth_power(self, a):
        return True

    def gen_points(self):
        return iter(self.elements())

    def __eq__(self, other):
        return isinstance(other, FiniteField) and other.p == self.p and other.modulus == self.modulus

    def __hash__(self):
        return hash(("GF", self.p, self.modulus))

    def __repr__(self):
        return f"GF({self.p})" if self.k == 1 else f"GF({self.p}^{self.k})"


@lru_cache(maxsize=None)
def GF(p, k=1):
    """The field with p^k elements, built from the first irreducible modulus."""
    if k == 1:
        return FiniteField(p)
    for f in monic_polys(p, k):
        if is_irreducible(f):
            return FiniteField(p, f)
    raise AssertionError("unreachable: irreducibles exist in every degree")


def field_of(x):
    """Best-effort field of a bare element."""
    if isinstance(x, (int, Fraction)):
        return QQ
    if isinstance(x, RatFunc):
        return FunctionField(x.p)
    if isinstance(x, FFElem):
        return x.field
    raise TypeError(f"unknown element type {type(x).__name__}")


def is_zero(x):
    return x == 0


# --------------------------------------------------------------------------
# Places
# --------------------------------------------------------------------------

class Place:
    """A non-archimedean place of Q or F_p(t).

    ``Place.prime(7)`` is the 7-adic place of Q; ``Place.poly(f, p)`` is the
    place of F_p(t) at a monic irreducible ``f``; ``Place.infinity(p)`` is the
    place at infinity of F_p(t).
    """

    __slots__ = ("field", "gen", "_key")

    def __init__(self, field, gen):
        self.field = field
        self.gen = gen
        if field == QQ:
            if not isinstance(gen, int) or not isprime(gen):
                raise ValueError(f"{gen!r} is not a prime number")
            self._key = (0, gen)
        else:
            if gen is None:
                self._key = (2, 0)
            else:
                if not isinstance(gen, FpPoly) or gen.p != field.p or gen.lc != 1 or not is_irreducible(gen):
                    raise ValueError(f"{gen!r} is not a monic irreducible over F_{field.p}")
                self._key = (1, gen.deg, gen.c[::-1])

    @classmethod
    def prime(cls, p):
        return cls(QQ, p)

    @classmethod
    def poly(cls, f, p=None):
        if not isinstance(f, FpPoly):
            f = FpPoly(f, p)
        return cls(FunctionField(f.p), f)

    @classmethod
    def infinity(cls, p):
        return cls(FunctionField(p), None)

    @property
    def is_infinite(self):
        return self.gen is None

    @property
    def residue_characteristic(self):
        return self.gen if self.field == QQ else self.field.p

    @property
    def degree(self):
        """Degree of the residue field over its prime field."""
        if self.field == QQ or self.gen is None:
            return 1
        return self.gen.deg

    def residue_field(self):
        if self.field == QQ:
            return GF(self.gen)
        if self.gen is None or self.gen.deg == 1:
            return GF(self.field.p)
        return FiniteField(self.field.p, self.gen)

    def uniformizer(self):
        if self.field == QQ:
            return self.gen
        if self.gen is None:
            return RatFunc(FpPoly((1,), self.field.p), FpPoly((0, 1), self.field.p))
        return RatFunc(self.gen)

    def __eq__(self, other):
        return isinstance(other, Place) and self.field == other.field and self._key == other._key

    def __hash__(self):
        return hash((self.field, self._key))

    def __lt__(self, other):
        return self._key < other._key

    def __repr__(self):
        return f"Place({self})"

    def __str__(self):
        if self.field == QQ:
            return str(self.gen)
        if self.gen is None:
            return "inf"
        return str(self.gen)


def _ord_int(n, p):
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def _ord_poly(f, g):
    k = 0
    while True:
        q, r = divmod(f, g)
        if not r.is_zero():
            return k
        f = q
        k += 1


def valuation(x, v):
    """ord_v(x); ``math.inf`` exactly when x == 0."""
    if x == 0:
        return INF
    if v.field == QQ:
        x = Fraction(x)
        return _ord_int(x.numerator, v.gen) - _ord_int(x.denominator, v.gen)
    x = v.field.convert(x)
    if v.gen is None:
        return x.den.deg - x.num.deg
    return _ord_poly(x.num, v.gen) - _ord_poly(x.den, v.gen)


def reduce_at(x, v):
    """Image of a v-integral element in the residue field of v."""
    k = v.residue_field()
    if x == 0:
        return k.zero
    if valuation(x, v) < 0:
        raise NegativeValuation(f"ord_{v}({x}) < 0")
    if v.field == QQ:
        x = Fraction(x)
        p = v.gen
        return k.convert(x.numerator * pow(x.denominator, -1, p) % p)
    x = v.field.convert(x)
    if v.gen is None:
        if x.num.deg < x.den.deg:
            return k.zero
        return k.convert(x.num.lc * pow(x.den.lc, -1, v.field.p))
    num = k.convert(x.num % v.gen)
    den = k.convert(x.den % v.gen)
    return num / den


def is_unit_at(x, v):
    return x != 0 and valuation(x, v) == 0


def s_ring_units(S, exponent_bound, field=QQ):
    """S-units with every generator exponent bounded by ``exponent_bound``.

    Over Q these are the numbers +-prod p^e.  Over F_p(t) they are
    c * prod pi^e for the finite places pi in S; when the infinite place is
    not in S the exponents must also balance so that ord_inf is zero.
    Returned as a sorted list (deterministic order).
    """
    S = sorted(S)
    if field == QQ:
        primes = [v.gen for v in S]
        out = set()
        for exps in itertools.product(range(-exponent_bound, exponent_bound + 1), repeat=len(primes)):
            x = Fraction(1)
            for q, e in zip(primes, exps):
                x *= Fraction(q) ** e
            x = x.numerator if x.denominator == 1 else x
            out.add(x)
            out.add(-x)
        return sorted(out)
    p = field.p
    finite = [v for v in S if not v.is_infinite]
    inf_in_s = any(v.is_infinite for v in S)
    out = []
    for exps in itertools.product(range(-exponent_bound, exponent_bound + 1), repeat=len(finite)):
        if not inf_in_s and sum(e * v.gen.deg for v, e in zip(finite, exps)) != 0:
            continue
        x = field.one
        for v, e in zip(finite, exps):
            x = x * RatFunc(v.gen) ** e
        for c in range(1, p):
            out.append(x * c)
    return sorted(set(out), key=element_key)


def support(x, field):
    """Finite places where x has nonzero valuation (x nonzero)."""
    if field == QQ:
        x = Fraction(x)
        primes = set(factorint(abs(x.numerator))) | set(factorint(x.denominator))
        primes.discard(1)
        return sorted(Place.prime(int(q)) for q in primes)
    x = field.convert(x)
    places = set()
    for f in (x.num, x.den):
        for g, _ in fp_factor(f):
            places.add(Place(field, g))
    return sorted(places)


def element_str(x):
    """Canonical string for an exact element: ``"n"``, ``"n/d"`` or an F_p(t) expression."""
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    return str(x)


def element_key(x):
    """Deterministic sort key for exact elements of a single field."""
    if isinstance(x, (int, Fraction)):
        return (0, Fraction(x))
    if isinstance(x, RatFunc):
        return (1, x.den.deg, x.den.c[::-1], x.num.deg, x.num.c[::-1])
    if isinstance(x, FFElem):
        return (2, x.poly.c)
    return (3, str(x))
