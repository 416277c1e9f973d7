"""Homogeneous binary forms over an exact field.

A form of degree d is stored as the tuple ``(c_0, ..., c_d)`` where ``c_i`` is
the coefficient of ``x0^(d-i) * x1^i``.  Points of P^1 are pairs ``(a, b)``
meaning ``[a:b]``; the affine coordinate is ``z = a/b`` so ``[1:0]`` is
infinity.  Dehomogenising at ``x1 = 1`` turns the coefficient tuple directly
into a dense univariate polynomial listed from the top degree down.

Sylvester convention (fixed once, used everywhere): the matrix of
``resultant(F, G)`` has the shifted coefficient rows of ``F`` first
(``deg G`` of them) followed by ``deg F`` rows of ``G``.  With this choice
``resultant(x0, x1) == 1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm

from sympy import Poly, Symbol

from .errors import DegreeMismatch, DegreeTooSmall, NotPrimitive, ZeroForm
from .exactalg import (
    QQ,
    FiniteField,
    FpPoly,
    FunctionField,
    RatFunc,
    element_key,
    element_str,
    fp_factor,
    fp_gcd,
    reduce_at,
    valuation,
)


class BinaryForm:
    """Immutable binary form ``sum c_i x0^(d-i) x1^i`` over ``field``."""

    __slots__ = ("coeffs", "field")

    def __init__(self, coeffs, field=QQ):
        self.field = field
        self.coeffs = tuple(field.convert(c) for c in coeffs)
        if not self.coeffs:
            raise ValueError("a form needs at least one coefficient")

    @classmethod
    def _raw(cls, coeffs, field):
        obj = object.__new__(cls)
        obj.coeffs = coeffs
        obj.field = field
        return obj

    @classmethod
    def linear(cls, point, field=QQ):
        """The linear form vanishing at ``[a:b]``, namely ``b*x0 - a*x1``."""
        a, b = point
        return cls((b, -a), field)

    @classmethod
    def from_points(cls, points, field=QQ):
        G = cls((1,), field)
        for pt in points:
            G = G * cls.linear(pt, field)
        return G

    @classmethod
    def monomial(cls, i, j, field=QQ, coeff=1):
        """``coeff * x0^i * x1^j``."""
        c = [0] * (i + j + 1)
        c[j] = coeff
        return cls(c, field)

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def is_zero(self):
        return all(c == 0 for c in self.coeffs)

    def __eq__(self, other):
        return isinstance(other, BinaryForm) and self.field == other.field and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other):
        if self.degree != other.degree:
            raise DegreeMismatch("can only add forms of equal degree")
        return BinaryForm._raw(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)), self.field)

    def __sub__(self, other):
        if self.degree != other.degree:
            raise DegreeMismatch("can only subtract forms of equal degree")
        return BinaryForm._raw(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)), self.field)

    def __neg__(self):
        return BinaryForm._raw(tuple(-a for a in self.coeffs), self.field)

    def __mul__(self, other):
        if isinstance(other, BinaryForm):
            return BinaryForm._raw(tuple(_pmul(self.coeffs, other.coeffs, self.field)), self.field)
        c = self.field.convert(other)
        return BinaryForm._raw(tuple(a * c for a in self.coeffs), self.field)

    __rmul__ = __mul__

    def __pow__(self, n):
        out = BinaryForm((1,), self.field)
        for _ in range(n):
            out = out * self
        return out

    def __call__(self, x0, x1):
        d = self.degree
        acc = 0
        for i, c in enumerate(self.coeffs):
            if c != 0:
                acc = acc + c * x0 ** (d - i) * x1 ** i
        return acc

    def d0(self):
        """Partial derivative in x0."""
        d = self.degree
        if d == 0:
            return BinaryForm((0,), self.field)
        return BinaryForm._raw(tuple(c * (d - i) for i, c in enumerate(self.coeffs[:-1])), self.field)

    def d1(self):
        """Partial derivative in x1."""
        if self.degree == 0:
            return BinaryForm((0,), self.field)
        return BinaryForm._raw(tuple(c * i for i, c in enumerate(self.coeffs) if i), self.field)

    def map_coeffs(self, fn, field):
        return BinaryForm(tuple(fn(c) for c in self.coeffs), field)

    def substitute(self, L0, L1):
        """G(L0, L1) for linear forms L0, L1."""
        d = self.degree
        out = None
        p0 = [BinaryForm((1,), self.field)]
        p1 = [BinaryForm((1,), self.field)]
        for _ in range(d):
            p0.append(p0[-1] * L0)
            p1.append(p1[-1] * L1)
        for i, c in enumerate(self.coeffs):
            term = p0[d - i] * p1[i] * c
            out = term if out is None else out + term
        return out

    def __repr__(self):
        return f"BinaryForm({self}, {self.field!r})"

    def __str__(self):
        d = self.degree
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = "*".join(
                f"{v}^{e}" if e > 1 else v for v, e in (("x0", d - i), ("x1", i)) if e
            )
            cs = element_str(c)
            if isinstance(c, RatFunc) and (c.den.deg > 0 or len([a for a in c.num.c if a]) > 1):
                cs = f"({cs})"
            elif isinstance(c, Fraction) and c.denominator != 1:
                cs = f"({cs})"
            if not mono:
                terms.append(cs)
            elif cs == "1":
                terms.append(mono)
            elif cs == "-1":
                terms.append("-" + mono)
            else:
                terms.append(f"{cs}*{mono}")
        return " + ".join(terms).replace("+ -", "- ") if terms else "0"


# --------------------------------------------------------------------------
# dense univariate helpers (coefficient lists from the top degree down)
# --------------------------------------------------------------------------

def _strip(a):
    i = 0
    while i < len(a) and a[i] == 0:
        i += 1
    return list(a[i:])


def _pmul(a, b, K):
    if not a or not b:
        return []
    out = [K.zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x != 0:
            for j, y in enumerate(b):
                out[i + j] = out[i + j] + x * y
    return out


def _pdivmod(a, b, K):
    a = _strip(a)
    b = _strip(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    if len(a) < len(b):
        return [], a
    lead = b[0]
    r = list(a)
    q = []
    for i in range(len(a) - len(b) + 1):
        c = K.div(r[i], lead)
        q.append(c)
        if c != 0:
            for j in range(1, len(b)):
                r[i + j] = r[i + j] - c * b[j]
    return q, _strip(r[len(a) - len(b) + 1:])


def _pmonic(a, K):
    a = _strip(a)
    if not a:
        return a
    return [K.div(c, a[0]) for c in a]


def _pgcd(a, b, K):
    a, b = _strip(a), _strip(b)
    while b:
        a, b = b, _pdivmod(a, b, K)[1]
    return _pmonic(a, K)


def _pderiv(a):
    n = len(a) - 1
    return _strip([c * (n - i) for i, c in enumerate(a[:-1])])


def _pquo(a, b, K):
    q, r = _pdivmod(a, b, K)
    if r:
        raise ArithmeticError("inexact polynomial division")
    return q


def _sqf_part(g, K):
    """Squarefree part of a univariate polynomial over K (monic)."""
    g = _strip(g)
    if len(g) <= 1:
        return [K.one]
    dg = _pderiv(g)
    if not dg:
        return _pth_power_radical(g, K)
    w = _pquo(g, _pgcd(g, dg, K), K)
    if K.characteristic == 0:
        return _pmonic(w, K)
    # factors of multiplicity divisible by p survive only in gcd(g, g')
    y = _pgcd(g, dg, K)
    while True:
        h = _pgcd(y, w, K)
        if len(h) <= 1:
            break
        y = _pquo(y, h, K)
    if len(y) <= 1:
        return _pmonic(w, K)
    return _pmonic(_pmul(w, _pth_power_radical(y, K), K), K)


def _pth_power_radical(g, K):
    """Radical of a nonconstant g with g' == 0, so g = h(z^p)."""
    p = K.characteristic
    n = len(g) - 1
    h = [g[i] for i in range(0, n + 1, p)]
    if all(K.is_pth_power(c) for c in h):
        return _sqf_part([K.pth_root(c) for c in h], K)
    # imperfect base: irreducible factors of rad(h) with a non-p-th-power
    # coefficient stay irreducible after z -> z^p
    r = _sqf_part(h, K)
    out = []
    for i, c in enumerate(r):
        out.append(c)
        if i < len(r) - 1:
            out.extend([K.zero] * (p - 1))
    return out


# --------------------------------------------------------------------------
# determinants, resultants, discriminants
# --------------------------------------------------------------------------

def det(M, K):
    """Fraction-free (Bareiss) determinant; exact divisions via ``K.div``."""
    n = len(M)
    if n == 0:
        return K.one
    if isinstance(K, FunctionField):
        return _det_fpt(M, K)
    A = [list(row) for row in M]
    sign = 1
    prev = K.one
    for k in range(n - 1):
        if A[k][k] == 0:
            for r in range(k + 1, n):
                if A[r][k] != 0:
                    A[k], A[r] = A[r], A[k]
                    sign = -sign
                    break
            else:
                return K.zero
        akk = A[k][k]
        for i in range(k + 1, n):
            aik = A[i][k]
            row_i = A[i]
            row_k = A[k]
            for j in range(k + 1, n):
                row_i[j] = K.div(akk * row_i[j] - aik * row_k[j], prev)
        prev = akk
    return A[n - 1][n - 1] if sign == 1 else -A[n - 1][n - 1]


def _det_fpt(M, K):
    # clear row denominators and run Bareiss in F_p[t]; avoids a gcd per step
    p = K.p
    one = FpPoly((1,), p)
    rows, scale = [], one
    for row in M:
        row = [K.convert(x) for x in row]
        L = one
        for x in row:
            if x.den.deg > 0:
                L = L * (x.den // fp_gcd(L, x.den))
        rows.append([x.num * (L // x.den) for x in row])
        scale = scale * L
    n = len(rows)
    sign = 1
    prev = one
    for k in range(n - 1):
        if rows[k][k].is_zero():
            for r in range(k + 1, n):
                if not rows[r][k].is_zero():
                    rows[k], rows[r] = rows[r], rows[k]
                    sign = -sign
                    break
            else:
                return K.zero
        akk, row_k = rows[k][k], rows[k]
        for i in range(k + 1, n):
            row_i = rows[i]
            aik = row_i[k]
            for j in range(k + 1, n):
                row_i[j] = (akk * row_i[j] - aik * row_k[j]) // prev
        prev = akk
    d = rows[n - 1][n - 1]
    return RatFunc(d if sign == 1 else d * (p - 1), scale)


def sylvester_matrix(f, g, K):
    m, n = len(f) - 1, len(g) - 1
    size = m + n
    rows = []
    for i in range(n):
        rows.append([K.zero] * i + list(f) + [K.zero] * (size - m - 1 - i))
    for i in range(m):
        rows.append([K.zero] * i + list(g) + [K.zero] * (size - n - 1 - i))
    return rows


def resultant(F, G):
    """Homogeneous resultant of two nonzero forms (formal degrees)."""
    if F.is_zero() or G.is_zero():
        raise ZeroForm("resultant needs nonzero forms")
    K = F.field
    if F.degree + G.degree == 0:
        return K.one
    return det(sylvester_matrix(F.coeffs, G.coeffs, K), K)


def inseparable(G):
    """Both partial derivatives vanish identically (only possible in char p)."""
    return G.d0().is_zero() and G.d1().is_zero()


def discriminant(G):
    """``Res(dG/dx0, dG/dx1)``, no degree-dependent normalisation.

    This is ``+-n^(n-2)`` times :func:`classical_discriminant`; it is
    identically zero in characteristic dividing ``n``.  Returns 0 when both
    partials vanish (see :func:`inseparable`).
    """
    if G.degree < 2:
        raise DegreeTooSmall(f"discriminant needs degree >= 2, got {G.degree}")
    D0, D1 = G.d0(), G.d1()
    if D0.is_zero() or D1.is_zero():
        return G.field.zero
    return resultant(D0, D1)


def classical_discriminant(G):
    """The universal discriminant of a binary form, valid in every characteristic.

    Computed as ``(-1)^(n(n-1)/2) Res(g, g') / c_0`` with the division by the
    leading coefficient carried out symbolically on the first Sylvester
    column, so forms with a root at infinity are handled.  Vanishes exactly
    when G has a repeated root in P^1 over the algebraic closure.
    """
    n = G.degree
    if n < 2:
        raise DegreeTooSmall(f"discriminant needs degree >= 2, got {n}")
    K = G.field
    c = G.coeffs
    dg = [c[i] * (n - i) for i in range(n)]
    M = sylvester_matrix(c, dg, K)
    for r in range(len(M)):
        M[r][0] = K.zero
    M[0][0] = K.one
    M[n - 1][0] = K.convert(n)
    D = det(M, K)
    return D if (n * (n - 1) // 2) % 2 == 0 else -D


def is_squarefree(G):
    """No repeated root in P^1 over the closure (nonzero forms only)."""
    if G.is_zero():
        raise ZeroForm("zero form")
    if G.degree < 2:
        return True
    return classical_discriminant(G) != 0


def wronskian(F0, F1):
    """Jacobian determinant ``det(dF_i/dx_j)``; degree ``2d - 2``."""
    if F0.degree != F1.degree:
        raise DegreeMismatch("wronskian needs forms of equal degree")
    if F0.degree < 1:
        raise DegreeTooSmall("wronskian needs degree >= 1")
    return F0.d0() * F1.d1() - F0.d1() * F1.d0()


# --------------------------------------------------------------------------
# group action
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class GroupElement:
    """An element ``(alpha, Gamma)`` of G_m x GL_2; Gamma is ((a, b), (c, d))."""

    alpha: object
    matrix: tuple

    def __post_init__(self):
        (a, b), (c, d) = self.matrix
        if self.alpha == 0:
            raise ValueError("alpha must be nonzero")
        if a * d - b * c == 0:
            raise ValueError("matrix must be invertible")

    @classmethod
    def from_matrix(cls, matrix, alpha=1):
        (a, b), (c, d) = matrix
        return cls(alpha, ((a, b), (c, d)))

    @property
    def det(self):
        (a, b), (c, d) = self.matrix
        return a * d - b * c

    def adjugate(self):
        (a, b), (c, d) = self.matrix
        return ((d, -b), (-c, a))

    def __mul__(self, other):
        (a, b), (c, d) = self.matrix
        (e, f), (g, h) = other.matrix
        return GroupElement(self.alpha * other.alpha,
                            ((a * e + b * g, a * f + b * h), (c * e + d * g, c * f + d * h)))

    def apply_point(self, point):
        (a, b), (c, d) = self.matrix
        x, y = point
        return (a * x + b * y, c * x + d * y)


IDENTITY = GroupElement(1, ((1, 0), (0, 1)))


def act(pair, g):
    """``(alpha, Gamma)`` acting by ``alpha * Gamma o [F0, F1] o adj(Gamma)``.

    This is a genuine left action: ``act(act(F, h), g) == act(F, g * h)``,
    since the adjugate is exactly anti-multiplicative.
    """
    F0, F1 = pair
    if F0.degree != F1.degree:
        raise DegreeMismatch("map components must have equal degree")
    K = F0.field
    (a, b), (c, d) = g.matrix
    a, b, c, d = (K.convert(x) for x in (a, b, c, d))
    L0 = BinaryForm((d, -b), K)
    L1 = BinaryForm((-c, a), K)
    G0 = F0.substitute(L0, L1)
    G1 = F1.substitute(L0, L1)
    alpha = K.convert(g.alpha)
    return (G0 * a + G1 * b) * alpha, (G0 * c + G1 * d) * alpha


# --------------------------------------------------------------------------
# radicals and normalisation
# --------------------------------------------------------------------------

def radical(G):
    """Squarefree part of G (same root set in P^1), primitive-normalised."""
    if G.is_zero():
        raise ZeroForm("radical of the zero form")
    K = G.field
    c = G.coeffs
    k = 0
    while c[k] == 0:
        k += 1
    # x1^k divides G; the rest dehomogenises to a polynomial of degree d - k
    g = list(c[k:])
    r = _sqf_part(g, K)
    coeffs = ([K.zero] if k else []) + list(r)
    return primitive_model(BinaryForm(coeffs, K))


def gcd_forms(F, G):
    """Greatest common divisor of two nonzero forms, primitive-normalised."""
    K = F.field
    kf = next(i for i, c in enumerate(F.coeffs) if c != 0)
    kg = next(i for i, c in enumerate(G.coeffs) if c != 0)
    g = _pgcd(list(F.coeffs[kf:]), list(G.coeffs[kg:]), K)
    k = min(kf, kg)
    return primitive_model(BinaryForm([K.zero] * k + list(g), K))


def exact_divide(F, G):
    """F / G for forms when G divides F."""
    K = F.field
    q, r = _pdivmod(list(F.coeffs), list(G.coeffs), K)
    if r:
        raise ArithmeticError("form does not divide")
    q = [K.zero] * (F.degree - G.degree - len(q) + 1) + list(q)
    return BinaryForm(q, K)


def content(G):
    """Scalar ``c`` with ``G == c * primitive_model(G)``."""
    if G.is_zero():
        raise ZeroForm("content of the zero form")
    K = G.field
    lead = next(c for c in G.coeffs if c != 0)
    if K == QQ:
        fr = [Fraction(c) for c in G.coeffs]
        num = 0
        den = 1
        for x in fr:
            num = gcd(num, x.numerator)
            den = lcm(den, x.denominator)
        c = Fraction(num, den)
        if lead < 0:
            c = -c
        return c.numerator if c.denominator == 1 else c
    if isinstance(K, FunctionField):
        num = FpPoly((), K.p)
        den = FpPoly((1,), K.p)
        for x in G.coeffs:
            if x == 0:
                continue
            num = fp_gcd(num, x.num)
            den = den * x.den // fp_gcd(den, x.den)
        c = RatFunc(num, den)
        # make the leading coefficient of the first nonzero entry equal 1
        q = lead / c
        return c * q.num.lc
    return lead


def primitive_model(G):
    """Unique primitive integral scalar multiple of G.

    Over Q: integer coefficients with gcd 1 and first nonzero coefficient
    positive.  Over F_p(t): F_p[t] coefficients with gcd 1 and the first
    nonzero coefficient monic.  Over a finite field: first nonzero
    coefficient 1.
    """
    c = content(G)
    K = G.field
    if c == 1 and K == QQ and all(type(x) is int for x in G.coeffs):
        return G
    return BinaryForm._raw(tuple(K.div(x, c) for x in G.coeffs), K)


def is_primitive(G):
    return primitive_model(G) == G


def min_valuation(G, v):
    return min(valuation(c, v) for c in G.coeffs)


def local_model(G, v):
    """Scale G by a power of the uniformiser so its minimum v-valuation is 0."""
    if G.is_zero():
        raise ZeroForm("zero form")
    m = min_valuation(G, v)
    if m == 0:
        return G
    pi = G.field.convert(v.uniformizer())
    s = G.field.div(G.field.one, pi) ** m if m > 0 else pi ** (-m)
    return G * s


def reduce_form_at(G, v):
    """Coefficient-wise reduction of a v-primitive form to the residue field."""
    if G.is_zero():
        raise ZeroForm("zero form")
    if min_valuation(G, v) != 0:
        raise NotPrimitive(f"form is not primitive at {v}")
    k = v.residue_field()
    return BinaryForm._raw(tuple(reduce_at(c, v) for c in G.coeffs), k)


def reduces_squarefree(G, v):
    """The reduction of the v-local model of G is squarefree (same degree)."""
    return is_squarefree(reduce_form_at(local_model(G, v), v))


# --------------------------------------------------------------------------
# K-rational roots
# --------------------------------------------------------------------------

def canonical_point(pt, K):
    """Normalise ``[a:b]`` to ``(a/b, 1)`` or ``(1, 0)``."""
    a, b = K.convert(pt[0]), K.convert(pt[1])
    if b == 0:
        if a == 0:
            raise ValueError("[0:0] is not a point")
        return (K.one, K.zero)
    return (K.div(a, b), K.one)


def rational_roots(G):
    """Distinct K-rational points of P^1 where G vanishes (canonical, sorted)."""
    if G.is_zero():
        raise ZeroForm("roots of the zero form")
    K = G.field
    c = G.coeffs
    pts = []
    if c[0] == 0:
        pts.append((K.one, K.zero))
    g = _strip(c)
    if len(g) > 1:
        pts.extend((r, K.one) for r in _affine_roots(g, K))
    return pts


def _affine_roots(g, K):
    if K == QQ:
        z = Symbol("z")
        den = 1
        for x in g:
            den = lcm(den, Fraction(x).denominator)
        ints = [int(Fraction(x) * den) for x in g]
        roots = set()
        for fac, _ in Poly(ints, z).factor_list()[1]:
            if fac.degree() == 1:
                a, b = fac.all_coeffs()
                r = Fraction(-int(b), int(a))
                roots.add(r.numerator if r.denominator == 1 else r)
        return sorted(roots)
    if isinstance(K, FiniteField):
        return [x for x in K.elements() if _peval(g, x) == 0]
    if isinstance(K, FunctionField):
        return _fpt_roots(g, K)
    raise TypeError(f"no root finder for {K!r}")


def _peval(g, x):
    acc = 0
    for c in g:
        acc = acc * x + c
    return acc


def _monic_divisors(f):
    divs = [FpPoly((1,), f.p)]
    for g, e in fp_factor(f):
        divs = [d * g ** k for d in divs for k in range(e + 1)]
    return divs


def _fpt_roots(g, K):
    """Rational-root theorem over F_p[t]."""
    form = primitive_model(BinaryForm(g, K))
    h = [x.num for x in form.coeffs]
    roots = []
    while h and h[-1].is_zero():
        h.pop()
        if not roots:
            roots.append(K.zero)
    if len(h) <= 1:
        return roots
    p = K.p
    tops = _monic_divisors(h[-1])
    bottoms = _monic_divisors(h[0])
    hf = [RatFunc(x) for x in h]
    found = set()
    for a in tops:
        for b in bottoms:
            if fp_gcd(a, b).deg > 0:
                continue
            for u in range(1, p):
                r = RatFunc(a * u, b)
                if _peval(hf, r) == 0:
                    found.add(r)
    return sorted(set(roots) | found, key=element_key)
