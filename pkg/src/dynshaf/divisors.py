"""Point configurations and reduced effective divisors on P^1.

Bracket and cross-ratio conventions::

    [ij]   = a_i b_j - a_j b_i                for s_i = [a_i : b_i]
    [ijkl] = [ik][jl] / ([il][jk])

With these, ``[ijkl] + [ikjl] == 1`` and, for the tuple ``(0, 1, inf, lam)``,
the single moduli coordinate is ``[1234] = 1 - 1/lam``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from sympy import Poly, Symbol, nextprime

from .errors import DegreeMismatch, RepeatedIndex, ZeroForm
from .exactalg import (
    QQ,
    FunctionField,
    Place,
    element_key,
    is_irreducible,
    monic_polys,
    s_ring_units,
)
from .forms import (
    BinaryForm,
    GroupElement,
    canonical_point,
    is_squarefree,
    primitive_model,
    rational_roots,
    reduces_squarefree,
)

INCONCLUSIVE = "inconclusive"


def primitive_point(pt, K):
    """Primitive coordinates for ``[a:b]`` (coprime integral, normalised sign)."""
    a, b = K.convert(pt[0]), K.convert(pt[1])
    if a == 0 and b == 0:
        raise ValueError("[0:0] is not a point")
    if K == QQ:
        a, b = Fraction(a), Fraction(b)
        den = a.denominator * b.denominator // gcd(a.denominator, b.denominator)
        x, y = int(a * den), int(b * den)
        g = gcd(x, y)
        x, y = x // g, y // g
        if y < 0 or (y == 0 and x < 0):
            x, y = -x, -y
        return (x, y)
    if isinstance(K, FunctionField):
        G = primitive_model(BinaryForm((b, a), K))
        y, x = G.coeffs
        if y == 0:
            return (K.one, K.zero)
        s = K.convert(pow(y.num.lc, -1, K.p))
        return (x * s, y * s)
    return canonical_point((a, b), K)


class PointTuple:
    """An ordered tuple of pairwise distinct points of P^1(K)."""

    __slots__ = ("points", "field")

    def __init__(self, points, field=QQ):
        self.field = field
        self.points = tuple(primitive_point(p, field) for p in points)
        for i, j in itertools.combinations(range(len(self.points)), 2):
            if self.bracket(i, j) == 0:
                raise ValueError(f"points {i} and {j} coincide")

    @classmethod
    def affine(cls, values, field=QQ):
        """Build from affine values; ``None`` or ``"inf"`` stands for infinity."""
        pts = []
        for x in values:
            if x is None or x == "inf":
                pts.append((1, 0))
            else:
                pts.append((x, 1))
        return cls(pts, field)

    def __len__(self):
        return len(self.points)

    def bracket(self, i, j):
        (ai, bi), (aj, bj) = self.points[i], self.points[j]
        return ai * bj - aj * bi

    def transform(self, g):
        return PointTuple([g.apply_point(p) for p in self.points], self.field)

    def affine_values(self):
        K = self.field
        return [None if b == 0 else K.div(a, b) for a, b in self.points]

    def __eq__(self, other):
        return isinstance(other, PointTuple) and [canonical_point(p, self.field) for p in self.points] == [
            canonical_point(p, other.field) for p in other.points
        ]

    def __repr__(self):
        return f"PointTuple({self.affine_values()})"


def bracket(s, i, j):
    return s.bracket(i, j)


def cross_ratio(s, i, j, k, l):
    """``[ik][jl] / ([il][jk])``; never 0, 1 or infinity for distinct points."""
    if len({i, j, k, l}) < 4:
        raise RepeatedIndex("cross-ratio needs four distinct indices")
    K = s.field
    return K.div(s.bracket(i, k) * s.bracket(j, l), s.bracket(i, l) * s.bracket(j, k))


@dataclass(frozen=True)
class ModuliPoint:
    coords: tuple


def moduli_point(s):
    """The coordinates ``([123i](s))`` for i = 4..n (0-based indices 0, 1, 2, i)."""
    if len(s) < 4:
        raise ValueError("moduli coordinates need n >= 4")
    return ModuliPoint(tuple(cross_ratio(s, 0, 1, 2, i) for i in range(3, len(s))))


def three_point_map(p1, p2, p3, K):
    """The element of PGL_2(K) sending p1, p2, p3 to 0, 1, infinity."""
    (a1, b1), (a2, b2), (a3, b3) = p1, p2, p3
    br23 = a2 * b3 - a3 * b2
    br21 = a2 * b1 - a1 * b2
    return GroupElement(1, ((b1 * br23, -a1 * br23), (b3 * br21, -a3 * br21)))


def normalize_three(s):
    """``(gamma, gamma . s)`` with gamma sending the first three points to 0, 1, inf."""
    if len(s) < 3:
        raise ValueError("need at least three points")
    g = three_point_map(*s.points[:3], s.field)
    return g, s.transform(g)


# --------------------------------------------------------------------------
# reduced divisors
# --------------------------------------------------------------------------

class ReducedDivisor:
    """A reduced effective divisor, held as a squarefree primitive form."""

    __slots__ = ("form", "_roots")

    def __init__(self, form):
        if form.is_zero():
            raise ZeroForm("divisor of the zero form")
        if not is_squarefree(form):
            raise ValueError("a reduced divisor needs a squarefree form")
        self.form = primitive_model(form)
        self._roots = None

    @classmethod
    def from_points(cls, points, field=QQ):
        return cls(BinaryForm.from_points([primitive_point(p, field) for p in points], field))

    @classmethod
    def affine(cls, values, field=QQ):
        pts = [(1, 0) if x is None or x == "inf" else (x, 1) for x in values]
        return cls.from_points(pts, field)

    @property
    def field(self):
        return self.form.field

    @property
    def degree(self):
        return self.form.degree

    def rational_points(self):
        if self._roots is None:
            self._roots = rational_roots(self.form)
        return self._roots

    @property
    def split(self):
        return len(self.rational_points()) == self.degree

    @property
    def splitting_degree(self):
        """1 for split divisors; None when only bounded by ``deg!``."""
        return 1 if self.split else None

    def transform(self, g):
        """The divisor ``g(D)``, i.e. the form ``D o g^-1``."""
        (a, b), (c, d) = g.adjugate()
        K = self.field
        L0 = BinaryForm((K.convert(a), K.convert(b)), K)
        L1 = BinaryForm((K.convert(c), K.convert(d)), K)
        return ReducedDivisor(self.form.substitute(L0, L1))

    def __eq__(self, other):
        return isinstance(other, ReducedDivisor) and self.form == other.form

    def __hash__(self):
        return hash(self.form)

    def __repr__(self):
        return f"ReducedDivisor({self.form})"


def _quartic_j(form):
    """Absolute invariant I^3 / (4 I^3 - J^2) of a binary quartic (char not 2, 3)."""
    a, b, c, d, e = form.coeffs
    K = form.field
    I = 12 * a * e - 3 * b * d + c * c
    J = 72 * a * c * e + 9 * b * c * d - 27 * a * d * d - 27 * e * b * b - 2 * c ** 3
    return K.div(I ** 3, 4 * I ** 3 - J * J)


def _factor_degrees(form):
    """Sorted degrees of irreducible factors over Q (None elsewhere)."""
    if form.field != QQ:
        return None
    z = Symbol("z")
    c = form.coeffs
    k = 0
    while c[k] == 0:
        k += 1
    degs = [1] * k
    g = [int(x) for x in c[k:]]
    if len(g) > 1:
        degs += [f.degree() for f, e in Poly(g, z).factor_list()[1] for _ in range(e)]
    return sorted(degs)


def divisors_equivalent(D, E):
    """Decide whether some gamma in PGL_2(K) carries D onto E.

    Exact (``True``/``False``) whenever D has at least three K-rational
    points: a fixed ordered triple of D is sent to (0, 1, inf) and every
    ordered triple of rational points of E is tried.  Otherwise only
    necessary conditions are compared (rational point count, factor degrees
    over Q, the quartic j-invariant); a mismatch gives ``False`` and
    agreement gives :data:`INCONCLUSIVE`.
    """
    if D.degree != E.degree:
        raise DegreeMismatch("divisors of different degree")
    if D.degree < 3:
        raise ValueError("equivalence is decided for degree >= 3")
    K = D.field
    RD, RE = D.rational_points(), E.rational_points()
    if len(RD) != len(RE):
        return False
    if len(RD) >= 3:
        gD = three_point_map(*RD[:3], K)
        target = D.transform(gD)
        for trip in itertools.permutations(RE, 3):
            if E.transform(three_point_map(*trip, K)) == target:
                return True
        return False
    if _factor_degrees(D.form) != _factor_degrees(E.form):
        return False
    if D.degree == 4 and K.characteristic not in (2, 3):
        try:
            if _quartic_j(D.form) != _quartic_j(E.form):
                return False
        except ZeroDivisionError:
            pass
    return INCONCLUSIVE


def divisor_good_reduction_at(D, v):
    """The reduction of D at v is squarefree of the same degree."""
    return reduces_squarefree(D.form, v)


def j_invariant(lam, K):
    """``256 (l^2 - l + 1)^3 / (l^2 (l - 1)^2)``, symmetric under the six cross-ratio permutations."""
    return K.div(256 * (lam * lam - lam + 1) ** 3, lam * lam * (lam - 1) ** 2)


def cross_ratio_fingerprint(points, K):
    """Sorted multiset of j-invariants over all 4-subsets of distinct points."""
    s = PointTuple(points, K)
    js = []
    for i, j, k, l in itertools.combinations(range(len(s)), 4):
        js.append(j_invariant(cross_ratio(s, i, j, k, l), K))
    return tuple(sorted(js, key=element_key))


# --------------------------------------------------------------------------
# S-unit equation
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class UnitEquationSolutions:
    """Pairs ``(u, v)`` of S-units with ``u + v = 1``.

    ``exceptional`` lists the pairs with u a p-th power in characteristic p
    (for instance constant solutions); these can come in infinite families.
    """

    pairs: tuple
    exceptional: tuple = ()

    def __iter__(self):
        return iter(self.pairs)

    def __len__(self):
        return len(self.pairs)


def solve_unit_equation(S, bound, field=QQ):
    """All S-unit pairs with exponents bounded by ``bound`` summing to 1."""
    units = s_ring_units(S, bound, field)
    unit_set = set(units)
    pairs = []
    for u in units:
        v = 1 - u
        if v != 0 and v in unit_set:
            pairs.append((u, v))
    exceptional = ()
    if isinstance(field, FunctionField):
        exceptional = tuple(pq for pq in pairs if field.is_pth_power(field.convert(pq[0])))
    return UnitEquationSolutions(tuple(pairs), exceptional)


def places_outside(S, count, field=QQ):
    """The first ``count`` places not in S, in a fixed order."""
    S = set(S)
    out = []
    if field == QQ:
        q = 2
        while len(out) < count:
            v = Place.prime(q)
            if v not in S:
                out.append(v)
            q = nextprime(q)
        return out
    inf = Place.infinity(field.p)
    if inf not in S:
        out.append(inf)
    deg = 1
    while len(out) < count:
        for f in monic_polys(field.p, deg):
            if is_irreducible(f):
                v = Place(field, f)
                if v not in S:
                    out.append(v)
                    if len(out) == count:
                        break
        deg += 1
    return out


def enumerate_gr_lambdas(S, bound, field=QQ, check_places=20):
    """All lambda with {0, 1, inf, lambda} of good reduction outside S.

    These are exactly the first coordinates of unit-equation solutions; each
    is re-checked by :func:`divisor_good_reduction_at` at ``check_places``
    places outside S.
    """
    lams = sorted({u for u, _ in solve_unit_equation(S, bound, field)}, key=element_key)
    probe = places_outside(S, check_places, field)
    for lam in lams:
        D = ReducedDivisor.affine([0, 1, "inf", lam], field)
        for v in probe:
            if not divisor_good_reduction_at(D, v):
                raise AssertionError(f"lambda={lam} has bad reduction at {v} outside S")
    return lams
