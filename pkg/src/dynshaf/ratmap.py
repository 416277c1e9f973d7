"""Rational self-maps of P^1: critical data, differential discriminant, reduction tests.

A map is a pair of forms ``[F0 : F1]`` of common degree ``d >= 2`` acting on
points ``[x0:x1]``; in the affine coordinate ``z = x0/x1`` it is
``z -> F0(z, 1) / F1(z, 1)``.

Two discriminants are kept apart on purpose:

* ``delta_diff`` is ``Res(d/dx0, d/dx1)`` of the critical form ``b_F * w_F``
  computed from the model's own coefficients.  It is a polynomial in the
  coefficients (so it is a relative invariant) and vanishes whenever two
  critical or branch points coincide.
* ``delta_diff_reduced`` is the classical discriminant of the primitive
  radical of ``b_F * w_F``.  It is nonzero for every separable map and its
  support is exactly the set of places where the critical locus collides.
  Lattes maps need this one, because their branch points are repeated.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    DegenerateFixedPoints,
    DegreeMismatch,
    DegreeTooSmall,
    InconsistentExponents,
    InseparableMap,
    NotDifferentiallySeparated,
)
from .exactalg import (
    QQ,
    FunctionField,
    Place,
    reduce_at,
    support,
    valuation,
)
from .forms import (
    BinaryForm,
    GroupElement,
    _pdivmod,
    _pmul,
    _strip,
    act,
    classical_discriminant,
    content,
    discriminant,
    min_valuation,
    radical,
    reduces_squarefree,
    resultant,
    wronskian,
)


class RationalMapModel:
    """A model ``[F0 : F1]`` of a degree-d rational map (d >= 2, Res != 0)."""

    __slots__ = ("F0", "F1", "_res", "_prim", "_crit")

    def __init__(self, F0, F1):
        if F0.degree != F1.degree:
            raise DegreeMismatch("components must have the same degree")
        if F0.field != F1.field:
            raise TypeError("components must share a field")
        if F0.degree < 2:
            raise DegreeTooSmall("rational maps here have degree >= 2")
        self.F0, self.F1 = F0, F1
        self._res = None
        self._prim = None
        self._crit = None
        if F0.is_zero() or F1.is_zero() or self.resultant == 0:
            raise ValueError("resultant vanishes: not a morphism of full degree")

    @classmethod
    def from_coeffs(cls, c0, c1, field=QQ):
        return cls(BinaryForm(c0, field), BinaryForm(c1, field))

    @property
    def degree(self):
        return self.F0.degree

    @property
    def field(self):
        return self.F0.field

    @property
    def resultant(self):
        if self._res is None:
            self._res = resultant(self.F0, self.F1)
        return self._res

    def coeffs(self):
        return self.F0.coeffs + self.F1.coeffs

    def scaled(self, c):
        return RationalMapModel(self.F0 * c, self.F1 * c)

    def primitive(self):
        """The unique primitive integral model (shared content removed)."""
        if self._prim is None:
            joint = BinaryForm(self.coeffs(), self.field)
            c = content(joint)
            if c == 1:
                self._prim = self
            else:
                K = self.field
                self._prim = RationalMapModel(
                    BinaryForm([K.div(x, c) for x in self.F0.coeffs], K),
                    BinaryForm([K.div(x, c) for x in self.F1.coeffs], K),
                )
        return self._prim

    def local(self, v):
        """Scale by a power of the uniformiser at v to make the model v-primitive."""
        joint = BinaryForm(self.coeffs(), self.field)
        m = min_valuation(joint, v)
        if m == 0:
            return self
        K = self.field
        pi = K.convert(v.uniformizer())
        s = K.div(K.one, pi) ** m if m > 0 else pi ** (-m)
        return self.scaled(s)

    def __call__(self, point):
        x0, x1 = point
        return (self.F0(x0, x1), self.F1(x0, x1))

    def __eq__(self, other):
        return isinstance(other, RationalMapModel) and self.F0 == other.F0 and self.F1 == other.F1

    def __hash__(self):
        return hash((self.F0, self.F1))

    def __repr__(self):
        return f"RationalMapModel([{self.F0} : {self.F1}], {self.field!r})"

    def __str__(self):
        return f"[{self.F0} : {self.F1}]"


@dataclass(frozen=True)
class GraphForm:
    """The bihomogeneous form ``y1*F0(x) - y0*F1(x)`` of bidegree (d, 1)."""

    F0: BinaryForm
    F1: BinaryForm

    def __call__(self, x0, x1, y0, y1):
        return y1 * self.F0(x0, x1) - y0 * self.F1(x0, x1)

    def at(self, y0, y1):
        """The form in x obtained by fixing ``y = [y0:y1]``."""
        return self.F0 * y1 - self.F1 * y0

    def fixed_point_form(self):
        """``x1*F0 - x0*F1``: the graph restricted to the diagonal, degree d + 1."""
        K = self.F0.field
        x0 = BinaryForm((1, 0), K)
        x1 = BinaryForm((0, 1), K)
        return x1 * self.F0 - x0 * self.F1


def graph_form(F):
    return GraphForm(F.F0, F.F1)


# --------------------------------------------------------------------------
# critical data
# --------------------------------------------------------------------------

def _interpolate(points, values, K):
    """Coefficients (top degree first) of the interpolating polynomial."""
    n = len(points)
    coef = list(values)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = K.div(coef[i] - coef[i - 1], points[i] - points[i - j])
    # Newton form -> dense, evaluated Horner-style from the innermost term
    poly = [coef[-1]]
    for i in range(n - 2, -1, -1):
        # poly * (u - points[i]) + coef[i]
        shifted = poly + [K.zero]
        for k in range(len(poly)):
            shifted[k + 1] = shifted[k + 1] - poly[k] * points[i]
        shifted[-1] = shifted[-1] + coef[i]
        poly = shifted
    return poly


def branch_form(F):
    """``b_F(y0, y1) = Res_x(y1*F0 - y0*F1, w_F)``, a form of degree 2d - 2.

    Computed by evaluating at ``y = [u:1]`` for 2d - 1 distinct field
    elements u and interpolating; the result is returned as a form in the
    same two variables.
    """
    w = wronskian(F.F0, F.F1)
    if w.is_zero():
        raise InseparableMap("wronskian vanishes identically")
    K = F.field
    N = 2 * F.degree - 2
    us = list(itertools.islice(K.gen_points(), N + 1))
    us = [K.convert(u) for u in us]
    vals = [resultant(F.F0 - F.F1 * u, w) for u in us]
    coeffs = _interpolate(us, vals, K)
    coeffs = [K.zero] * (N + 1 - len(coeffs)) + coeffs
    return BinaryForm(coeffs, K)


@dataclass(frozen=True)
class CriticalData:
    wronskian: BinaryForm
    branch: BinaryForm
    critical_form: BinaryForm
    critical_radical: BinaryForm
    ramification_radical: BinaryForm
    branch_radical: BinaryForm

    @property
    def ram_point_count(self):
        return self.ramification_radical.degree

    @property
    def branch_point_count(self):
        return self.branch_radical.degree

    @property
    def critical_point_count(self):
        return self.critical_radical.degree


def critical_data(F):
    if F._crit is None:
        w = wronskian(F.F0, F.F1)
        if w.is_zero():
            raise InseparableMap("wronskian vanishes identically")
        b = branch_form(F)
        bw = b * w
        F._crit = CriticalData(w, b, bw, radical(bw), radical(w), radical(b))
    return F._crit


@dataclass(frozen=True)
class DdiffReport:
    delta_diff: object
    delta_diff_reduced: object
    differentially_separated: bool


def differential_discriminant(F):
    cd = critical_data(F)
    dd = discriminant(cd.critical_form)
    rad = cd.critical_radical
    red = classical_discriminant(rad) if rad.degree >= 2 else F.field.one
    return DdiffReport(dd, red, cd.critical_point_count == 4 * F.degree - 4)


# --------------------------------------------------------------------------
# reduction tests
# --------------------------------------------------------------------------

def good_reduction_at(F, v):
    """The v-local model has unit resultant."""
    return valuation(F.local(v).resultant, v) == 0


def _dgr_direct(F, v):
    Fv = F.local(v)
    if valuation(Fv.resultant, v) != 0:
        return False
    w = wronskian(Fv.F0, Fv.F1)
    if w.is_zero():
        raise InseparableMap("wronskian vanishes identically")
    if all(reduce_at(c, v) == 0 for c in w.coeffs):
        return False
    return reduces_squarefree(critical_data(F).critical_radical, v)


def _dgr_valuation(F, v):
    report = differential_discriminant(F)
    if not report.differentially_separated:
        raise NotDifferentiallySeparated("valuation test needs 4d - 4 distinct critical points")
    Fv = F.local(v)
    return valuation(differential_discriminant(Fv).delta_diff, v) == 0


def dgr_at(F, v, method="direct", search_bound=0):
    """Differential good reduction of the model at v.

    ``method="direct"`` checks good reduction, separability of the reduced
    map and squarefreeness of the reduced critical radical.
    ``method="valuation"`` checks ``ord_v(delta_diff) == 0`` and needs a
    differentially separated map.  With ``search_bound > 0`` a failing model
    is retried after conjugation by integral matrices with entries in
    ``[-search_bound, search_bound]``; see :func:`dgr_search`.
    """
    test = _dgr_direct if method == "direct" else _dgr_valuation
    if method not in ("direct", "valuation"):
        raise ValueError(f"unknown method {method!r}")
    if test(F, v):
        return True
    if search_bound:
        return dgr_search(F, v, search_bound, method)[0]
    return False


def dgr_search(F, v, bound=2, method="direct"):
    """Search integral conjugates for a model with D.G.R. at v.

    Returns ``(found, level, gamma)`` with level ``"model-level"`` when F
    itself passes, ``"search-level"`` when a conjugate does, and gamma the
    lexicographically first successful matrix.
    """
    test = _dgr_direct if method == "direct" else _dgr_valuation
    if test(F, v):
        return True, "model-level", None
    rng = range(-bound, bound + 1)
    for a, b, c, d in itertools.product(rng, repeat=4):
        if a * d - b * c == 0:
            continue
        g = GroupElement(1, ((a, b), (c, d)))
        if test(conjugate(F, g), v):
            return True, "search-level", g
    return False, "search-level", None


def bad_place_candidates(F):
    """Finite places in the support of Res * delta_diff_reduced * content(w)."""
    P = F.primitive()
    K = F.field
    rep = differential_discriminant(P)
    w = wronskian(P.F0, P.F1)
    places = set()
    for x in (P.resultant, rep.delta_diff_reduced, content(w)):
        places.update(support(x, K))
    return places


def bad_places(F):
    """Places where the model fails the direct D.G.R. test (sorted).

    Over Q the candidates are the primes dividing the resultant, the reduced
    differential discriminant and the content of the wronskian of the
    primitive model; over F_p(t) the infinite place is tested as well.
    """
    places = set(bad_place_candidates(F))
    if isinstance(F.field, FunctionField):
        places.add(Place.infinity(F.field.p))
    return sorted(v for v in places if not _dgr_direct(F, v))


def bad_places_within(F, S):
    """Cheap check that every bad place of F lies in S (no factorisation)."""
    P = F.primitive()
    K = F.field
    if K != QQ:
        return set(bad_places(F)) <= set(S)
    primes = [v.gen for v in S]
    rep = differential_discriminant(P)
    w = wronskian(P.F0, P.F1)
    for x in (P.resultant, rep.delta_diff_reduced, content(w)):
        x = Fraction(x)
        n = abs(x.numerator) * x.denominator
        for q in primes:
            while n % q == 0:
                n //= q
        if n != 1:
            return False
    return True


def conjugate(F, g):
    """The model of ``g o F o g^-1`` (alpha is ignored)."""
    g1 = GroupElement(1, g.matrix)
    G0, G1 = act((F.F0, F.F1), g1)
    return RationalMapModel(G0, G1)


# --------------------------------------------------------------------------
# multipliers
# --------------------------------------------------------------------------

def _pxgcd(a, b, K):
    """(g, s) with s*a = g mod b, g monic."""
    r0, r1 = _strip(a), _strip(b)
    s0, s1 = [K.one], []
    while r1:
        q, r = _pdivmod(r0, r1, K)
        r0, r1 = r1, r
        qs = _pmul(q, s1, K) if s1 else []
        s0, s1 = s1, _psub(s0, qs)
    lead = r0[0]
    return [K.div(c, lead) for c in r0], [K.div(c, lead) for c in s0]


def _psub(a, b):
    n = max(len(a), len(b))
    a = [0] * (n - len(a)) + list(a)
    b = [0] * (n - len(b)) + list(b)
    return _strip([x - y for x, y in zip(a, b)])


def _pderiv_dense(a):
    n = len(a) - 1
    return [c * (n - i) for i, c in enumerate(a[:-1])]


def berkowitz_charpoly(M, K):
    """Characteristic polynomial ``det(X*I - M)`` (top degree first), division free."""
    n = len(M)
    if n == 0:
        return [K.one]
    C = [K.one, -M[0][0]]
    for r in range(1, n):
        # partition of the leading (r+1) x (r+1) block
        R = M[r][:r]
        S = [M[i][r] for i in range(r)]
        a = M[r][r]
        A = [row[:r] for row in M[:r]]
        # Toeplitz column: 1, -a, -R S, -R A S, ...
        col = [K.one, -a]
        vec = S
        for _ in range(r):
            col.append(-sum((x * y for x, y in zip(R, vec)), K.zero))
            vec = [sum((A[i][j] * vec[j] for j in range(r)), K.zero) for i in range(r)]
        newC = []
        for i in range(r + 2):
            acc = K.zero
            for j in range(min(i, r) + 1):
                if i - j < len(col):
                    acc = acc + col[i - j] * C[j]
            newC.append(acc)
        C = newC
    return C


@dataclass(frozen=True)
class MultiplierInvariants:
    sigma: tuple
    rho: object
    degenerate: bool = False
    tau1: object = None
    theta1: object = None
    theta2: object = None


def _affine_ready(F):
    """A conjugate of F that does not fix infinity."""
    K = F.field
    if F.F1.coeffs[0] != 0:
        return F
    for c in K.gen_points():
        c = K.convert(c)
        if c == 0:
            continue
        G = conjugate(F, GroupElement(1, ((K.one, K.zero), (c, K.one))))
        if G.F1.coeffs[0] != 0:
            return G
    raise AssertionError("unreachable: finitely many fixed points")


def multiplier_invariants(F, strict=False):
    """Elementary symmetric functions of the d + 1 fixed-point multipliers.

    Multipliers are never extracted individually.  After moving infinity off
    the fixed points, the multiplier ``m(z) = (F0' - z F1') / F1`` is reduced
    modulo the fixed-point polynomial P and the characteristic polynomial of
    multiplication by m on ``K[z]/(P)`` is read off.  Repeated fixed points
    are counted with multiplicity (multiplier 1 there) and flagged
    ``degenerate``; ``strict=True`` raises instead.
    """
    K = F.field
    d = F.degree
    fix = graph_form(F).fixed_point_form()
    degenerate = classical_discriminant(fix) == 0
    if degenerate and strict:
        raise DegenerateFixedPoints("fixed-point form has a repeated root")
    G = _affine_ready(F)
    f0 = list(G.F0.coeffs)
    f1 = list(G.F1.coeffs)
    P = _strip(graph_form(G).fixed_point_form().coeffs)
    assert len(P) == d + 2
    num = _psub(_pderiv_dense(f0), _pmul([K.one, K.zero], _pderiv_dense(f1), K))
    g, inv = _pxgcd(f1, P, K)
    assert len(g) == 1, "F1 and the fixed-point polynomial share a root"
    m = _pdivmod(_pmul(num, inv, K), P, K)[1]
    # multiplication-by-m matrix on the basis z^d, ..., z, 1 (top first)
    n = d + 1
    cols = []
    vec = m
    for _ in range(n):
        padded = [K.zero] * (n - len(vec)) + list(vec)
        cols.append(padded)
        vec = _pdivmod(vec + [K.zero], P, K)[1] if vec else []
    # cols[k] is m * z^k; matrix in basis (z^d..1) with column index for z^k
    M = [[cols[n - 1 - j][i] for j in range(n)] for i in range(n)]
    cp = berkowitz_charpoly(M, K)
    sigma = tuple((cp[i] if i % 2 == 0 else -cp[i]) for i in range(1, n + 1))
    rho = F.resultant
    if d == 2:
        tau1 = sigma[0] * rho
        return MultiplierInvariants(sigma, rho, degenerate, tau1, tau1 - 2 * rho, tau1 + 6 * rho)
    return MultiplierInvariants(sigma, rho, degenerate)


# --------------------------------------------------------------------------
# relative invariance
# --------------------------------------------------------------------------

def _random_unimodular(rng):
    M = ((1, 0), (0, 1))
    for _ in range(3):
        k = rng.randint(-2, 2)
        E = ((1, k), (0, 1)) if rng.random() < 0.5 else ((1, 0), (k, 1))
        (a, b), (c, d) = M
        (e, f), (g, h) = E
        M = ((a * e + b * g, a * f + b * h), (c * e + d * g, c * f + d * h))
    return M


def random_map(d, rng, height=5, field=QQ):
    while True:
        c0 = [rng.randint(-height, height) for _ in range(d + 1)]
        c1 = [rng.randint(-height, height) for _ in range(d + 1)]
        try:
            return RationalMapModel.from_coeffs(c0, c1, field)
        except ValueError:
            continue


def verify_relative_invariance(d, trials=50, seed=0, alpha_prime=2, det_prime=3):
    """Exponents (n, m) with ``Delta(F^(alpha, Gamma)) = alpha^n det(Gamma)^m Delta(F)``.

    Each trial draws a differentially separated F, ``alpha = alpha_prime^a``
    and ``Gamma = U * diag(det_prime^b, 1) * V`` with U, V unimodular, then
    reads n and m off the valuations of the ratio.  Raises
    :class:`InconsistentExponents` if two trials disagree or the ratio is not
    exactly of the predicted shape.
    """
    if d < 2 or trials < 1:
        raise ValueError("need d >= 2 and trials >= 1")
    rng = random.Random(seed)
    found = None
    for _ in range(trials):
        while True:
            F = random_map(d, rng, height=4)
            base = differential_discriminant(F).delta_diff
            if base != 0:
                break
        a = rng.randint(1, 2)
        b = rng.randint(1, 2)
        U, V = _random_unimodular(rng), _random_unimodular(rng)
        D = ((det_prime ** b, 0), (0, 1))
        g = GroupElement(alpha_prime ** a, U) * GroupElement(1, D) * GroupElement(1, V)
        G0, G1 = act((F.F0, F.F1), g)
        moved = differential_discriminant(RationalMapModel(G0, G1)).delta_diff
        ratio = Fraction(moved) / Fraction(base)
        vn = valuation(ratio, Place.prime(alpha_prime))
        vm = valuation(ratio, Place.prime(det_prime))
        if vn % a or vm % b:
            raise InconsistentExponents(f"ratio {ratio} not a power of alpha/det")
        n, m = vn // a, vm // b
        if ratio != Fraction(g.alpha) ** n * Fraction(g.det) ** m:
            raise InconsistentExponents(f"ratio {ratio} != alpha^{n} det^{m}")
        if found is None:
            found = (n, m)
        elif found != (n, m):
            raise InconsistentExponents(f"trial gave {(n, m)}, earlier {found}")
    return found


# --------------------------------------------------------------------------
# admissibility
# --------------------------------------------------------------------------

WITNESSED = "witnessed-admissible"
SUSPECTED = "isotriviality-suspected"


def admissibility_witness(F):
    """Witness non-isotriviality over F_p(t) via a multiplier invariant with nonzero d/dt."""
    if not isinstance(F.field, FunctionField):
        raise TypeError("admissibility witnesses are for maps over F_p(t)")
    inv = multiplier_invariants(F)
    for s in inv.sigma:
        if F.field.convert(s).derivative() != 0:
            return WITNESSED
    return SUSPECTED
