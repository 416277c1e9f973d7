"""Lattès maps of short Weierstrass curves (multiplication by 2 on x)."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import SingularCurve
from .exactalg import QQ, FunctionField, Place, support, valuation
from .forms import BinaryForm, _pdivmod, _pmul, _strip, classical_discriminant, is_squarefree, primitive_model, radical
from .ratmap import RationalMapModel, _dgr_direct, bad_places, critical_data


def _padd(a, b):
    n = max(len(a), len(b))
    a = [0] * (n - len(a)) + list(a)
    b = [0] * (n - len(b)) + list(b)
    return [x + y for x, y in zip(a, b)]


def _pscale(a, c):
    return [c * x for x in a]


@dataclass(frozen=True)
class EllipticCurve:
    """``y^2 = x^3 + A x + B`` over Q or F_p(t), p > 3."""

    A: object
    B: object
    field: object = QQ

    def __post_init__(self):
        K = self.field
        if K.characteristic in (2, 3):
            raise SingularCurve("short Weierstrass models need characteristic not 2 or 3")
        object.__setattr__(self, "A", K.convert(self.A))
        object.__setattr__(self, "B", K.convert(self.B))
        if self.discriminant == 0:
            raise SingularCurve(f"y^2 = x^3 + ({self.A})x + ({self.B}) is singular")

    @property
    def discriminant(self):
        return -16 * (4 * self.A ** 3 + 27 * self.B ** 2)

    def cubic(self):
        """x^3 + A x + B as a dense list, leading coefficient first."""
        K = self.field
        return [K.one, K.zero, self.A, self.B]


def division_polynomial(E, n):
    """psi_n as ``(g, e)`` meaning ``g(x) * y^e`` with y^2 eliminated.

    Base cases psi_0..psi_4 are the standard ones; larger n use the
    duplication recurrences.
    """
    K = E.field
    A, B = E.A, E.B
    f = E.cubic()
    memo = {
        0: ([], 0),
        1: ([K.one], 0),
        2: ([K.convert(2)], 1),
        3: ([3, 0, 6 * A, 12 * B, -A * A], 0),
        4: (_pscale([1, 0, 5 * A, 20 * B, -5 * A * A, -4 * A * B, -8 * B * B - A ** 3], 4), 1),
    }

    def mul(p, q):
        g = _pmul(p[0], q[0], K)
        e = p[1] + q[1]
        if e >= 2:
            g, e = _pmul(g, f, K), e - 2
        return (g, e)

    def sub(p, q):
        if not _strip(p[0]):
            return (_pscale(q[0], -1), q[1])
        if not _strip(q[0]):
            return p
        assert p[1] == q[1]
        return (_padd(p[0], _pscale(q[0], -1)), p[1])

    def divide_2y(p):
        g, e = p
        if e == 1:
            return (_pscale(g, K.div(1, 2)), 0)
        quo, rem = _pdivmod(g, f, K)
        assert not rem, "psi recurrence lost divisibility by y^2"
        return (_pscale(quo, K.div(1, 2)), 1)

    def psi(k):
        if k not in memo:
            m = k // 2
            if k % 2:
                left = mul(psi(m + 2), mul(psi(m), mul(psi(m), psi(m))))
                right = mul(psi(m - 1), mul(psi(m + 1), mul(psi(m + 1), psi(m + 1))))
                memo[k] = sub(left, right)
            else:
                inner = sub(mul(psi(m + 2), mul(psi(m - 1), psi(m - 1))),
                            mul(psi(m - 2), mul(psi(m + 1), psi(m + 1))))
                memo[k] = divide_2y(mul(psi(m), inner))
        return memo[k]

    g, e = psi(n)
    return [K.convert(c) for c in _strip(g)], e


def _homogenize(dense, degree, K):
    dense = _strip(dense)
    return BinaryForm([K.convert(c) for c in dense] + [K.zero] * (degree + 1 - len(dense)), K)


@dataclass(frozen=True)
class DivisionData:
    phi2: BinaryForm
    phi4: BinaryForm
    psi3: BinaryForm


def division_data(E):
    """phi_2 = x^3 + A x + B and phi_4 = psi_4 / psi_2, homogenised."""
    K = E.field
    psi2, e2 = division_polynomial(E, 2)
    psi4, e4 = division_polynomial(E, 4)
    assert e2 == e4 == 1
    quo, rem = _pdivmod(psi4, psi2, K)
    if rem:
        raise AssertionError("psi_4 is not divisible by psi_2")
    psi3, _ = division_polynomial(E, 3)
    return DivisionData(_homogenize(E.cubic(), 3, K), _homogenize(quo, 6, K), _homogenize(psi3, 4, K))


def lattes_map(E):
    """``x(2P) = (x^4 - 2A x^2 - 8B x + A^2) / (4 (x^3 + A x + B))``, homogenised."""
    K = E.field
    A, B = E.A, E.B
    F0 = BinaryForm([K.one, K.zero, -2 * A, -8 * B, A * A], K)
    F1 = BinaryForm([K.zero, K.convert(4), K.zero, 4 * A, 4 * B], K)
    return RationalMapModel(F0, F1)


def _two_adic(x):
    """(sign, k) with x = sign * 2^k, or None."""
    x = Fraction(x)
    if x == 0:
        return None
    sign = 1 if x > 0 else -1
    num, den = abs(x.numerator), x.denominator
    if num & (num - 1) or den & (den - 1):
        return None
    return sign, num.bit_length() - den.bit_length()


@dataclass(frozen=True)
class DiscIdentity:
    matches: bool
    two_power: object
    ratio: object


def verify_disc_identity(E):
    """Check ``disc(phi2 phi4) / Delta_E^12`` is +-2^k (Q) or a constant (F_p(t))."""
    K = E.field
    dd = division_data(E)
    ratio = K.div(classical_discriminant(dd.phi2 * dd.phi4), E.discriminant ** 12)
    if K == QQ:
        s = _two_adic(ratio)
        return DiscIdentity(s is not None, None if s is None else s[1], ratio)
    const = ratio.num.is_const() and ratio.den.is_const()
    return DiscIdentity(const, None, ratio)


def _drop_small(places, K):
    return sorted(v for v in places if not (K == QQ and v.gen in (2, 3)))


@dataclass(frozen=True)
class LattesReport:
    bad_places: tuple
    disc_support: tuple

    @property
    def agree(self):
        return self.bad_places == self.disc_support


def _minimal_shift(E, v):
    """Least k such that A c^4, B c^6 are v-integral for ord_v(c) = k."""
    return max(-(valuation(x, v) // w) for x, w in ((E.A, 4), (E.B, 6)) if x != 0)


def _candidates(E):
    K = E.field
    cands = set(support(E.discriminant, K))
    for x in (E.A, E.B):
        if x != 0:
            cands.update(support(x, K))
    return cands


def _rescale(E, c):
    return EllipticCurve(E.A * c ** 4, E.B * c ** 6, E.field)


def _uniformizer_power(v, k, K):
    pi = K.convert(v.uniformizer())
    return pi ** k if k >= 0 else K.div(1, pi ** -k)


def minimal_model(E):
    """``(A c^4, B c^6)`` with c chosen so the model is minimal at every finite place."""
    K = E.field
    c = K.one
    for v in _candidates(E):
        if not v.is_infinite:
            c = c * _uniformizer_power(v, _minimal_shift(E, v), K)
    return _rescale(E, c)


def local_minimal_model(E, v):
    """A model of E minimal at the single place v."""
    return _rescale(E, _uniformizer_power(v, _minimal_shift(E, v), E.field))


def minimal_disc_support(E):
    """Places where a minimal model of E has positive discriminant valuation."""
    K = E.field
    cands = _candidates(E)
    if isinstance(K, FunctionField):
        cands.add(Place.infinity(K.p))
    return sorted(v for v in cands if valuation(E.discriminant, v) + 12 * _minimal_shift(E, v) > 0)


def lattes_bad_places(E):
    """Places where f_E has no D.G.R. for any model coming from a minimal model of E.

    Finite places are read off the map of the global minimal model; over
    F_p(t) the infinite place is judged with a model minimal at infinity.
    """
    K = E.field
    bad = [v for v in bad_places(lattes_map(minimal_model(E))) if not v.is_infinite]
    if isinstance(K, FunctionField):
        inf = Place.infinity(K.p)
        if not _dgr_direct(lattes_map(local_minimal_model(E, inf)), inf):
            bad.append(inf)
    return sorted(bad)


def lattes_dgr_correspondence(E):
    """Bad places of f_E against the bad places of E, away from 2 and 3."""
    K = E.field
    return LattesReport(tuple(_drop_small(lattes_bad_places(E), K)), tuple(_drop_small(minimal_disc_support(E), K)))


# --------------------------------------------------------------------------
# finite-field group law, used to check the map point by point
# --------------------------------------------------------------------------

def _mod(x, p):
    x = Fraction(x)
    return x.numerator * pow(x.denominator, -1, p) % p


def curve_points(A, B, p):
    """Affine points of y^2 = x^3 + A x + B over F_p."""
    A, B = _mod(A, p), _mod(B, p)
    squares = {}
    for y in range(p):
        squares.setdefault(y * y % p, []).append(y)
    return [(x, y) for x in range(p) for y in squares.get((x ** 3 + A * x + B) % p, [])]


def double_point(P, A, p):
    """2P on the curve mod p; None is the point at infinity."""
    if P is None:
        return None
    x, y = P
    if y == 0:
        return None
    lam = (3 * x * x + A) * pow(2 * y, -1, p) % p
    x2 = (lam * lam - 2 * x) % p
    return (x2, (lam * (x - x2) - y) % p)


def _eval_mod(F, x, p):
    """Evaluate the map at the affine point x mod p; None is infinity."""
    num = sum(_mod(c, p) * pow(x, F.degree - i, p) for i, c in enumerate(F.F0.coeffs)) % p
    den = sum(_mod(c, p) * pow(x, F.degree - i, p) for i, c in enumerate(F.F1.coeffs)) % p
    if den == 0:
        return None if num else "undefined"
    return num * pow(den, -1, p) % p


def verify_duplication(E, p, iterate=1):
    """Exhaustively check f_E^iterate(x(P)) = x(2^iterate P) over E(F_p)."""
    if E.field != QQ:
        raise ValueError("point checks are for curves over Q")
    if _mod(E.discriminant, p) == 0:
        raise SingularCurve(f"bad reduction at {p}")
    f = lattes_map(E)
    A = _mod(E.A, p)
    for P in curve_points(E.A, E.B, p):
        Q, x = P, P[0]
        for _ in range(iterate):
            Q = double_point(Q, A, p)
            x = None if x is None else _eval_mod(f, x, p)
        if x != (None if Q is None else Q[0]):
            return False
    return True


def ramification_matches_phi4(E):
    """radical(b w) of f_E equals phi2 * phi4 up to scalar."""
    dd = division_data(E)
    cd = critical_data(lattes_map(E))
    return primitive_model(cd.critical_radical) == primitive_model(radical(dd.phi2 * dd.phi4))


def phi_squarefree(E):
    dd = division_data(E)
    return is_squarefree(dd.phi2 * dd.phi4)
