"""Text syntax for forms, maps, points, places and curves.

Grammar (whitespace is ignored)::

    expr    := term (('+' | '-') term)*
    term    := factor (('*' | '/') factor)*
    factor  := ('-' | '+') factor | power
    power   := atom ('^' | '**') INT
    atom    := INT | 'x0' | 'x1' | 't' | '(' expr ')'

    map     := '[' expr ':' expr ']'
    point   := '[' expr ':' expr ']' | expr | 'inf'
    tuple   := point (',' point)*
    place   := INT | expr-in-t | 'inf'
    curve   := expr ',' expr

``t`` is only available over F_p(t) (``--field p,t``).  Division is allowed
only by expressions free of x0 and x1.  A form must be homogeneous.
"""

from __future__ import annotations

import re

from .errors import DegreeMismatch, ParseError
from .exactalg import QQ, FpPoly, FunctionField, Place
from .forms import BinaryForm
from .ratmap import RationalMapModel

_TOKEN = re.compile(r"\s*(?:(\d+)|(x0|x1|t|inf)|(\*\*|[-+*/^():\[\],]))")


def _tokenize(text):
    pos = 0
    out = []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character at {pos}: {text[pos:pos + 10]!r}")
        num, name, op = m.groups()
        out.append(("num", int(num)) if num else ("name", name) if name else ("op", op))
        pos = m.end()
    return out


class _Poly:
    """Sparse polynomial in x0, x1 with coefficients in K: {(i, j): c}."""

    __slots__ = ("terms", "K")

    def __init__(self, terms, K):
        self.K = K
        self.terms = {k: v for k, v in terms.items() if v != 0}

    @classmethod
    def const(cls, c, K):
        return cls({(0, 0): K.convert(c)}, K)

    def __add__(self, o):
        t = dict(self.terms)
        for k, v in o.terms.items():
            t[k] = t.get(k, self.K.zero) + v
        return _Poly(t, self.K)

    def __neg__(self):
        return _Poly({k: -v for k, v in self.terms.items()}, self.K)

    def __sub__(self, o):
        return self + (-o)

    def __mul__(self, o):
        t = {}
        for (a, b), u in self.terms.items():
            for (c, d), v in o.terms.items():
                k = (a + c, b + d)
                t[k] = t.get(k, self.K.zero) + u * v
        return _Poly(t, self.K)

    def scalar(self):
        if any(k != (0, 0) for k in self.terms):
            return None
        return self.terms.get((0, 0), self.K.zero)


class _Parser:
    def __init__(self, text, K):
        self.toks = _tokenize(text)
        self.i = 0
        self.K = K

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self, kind=None, value=None):
        tok = self.peek()
        if tok[0] is None or (kind and tok[0] != kind) or (value and tok[1] != value):
            raise ParseError(f"expected {value or kind}, found {tok[1]!r}")
        self.i += 1
        return tok

    def at(self, value):
        return self.peek() == ("op", value)

    def done(self):
        return self.i >= len(self.toks)

    def expr(self):
        v = self.term()
        while self.at("+") or self.at("-"):
            op = self.take()[1]
            w = self.term()
            v = v + w if op == "+" else v - w
        return v

    def term(self):
        v = self.factor()
        while self.at("*") or self.at("/"):
            op = self.take()[1]
            w = self.factor()
            if op == "*":
                v = v * w
            else:
                s = w.scalar()
                if s is None or s == 0:
                    raise ParseError("division only by nonzero constants")
                inv = self.K.div(self.K.one, s)
                v = _Poly({k: c * inv for k, c in v.terms.items()}, self.K)
        return v

    def factor(self):
        if self.at("-"):
            self.take()
            return -self.factor()
        if self.at("+"):
            self.take()
            return self.factor()
        return self.power()

    def power(self):
        v = self.atom()
        if self.at("^") or self.at("**"):
            self.take()
            n = self.take("num")[1]
            out = _Poly.const(1, self.K)
            for _ in range(n):
                out = out * v
            return out
        return v

    def atom(self):
        kind, val = self.peek()
        K = self.K
        if kind == "num":
            self.take()
            return _Poly.const(val, K)
        if kind == "name":
            self.take()
            if val == "x0":
                return _Poly({(1, 0): K.one}, K)
            if val == "x1":
                return _Poly({(0, 1): K.one}, K)
            if val == "t":
                if not isinstance(K, FunctionField):
                    raise ParseError("'t' needs a function field (--field p,t)")
                return _Poly.const(K.t, K)
            raise ParseError(f"unexpected {val!r}")
        if self.at("("):
            self.take()
            v = self.expr()
            self.take("op", ")")
            return v
        raise ParseError(f"unexpected token {val!r}")


def parse_field(text):
    """``"Q"`` / empty for Q, ``"p,t"`` or ``"p"`` for F_p(t)."""
    if not text or text.strip().upper() in ("Q", "QQ"):
        return QQ
    parts = [s.strip() for s in text.split(",")]
    try:
        p = int(parts[0])
    except ValueError:
        raise ParseError(f"bad field {text!r}") from None
    if len(parts) > 2 or (len(parts) == 2 and parts[1] != "t"):
        raise ParseError(f"bad field {text!r}")
    try:
        return FunctionField(p)
    except ValueError as e:
        raise ParseError(str(e)) from None


def _to_form(poly, K, degree=None):
    if not poly.terms:
        if degree is None:
            raise ParseError("the zero form has no degree")
        return BinaryForm([K.zero] * (degree + 1), K)
    degs = {a + b for a, b in poly.terms}
    if len(degs) != 1:
        raise ParseError("form is not homogeneous")
    n = degs.pop()
    if degree is not None and n != degree:
        raise DegreeMismatch(f"expected degree {degree}, got {n}")
    return BinaryForm([poly.terms.get((n - i, i), K.zero) for i in range(n + 1)], K)


def parse_scalar(text, K=QQ):
    p = _Parser(text, K)
    v = p.expr()
    if not p.done():
        raise ParseError(f"trailing input in {text!r}")
    s = v.scalar()
    if s is None:
        raise ParseError(f"{text!r} is not a constant")
    return s


def parse_form(text, K=QQ):
    p = _Parser(text, K)
    v = p.expr()
    if not p.done():
        raise ParseError(f"trailing input in {text!r}")
    return _to_form(v, K)


def parse_map(text, K=QQ):
    """``[F0 : F1]`` as a :class:`RationalMapModel`."""
    p = _Parser(text, K)
    p.take("op", "[")
    a = p.expr()
    p.take("op", ":")
    b = p.expr()
    p.take("op", "]")
    if not p.done():
        raise ParseError("trailing input after map")
    if not a.terms and not b.terms:
        raise ParseError("both components are zero")
    F0 = _to_form(a, K) if a.terms else None
    F1 = _to_form(b, K, None if F0 is None else F0.degree)
    if F0 is None:
        F0 = _to_form(a, K, F1.degree)
    return RationalMapModel(F0, F1)


def parse_points(text, K=QQ):
    """Comma-separated projective pairs ``[a:b]`` or affine values / ``inf``."""
    p = _Parser(text, K)
    pts = []
    while True:
        if p.peek() == ("name", "inf"):
            p.take()
            pts.append((K.one, K.zero))
        elif p.at("["):
            p.take()
            a = p.expr().scalar()
            p.take("op", ":")
            b = p.expr().scalar()
            p.take("op", "]")
            if a is None or b is None:
                raise ParseError("point coordinates must be constants")
            pts.append((a, b))
        else:
            a = p.expr().scalar()
            if a is None:
                raise ParseError("point coordinates must be constants")
            pts.append((a, K.one))
        if p.done():
            return pts
        p.take("op", ",")


def parse_place(text, K=QQ):
    text = text.strip()
    if K == QQ:
        try:
            return Place.prime(int(text))
        except ValueError as e:
            raise ParseError(str(e)) from None
    if text == "inf":
        return Place.infinity(K.p)
    c = parse_scalar(text, K)
    if c.den != FpPoly((1,), K.p):
        raise ParseError(f"{text!r} is not a polynomial")
    try:
        return Place(K, c.num)
    except ValueError as e:
        raise ParseError(str(e)) from None


def parse_places(text, K=QQ):
    if text is None or not text.strip():
        return ()
    return tuple(parse_place(s, K) for s in text.split(","))


def parse_curve(text, K=QQ):
    parts = text.split(",")
    if len(parts) != 2:
        raise ParseError("curve needs 'A,B'")
    return parse_scalar(parts[0], K), parse_scalar(parts[1], K)


__all__ = [
    "parse_curve",
    "parse_field",
    "parse_form",
    "parse_map",
    "parse_place",
    "parse_places",
    "parse_points",
    "parse_scalar",
]
