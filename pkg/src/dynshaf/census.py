"""Height-bounded census of rational maps with D.G.R. outside a finite set S.

Maps over Q are enumerated as integer coefficient vectors in ``[-H, H]``
(``F0`` coefficients first, each top degree first) in lexicographic order.
Only primitive vectors whose first nonzero entry is positive are kept, so
every map appears exactly once per model.  A numpy prefilter discards most
vectors before any exact per-map work:

1. the resultant must be a nonzero S-unit;
2. the wronskian ``w`` must have S-unit content;
3. with ``b`` the branch form and primes of S removed, ``disc(w)``,
   ``disc(b)`` and ``Res(b, w)`` of the primitive parts must all be 1 up to
   sign; when one of them is 0 the map is not differentially separated and
   it is passed on to the exact test unchanged.

Maps over F_p(t) have coefficients in F_p[t] of degree at most H; only the
resultant is prefiltered: it must be nonzero modulo each linear place outside
S, and its exact value in F_p[t] must be supported on the finite places of S.

Classification is at fingerprint resolution: multiplier symmetric
functions, the number of critical points, and (when the critical locus is
split) the sorted j-invariants of its 4-point subsets.  A stable fingerprint
set is evidence for finiteness, not a proof.
"""

from __future__ import annotations

import itertools
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

import numpy as np
from sympy import Matrix

from .divisors import cross_ratio_fingerprint
from .errors import DegreeTooSmall
from .exactalg import QQ, FpPoly, FunctionField, Place, RatFunc, element_key, element_str
from .forms import BinaryForm, gcd_forms, radical, rational_roots, wronskian
from .ratmap import (
    WITNESSED,
    RationalMapModel,
    _dgr_direct,
    admissibility_witness,
    bad_places,
    bad_places_within,
    critical_data,
    differential_discriminant,
    multiplier_invariants,
)

CHUNK = 1 << 17
EVIDENCE_NOTE = "fingerprint stabilization is evidence for finiteness, not verification"


@dataclass(frozen=True)
class CensusConfig:
    degree: int
    height: int
    S: tuple = ()
    field: object = QQ
    mstar: bool = False
    separated: bool = False
    admissible: bool = False

    def __post_init__(self):
        if self.degree < 2:
            raise DegreeTooSmall("census needs d >= 2")
        if self.height < 1:
            raise ValueError("census needs H >= 1")
        if isinstance(self.field, FunctionField) and self.field.p <= 2 * self.degree - 2:
            raise ValueError(f"census over F_p(t) needs p > 2d - 2 = {2 * self.degree - 2}")
        if self.admissible and not isinstance(self.field, FunctionField):
            raise ValueError("the admissibility filter is for function fields")
        object.__setattr__(self, "S", tuple(sorted(set(self.S))))

    @property
    def coefficient_count(self):
        return 2 * self.degree + 2

    @property
    def box_size(self):
        if self.field == QQ:
            base = 2 * self.height + 1
        else:
            base = self.field.p ** (self.height + 1)
        return base ** self.coefficient_count


@dataclass(frozen=True)
class CensusRecord:
    model: tuple
    degree: int
    bad_places: tuple
    fingerprint: tuple
    flags: dict = field(default_factory=dict, compare=False)

    def to_json(self):
        doc = {
            "bad_places": [str(v) for v in self.bad_places],
            "degree": self.degree,
            "fingerprint": fingerprint_json(self.fingerprint),
            "flags": dict(sorted(self.flags.items())),
            "model": [[element_str(c) for c in comp] for comp in self.model],
        }
        return json.dumps(doc, sort_keys=True, separators=(",", ":"))


def fingerprint_json(fp):
    sigma, count, js = fp
    return {"critical_count": count, "cross_ratios": None if js is None else list(js), "sigma": list(sigma)}


def fingerprint(F, inv=None):
    """Conjugation-invariant tuple of strings for a map model."""
    inv = inv or multiplier_invariants(F)
    cd = critical_data(F)
    rad = cd.critical_radical
    js = None
    roots = rational_roots(rad)
    if len(roots) == rad.degree and len(roots) >= 4:
        js = tuple(element_str(j) for j in cross_ratio_fingerprint(roots, F.field))
    return (tuple(element_str(s) for s in inv.sigma), cd.critical_point_count, js)


def make_record(F, cfg, bad=None):
    """Apply the config filters to F; a record, or None when F is filtered out."""
    cd = critical_data(F)
    if cfg.mstar and cd.ram_point_count < 3:
        return None
    sep = differential_discriminant(F).differentially_separated
    if cfg.separated and not sep:
        return None
    flags = {"differentially_separated": sep}
    if isinstance(F.field, FunctionField):
        w = admissibility_witness(F)
        if cfg.admissible and w != WITNESSED:
            return None
        flags["admissibility"] = w
    if bad is None:
        bad = tuple(v for v in cfg.S if not _dgr_direct(F, v))
    inv = multiplier_invariants(F)
    flags["degenerate_fixed_points"] = inv.degenerate
    return CensusRecord((F.F0.coeffs, F.F1.coeffs), F.degree, tuple(bad), fingerprint(F, inv), flags)


# --------------------------------------------------------------------------
# batched exact integer linear algebra
# --------------------------------------------------------------------------

_ogcd = np.frompyfunc(gcd, 2, 1)


def batch_det(M):
    """Bareiss determinants of a stack of square matrices (int64 or object)."""
    M = M.copy()
    N, n, _ = M.shape
    if n == 0:
        return np.ones(N, dtype=M.dtype)
    one = np.ones(N, dtype=M.dtype)
    prev = one.copy()
    singular = np.zeros(N, dtype=bool)
    flip = np.zeros(N, dtype=bool)
    idx = np.arange(N)
    for k in range(n - 1):
        nonzero = M[:, k:, k] != 0
        has = nonzero.any(axis=1)
        singular |= ~has
        r = k + nonzero.argmax(axis=1)
        flip ^= r != k
        row_k = M[idx, k].copy()
        M[idx, k] = M[idx, r]
        M[idx, r] = row_k
        piv = M[:, k, k].copy()
        piv[~has] = 1
        M[:, k + 1:, k + 1:] = (
            M[:, k + 1:, k + 1:] * piv[:, None, None] - M[:, k + 1:, k:k + 1] * M[:, k:k + 1, k + 1:]
        ) // prev[:, None, None]
        prev = piv
    out = M[:, n - 1, n - 1].copy()
    out[flip] = -out[flip]
    out[singular] = 0
    return out


def batch_sylvester(f, g):
    """Sylvester matrices of coefficient stacks f (N, m+1) and g (N, n+1)."""
    N = f.shape[0]
    m, n = f.shape[1] - 1, g.shape[1] - 1
    S = np.zeros((N, m + n, m + n), dtype=f.dtype)
    for r in range(n):
        S[:, r, r:r + m + 1] = f
    for r in range(m):
        S[:, n + r, r:r + n + 1] = g
    return S


def batch_resultant(f, g):
    return batch_det(batch_sylvester(f, g))


def batch_classical_disc(g):
    """Classical discriminants (up to sign) of a stack of forms."""
    n = g.shape[1] - 1
    dg = g[:, :n] * np.arange(n, 0, -1)
    M = batch_sylvester(g, dg)
    M[:, :, 0] = 0
    M[:, 0, 0] = 1
    M[:, n - 1, 0] = n
    return batch_det(M)


def batch_content(f):
    out = f[:, 0]
    for j in range(1, f.shape[1]):
        out = _ogcd(out, f[:, j])
    return np.abs(out.astype(object))


def strip_primes(x, primes):
    """|x| with every prime of ``primes`` divided out (0 stays 0)."""
    x = np.abs(x)
    for q in primes:
        while True:
            m = (x % q == 0) & (x != 0)
            if not m.any():
                break
            x[m] //= q
    return x


def batch_wronskian(C, d):
    """Wronskian coefficients (N, 2d-1), object dtype."""
    f, g = C[:, :d + 1].astype(object), C[:, d + 1:].astype(object)
    N = len(C)
    w = np.zeros((N, 2 * d - 1), dtype=object)
    for i in range(d):
        a0, a1 = (d - i) * f[:, i], (i + 1) * f[:, i + 1]
        for j in range(d):
            b0, b1 = (d - j) * g[:, j], (j + 1) * g[:, j + 1]
            w[:, i + j] += a0 * b1 - a1 * b0
    return w


def _interpolation_matrix(us):
    """Integer matrix L and scalar D with D * coeffs = L @ values (top degree first)."""
    n = len(us)
    V = [[Fraction(u) ** (n - 1 - j) for j in range(n)] for u in us]
    # Gauss-Jordan inverse over Q
    A = [row + [Fraction(int(i == r)) for i in range(n)] for r, row in enumerate(V)]
    for c in range(n):
        p = next(r for r in range(c, n) if A[r][c] != 0)
        A[c], A[p] = A[p], A[c]
        piv = A[c][c]
        A[c] = [x / piv for x in A[c]]
        for r in range(n):
            if r != c and A[r][c] != 0:
                fct = A[r][c]
                A[r] = [x - fct * y for x, y in zip(A[r], A[c])]
    inv = [row[n:] for row in A]
    D = 1
    for row in inv:
        for x in row:
            D = D * x.denominator // gcd(D, x.denominator)
    return [[int(x * D) for x in row] for row in inv], D


def batch_branch(C, d, w):
    """Branch forms (scaled by a fixed integer) as an object stack (N, 2d-1)."""
    N = 2 * d - 2
    us = [0] + [s * k for k in range(1, N + 1) for s in (1, -1)][:N]
    L, _ = _interpolation_matrix(us)
    f, g = C[:, :d + 1].astype(object), C[:, d + 1:].astype(object)
    vals = [batch_resultant(f - u * g, w) for u in us]
    out = np.zeros((len(C), N + 1), dtype=object)
    for i in range(N + 1):
        for j in range(N + 1):
            if L[i][j]:
                out[:, i] += L[i][j] * vals[j]
    return out


# --------------------------------------------------------------------------
# enumeration
# --------------------------------------------------------------------------

def _qq_chunk(cfg, start, end):
    H = cfg.height
    b = 2 * H + 1
    m = cfg.coefficient_count
    i = np.arange(start, end, dtype=np.int64)
    C = np.empty((end - start, m), dtype=np.int64)
    for k in range(m - 1, -1, -1):
        C[:, k] = i % b - H
        i //= b
    return C


def _qq_prefilter(cfg, C):
    """Rows of C that may have D.G.R. outside S, and which are already proven."""
    d = cfg.degree
    primes = [v.gen for v in cfg.S]
    g = np.gcd.reduce(np.abs(C), axis=1)
    nz = C != 0
    first = C[np.arange(len(C)), nz.argmax(axis=1)]
    C = C[(g == 1) & (first > 0)]
    if not len(C):
        return C, np.zeros(0, dtype=bool)
    # int64 is exact while (sqrt(d+1) H)^(4d) stays below 2^62
    big = ((d + 1) * cfg.height ** 2) ** d >= 2 ** 31
    F = C.astype(object) if big else C
    res = batch_resultant(F[:, :d + 1], F[:, d + 1:])
    keep = (res != 0) & (strip_primes(res, primes) == 1)
    C = C[keep]
    w = batch_wronskian(C, d)
    cw = batch_content(w)
    keep = strip_primes(cw, primes) == 1
    C, w, cw = C[keep], w[keep], cw[keep]
    pw = w // cw[:, None]
    # distinct critical points must stay distinct: every nonzero one of
    # disc(w), disc(b), Res(b, w) on primitive parts is an S-unit
    dw = batch_classical_disc(pw)
    keep = (dw == 0) | (strip_primes(dw, primes) == 1)
    C, w, pw, dw = C[keep], w[keep], pw[keep], dw[keep]
    if not len(C):
        return C, np.zeros(0, dtype=bool)
    b = batch_branch(C, d, w)
    cb = batch_content(b)
    cb[cb == 0] = 1
    pb = b // cb[:, None]
    separated = dw != 0
    good = np.ones(len(C), dtype=bool)
    for q in (batch_classical_disc(pb), batch_resultant(pb, pw)):
        separated &= q != 0
        good &= (q == 0) | (strip_primes(q, primes) == 1)
    return C[good], separated[good]


def _qq_worker(args):
    cfg, start, end = args
    C, proven = _qq_prefilter(cfg, _qq_chunk(cfg, start, end))
    d = cfg.degree
    out = []
    for row, ok in zip(C.tolist(), proven.tolist()):
        F = RationalMapModel.from_coeffs(row[:d + 1], row[d + 1:])
        if not ok:
            if cfg.mstar and radical(wronskian(F.F0, F.F1)).degree < 3:
                continue
            if not bad_places_within(F, cfg.S):
                continue
        rec = make_record(F, cfg)
        if rec is not None:
            out.append(rec)
    return out


def _fp_polys(p, H):
    """All polynomials of degree <= H over F_p, in index order."""
    return [FpPoly(c, p) for c in itertools.product(range(p), repeat=H + 1)]


def _fpt_worker(args):
    cfg, start, end = args
    K = cfg.field
    p, d = K.p, cfg.degree
    polys = _fp_polys(p, cfg.height)
    base = len(polys)
    m = cfg.coefficient_count
    linear = [a for a in range(p) if Place.poly([-a % p, 1], p) not in cfg.S]
    finite_S = [v.gen for v in cfg.S if not v.is_infinite]
    out = []
    for i in range(start, end):
        digits = []
        x = i
        for _ in range(m):
            digits.append(x % base)
            x //= base
        coeffs = [polys[k] for k in reversed(digits)]
        lead = next((c for c in coeffs if not c.is_zero()), None)
        if lead is None or lead.lc != 1:
            continue
        g = FpPoly((), p)
        for c in coeffs:
            g = _fp_gcd(g, c)
        if g.deg > 0:
            continue
        if not _fp_res_nonvanishing(coeffs, d, p, linear):
            continue
        if not _fp_res_s_unit(coeffs, d, p, finite_S):
            continue
        try:
            F = RationalMapModel.from_coeffs([RatFunc(c) for c in coeffs[:d + 1]], [RatFunc(c) for c in coeffs[d + 1:]], K)
        except ValueError:
            continue
        try:
            bad = bad_places(F)
        except Exception:  # inseparable reductions are recorded as skipped
            continue
        if not set(bad) <= set(cfg.S):
            continue
        rec = make_record(F, cfg, tuple(bad))
        if rec is not None:
            out.append(rec)
    return out


def _fp_gcd(a, b):
    from .exactalg import fp_gcd

    return fp_gcd(a, b)


def _fp_res_nonvanishing(coeffs, d, p, points):
    """The resultant is nonzero after specialising t at each given point."""
    for a in points:
        vals = [c(a) % p for c in coeffs]
        M = [[0] * (2 * d) for _ in range(2 * d)]
        for r in range(d):
            M[r][r:r + d + 1] = vals[:d + 1]
            M[d + r][r:r + d + 1] = vals[d + 1:]
        if _det_mod(M, p) == 0:
            return False
    return True


def _fp_res_s_unit(coeffs, d, p, gens):
    """The resultant in F_p[t] is nonzero and supported on the given primes."""
    M = [[FpPoly((), p)] * (2 * d) for _ in range(2 * d)]
    for r in range(d):
        M[r][r:r + d + 1] = coeffs[:d + 1]
        M[d + r][r:r + d + 1] = coeffs[d + 1:]
    res = _det_poly(M, p)
    if res.is_zero():
        return False
    for g in gens:
        while res.deg > 0:
            q, r = divmod(res, g)
            if not r.is_zero():
                break
            res = q
    return res.deg == 0


def _det_poly(M, p):
    # Bareiss over F_p[t]
    M = [row[:] for row in M]
    n = len(M)
    sign, prev = 1, FpPoly((1,), p)
    for k in range(n - 1):
        if M[k][k].is_zero():
            r = next((r for r in range(k + 1, n) if not M[r][k].is_zero()), None)
            if r is None:
                return FpPoly((), p)
            M[k], M[r] = M[r], M[k]
            sign = -sign
        akk = M[k][k]
        for i in range(k + 1, n):
            aik = M[i][k]
            for j in range(k + 1, n):
                M[i][j] = (akk * M[i][j] - aik * M[k][j]) // prev
        prev = akk
    d = M[n - 1][n - 1]
    return d if sign == 1 else d * (p - 1)


def _det_mod(M, p):
    M = [row[:] for row in M]
    n = len(M)
    det = 1
    for k in range(n):
        r = next((r for r in range(k, n) if M[r][k] % p), None)
        if r is None:
            return 0
        if r != k:
            M[k], M[r] = M[r], M[k]
            det = -det
        det = det * M[k][k] % p
        inv = pow(M[k][k], -1, p)
        for i in range(k + 1, n):
            f = M[i][k] * inv % p
            if f:
                M[i] = [(x - f * y) % p for x, y in zip(M[i], M[k])]
    return det % p


def _record_key(rec):
    return tuple(element_key(c) for comp in rec.model for c in comp)


def census_run(cfg, workers=1, chunk=CHUNK):
    """All census records for cfg, sorted lexicographically by model.

    The coefficient box is cut into contiguous index chunks; chunks are
    processed independently (optionally in ``workers`` processes) and the
    results are merged by sorting, so output is independent of ``workers``.
    """
    total = cfg.box_size
    jobs = [(cfg, s, min(total, s + chunk)) for s in range(0, total, chunk)]
    worker = _qq_worker if cfg.field == QQ else _fpt_worker
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(worker, jobs))
    else:
        parts = [worker(j) for j in jobs]
    return sorted((r for part in parts for r in part), key=_record_key)


def write_records(records, stream):
    for rec in records:
        stream.write(rec.to_json() + "\n")


def restrict_height(records, H):
    """Records of a census whose model has sup-norm at most H (over Q)."""
    return [r for r in records if all(abs(c) <= H for comp in r.model for c in comp)]


def stabilization_report(small, large, S=None):
    """Compare the fingerprint sets of two sweeps at consecutive heights."""
    fa = {r.fingerprint for r in small}
    fb = {r.fingerprint for r in large if S is None or set(r.bad_places) <= set(S)}
    new = sorted(fb - fa, key=repr)
    return {
        "records": [len(small), len(large)],
        "fingerprints": [len(fa), len(fb)],
        "new_fingerprints": [fingerprint_json(f) for f in new],
        "lost_fingerprints": len(fa - fb),
        "verdict": "stable" if not new else "growing",
        "note": EVIDENCE_NOTE,
    }


# --------------------------------------------------------------------------
# degree-2 family showing the three-ramification-point hypothesis is needed
# --------------------------------------------------------------------------

def family_member(k):
    """``[-2^k x0^2 + x1^2 : 2^k x0^2 + x1^2]``."""
    return RationalMapModel.from_coeffs([-(2 ** k), 0, 1], [2 ** k, 0, 1])


def infinite_family_demo(k_max):
    """Infinitely many non-conjugate quadratic maps with D.G.R. outside {2}.

    ``bad_places`` is a complete computation (support of the resultant, the
    reduced differential discriminant and the wronskian content), so
    ``bad_places(F_k) <= {2}`` certifies D.G.R. at every odd prime.

    sigma_1 is -2 on the whole family, so pairwise non-conjugacy is read off
    the pair (sigma_1, sigma_2); ``sigma1_distinct`` is reported as computed.
    """
    if k_max < 2:
        raise ValueError("k_max >= 2")
    two = Place.prime(2)
    members = []
    for k in range(1, k_max + 1):
        F = family_member(k)
        bad = bad_places(F)
        cd = critical_data(F)
        inv = multiplier_invariants(F)
        members.append({
            "k": k,
            "model": [[element_str(c) for c in F.F0.coeffs], [element_str(c) for c in F.F1.coeffs]],
            "bad_places": [str(v) for v in bad],
            "bad_within_2": set(bad) <= {two},
            "ram_points": cd.ram_point_count,
            "critical_points": cd.critical_point_count,
            "sigma1": element_str(inv.sigma[0]),
            "sigma2": element_str(inv.sigma[1]),
        })
    sig = [m["sigma1"] for m in members]
    pairs = [(m["sigma1"], m["sigma2"]) for m in members]
    return {
        "maps": members,
        "all_bad_within_2": all(m["bad_within_2"] for m in members),
        "sigma1_distinct": len(set(sig)) == len(sig),
        "sigma_distinct": len(set(pairs)) == len(pairs),
        "ram_points_below_3": all(m["ram_points"] < 3 for m in members),
    }


# --------------------------------------------------------------------------
# maps ramified and branched only inside a fixed finite set
# --------------------------------------------------------------------------

def _exponent_patterns(n_points, total):
    for e in itertools.product(range(total + 1), repeat=n_points):
        if sum(e) == total and sum(1 for x in e if x) >= 3:
            yield e


def _wronskian_tensor(d):
    """T with w_k = sum_ij T[k, i, j] f_i g_j (coefficients top degree first)."""
    T = np.zeros((2 * d - 1, d + 1, d + 1), dtype=np.int64)
    for i in range(d):
        for j in range(d):
            T[i + j, i, j + 1] += (d - i) * (j + 1)
            T[i + j, i + 1, j] -= (i + 1) * (d - j)
    return T


def _orthogonal_basis(P):
    """Integer vectors spanning the orthogonal complement of P."""
    basis = Matrix([list(P)]).nullspace()
    out = []
    for v in basis:
        den = 1
        for x in v:
            den = den * x.q // gcd(den, x.q)
        out.append([int(x * den) for x in v])
    return np.array(out, dtype=np.int64).T


def rigidity_search(Y, d, H, block=64):
    """Height-<=H models of degree d with ramification and branch points in Y.

    Y must be split over Q.  Also requires at least three distinct
    ramification points, so the answer is empty when |Y| < 3.  The sweep is
    exhaustive: for each F0 the condition "w is proportional to an allowed
    ramification pattern" is linear in F1 and is tested against every F1 in
    the box at once.
    """
    if d < 3:
        raise ValueError("rigidity search is for d >= 3")
    if Y.field != QQ:
        raise ValueError("rigidity search runs over Q")
    pts = Y.rational_points()
    if len(pts) != Y.degree:
        raise ValueError("Y must be split over Q")
    if len(pts) < 3:
        return []
    lin = [BinaryForm.linear(pt) for pt in pts]
    perps = []
    for e in _exponent_patterns(len(pts), 2 * d - 2):
        P = BinaryForm([1])
        for L, k in zip(lin, e):
            P = P * L ** k
        perps.append(_orthogonal_basis([int(c) for c in P.coeffs]))
    T = _wronskian_tensor(d)
    n = d + 1
    side = np.array(list(itertools.product(range(-H, H + 1), repeat=n)), dtype=np.int64)
    TQ = [np.einsum("kij,kq->qij", T, Q) for Q in perps]
    rows = []
    for s in range(0, len(side), block):
        F0 = side[s:s + block]
        hit = np.zeros((len(F0), len(side)), dtype=bool)
        for M in TQ:
            # (Q^T w)(F0, F1) for every pair in the block
            R = np.einsum("ai,qij,bj->abq", F0, M, side, optimize=True)
            hit |= ~(R != 0).any(axis=2)
        for a, b in zip(*np.nonzero(hit)):
            rows.append(F0[a].tolist() + side[b].tolist())
    found = []
    for row in sorted(rows):
        C = [c for c in row if c]
        if not C or C[0] < 0 or _gcd_all(row) != 1:
            continue
        try:
            F = RationalMapModel.from_coeffs(row[:n], row[n:])
        except ValueError:
            continue
        if _critical_inside(F, Y):
            found.append(F)
    return found


def _gcd_all(xs):
    g = 0
    for x in xs:
        g = gcd(g, x)
    return g


def _critical_inside(F, Y):
    cd = critical_data(F)
    if cd.ram_point_count < 3:
        return False
    for part in (cd.ramification_radical, cd.branch_radical):
        if gcd_forms(part, Y.form).degree != part.degree:
            return False
    return True
