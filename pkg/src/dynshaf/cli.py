"""Command-line interface.

Every subcommand prints one JSON document, except ``census`` which prints
one JSON record per line.  Exact values are strings (``"n"``, ``"n/d"`` or
an F_p(t) expression).  Exit status: 0 on success, 2 when the input does
not parse, 3 when it parses but violates a precondition.

Examples::

    dynshaf ddisc "[x0^2 - x1^2 : 2*x0*x1]"
    dynshaf dgr "[x0^2 - x1^2 : 2*x0*x1]" --place 3
    dynshaf cross-ratio "0,1,inf,2,1/2"
    dynshaf unit-eq --s 2 --bound 10
    dynshaf lattes --curve 0,1 --verify
    dynshaf lattes --curve=-1,1           # "=" when A is negative
    dynshaf census --degree 3 --height 1 --s 2,3,5 --mstar
    dynshaf dgr "[x0^2 : t*x1^2]" --field 3,t --place t
"""

from __future__ import annotations

import argparse
import json
import sys

from . import census as _census
from . import divisors as _div
from . import lattes as _lat
from . import ratmap as _rm
from .errors import DynShafError, ParseError
from .exactalg import QQ, element_str
from .parse import parse_curve, parse_field, parse_form, parse_map, parse_place, parse_places, parse_points

EXIT_PARSE = 2
EXIT_PRECONDITION = 3


def _s(x):
    return element_str(x)


def _pair(F):
    return [[_s(c) for c in F.F0.coeffs], [_s(c) for c in F.F1.coeffs]]


def cmd_ddisc(args, K):
    F = parse_map(args.map, K)
    rep = _rm.differential_discriminant(F)
    cd = _rm.critical_data(F)
    return {
        "map": str(F),
        "delta_diff": _s(rep.delta_diff),
        "delta_diff_reduced": _s(rep.delta_diff_reduced),
        "differentially_separated": rep.differentially_separated,
        "wronskian": str(cd.wronskian),
        "branch_form": str(cd.branch),
        "ram_points": cd.ram_point_count,
        "branch_points": cd.branch_point_count,
        "critical_points": cd.critical_point_count,
    }


def cmd_dgr(args, K):
    F = parse_map(args.map, K)
    v = parse_place(args.place, K)
    out = {"map": str(F), "place": str(v), "method": args.method}
    out["dgr"] = _rm.dgr_at(F, v, method=args.method)
    if args.search and not out["dgr"]:
        found, level = _rm.dgr_search(F, v, args.search, args.method)
        out["dgr"], out["level"] = found, level
    return out


def cmd_bad_places(args, K):
    F = parse_map(args.map, K)
    return {"map": str(F), "bad_places": [str(v) for v in _rm.bad_places(F)]}


def cmd_invariants(args, K):
    F = parse_map(args.map, K)
    inv = _rm.multiplier_invariants(F)
    out = {"map": str(F), "sigma": [_s(x) for x in inv.sigma], "rho": _s(inv.rho), "degenerate": inv.degenerate}
    if inv.tau1 is not None:
        out.update(tau1=_s(inv.tau1), theta1=_s(inv.theta1), theta2=_s(inv.theta2))
    return out


def cmd_cross_ratio(args, K):
    s = _div.PointTuple(parse_points(args.tuple, K), K)
    out = {"points": [None if x is None else _s(x) for x in s.affine_values()]}
    if len(s) >= 4:
        out["moduli_point"] = [_s(x) for x in _div.moduli_point(s).coords]
    if len(s) >= 3:
        _, t = _div.normalize_three(s)
        out["normalized"] = [None if x is None else _s(x) for x in t.affine_values()]
    return out


def cmd_divisor_equiv(args, K):
    D = _div.ReducedDivisor(parse_form(args.d1, K))
    E = _div.ReducedDivisor(parse_form(args.d2, K))
    res = _div.divisors_equivalent(D, E)
    return {"equivalent": res, "split": [D.split, E.split]}


def cmd_unit_eq(args, K):
    S = parse_places(args.s, K)
    sol = _div.solve_unit_equation(S, args.bound, K)
    return {
        "S": [str(v) for v in S],
        "bound": args.bound,
        "solutions": [[_s(u), _s(v)] for u, v in sol.pairs],
        "exceptional": [[_s(u), _s(v)] for u, v in sol.exceptional],
    }


def cmd_lambdas(args, K):
    S = parse_places(args.s, K)
    lams = _div.enumerate_gr_lambdas(S, args.bound, K)
    return {"S": [str(v) for v in S], "bound": args.bound, "lambdas": [_s(x) for x in lams]}


def cmd_lattes(args, K):
    A, B = parse_curve(args.curve, K)
    E = _lat.EllipticCurve(A, B, K)
    f = _lat.lattes_map(E)
    dd = _lat.division_data(E)
    out = {
        "curve": [_s(E.A), _s(E.B)],
        "discriminant": _s(E.discriminant),
        "map": _pair(f),
        "phi2": str(dd.phi2),
        "phi4": str(dd.phi4),
    }
    if args.verify:
        ident = _lat.verify_disc_identity(E)
        corr = _lat.lattes_dgr_correspondence(E)
        out["disc_identity"] = {"matches": ident.matches, "two_power": ident.two_power, "ratio": _s(ident.ratio)}
        out["correspondence"] = {
            "bad_places": [str(v) for v in corr.bad_places],
            "curve_bad_places": [str(v) for v in corr.disc_support],
            "agree": corr.agree,
        }
        if K == QQ:
            out["point_checks"] = {
                str(p): _lat.verify_duplication(E, p)
                for p in (5, 7, 11, 13)
                if _lat._mod(E.discriminant, p) != 0
            }
    return out


def cmd_census(args, K):
    cfg = _census.CensusConfig(
        degree=args.degree,
        height=args.height,
        S=parse_places(args.s, K),
        field=K,
        mstar=args.mstar,
        separated=args.separated,
        admissible=args.admissible,
    )
    records = _census.census_run(cfg, workers=args.workers)
    _census.write_records(records, sys.stdout)
    return None


def cmd_rigidity(args, K):
    Y = _div.ReducedDivisor(parse_form(args.y, K))
    found = _census.rigidity_search(Y, args.degree, args.height)
    return {"count": len(found), "maps": [_pair(F) for F in found]}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", default="Q", help="Q (default) or 'p,t' for F_p(t)")
    ap = argparse.ArgumentParser(prog="dynshaf", description=__doc__.split("\n")[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.set_defaults(fn=fn)
        return p

    add("ddisc", cmd_ddisc, "differential discriminant").add_argument("map")
    p = add("dgr", cmd_dgr, "differential good reduction at a place")
    p.add_argument("map")
    p.add_argument("--place", required=True)
    p.add_argument("--method", choices=["direct", "valuation"], default="direct")
    p.add_argument("--search", type=int, default=0, help="retry over conjugates with entries in [-n, n]")
    add("bad-places", cmd_bad_places, "places without D.G.R.").add_argument("map")
    add("invariants", cmd_invariants, "multiplier invariants").add_argument("map")
    add("cross-ratio", cmd_cross_ratio, "moduli coordinates of a point tuple").add_argument("tuple")
    p = add("divisor-equiv", cmd_divisor_equiv, "PGL2 equivalence of divisors")
    p.add_argument("d1")
    p.add_argument("d2")
    p = add("unit-eq", cmd_unit_eq, "solve u + v = 1 in S-units")
    p.add_argument("--s", default="")
    p.add_argument("--bound", type=int, default=10)
    p = add("lambdas", cmd_lambdas, "lambda with {0,1,inf,lambda} good outside S")
    p.add_argument("--s", default="")
    p.add_argument("--bound", type=int, default=10)
    p = add("lattes", cmd_lattes, "Lattes map of y^2 = x^3 + A x + B")
    p.add_argument("--curve", required=True)
    p.add_argument("--verify", action="store_true")
    p = add("census", cmd_census, "height-bounded census (JSON lines)")
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--height", type=int, required=True)
    p.add_argument("--s", default="")
    p.add_argument("--mstar", action="store_true", help="require >= 3 ramification points")
    p.add_argument("--separated", action="store_true", help="require differential separatedness")
    p.add_argument("--admissible", action="store_true", help="require an admissibility witness")
    p.add_argument("--workers", type=int, default=1)
    p = add("rigidity", cmd_rigidity, "maps ramified and branched inside Y")
    p.add_argument("--y", required=True)
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--height", type=int, required=True)
    return ap


def main(argv=None):
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_PARSE if e.code else 0
    try:
        K = parse_field(args.field)
        out = args.fn(args, K)
    except ParseError as e:
        print(json.dumps({"error": "parse", "message": str(e)}), file=sys.stderr)
        return EXIT_PARSE
    except (DynShafError, ValueError, ZeroDivisionError, TypeError) as e:
        print(json.dumps({"error": "precondition", "message": str(e)}), file=sys.stderr)
        return EXIT_PRECONDITION
    if out is not None:
        print(json.dumps(out, sort_keys=True))
    return 0


if __name__ == "__main__":
    sys.exit(main())
