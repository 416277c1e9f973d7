"""Lattes maps: discriminant identity and the D.G.R. / good reduction match."""

from dynshaf.exactalg import FunctionField
from dynshaf.lattes import EllipticCurve, lattes_dgr_correspondence, lattes_map, verify_disc_identity

F7 = FunctionField(7)
curves = [EllipticCurve(0, 1), EllipticCurve(-1, 1), EllipticCurve(625, 31250), EllipticCurve(F7.t, 1, F7)]
for E in curves:
    r = verify_disc_identity(E)
    c = lattes_dgr_correspondence(E)
    print(f"y^2 = x^3 + ({E.A}) x + ({E.B})")
    print("  map            ", lattes_map(E))
    print("  disc ratio     ", r.ratio, "two power", r.two_power)
    print("  map bad places ", [str(v) for v in c.bad_places])
    print("  curve bad      ", [str(v) for v in c.disc_support], "agree" if c.agree else "DISAGREE")
