"""Differential discriminants and D.G.R. of a few quadratic maps."""

import random

from dynshaf.exactalg import Place
from dynshaf.ratmap import (
    RationalMapModel,
    bad_places,
    differential_discriminant,
    multiplier_invariants,
    random_map,
)

diag = RationalMapModel.from_coeffs([1, 0, 3], [2, 0, 5])
print("diagonal map", diag)
print("  delta_diff       ", differential_discriminant(diag).delta_diff)
print("  2^40 a^2c^2d^2f^2 (af-cd)^20 =", 2 ** 40 * (1 * 3 * 2 * 5) ** 2 * (1 * 5 - 3 * 2) ** 20)
print("  bad places       ", [str(v) for v in bad_places(diag)])

F = random_map(2, random.Random(0), height=6)
inv = multiplier_invariants(F)
dd = differential_discriminant(F).delta_diff
print("random map", F)
print("  delta_diff / (rho^8 theta1^2 theta2^2) =", dd / (inv.rho ** 8 * inv.theta1 ** 2 * inv.theta2 ** 2))
print("  bad places", [str(v) for v in bad_places(F)])
print("  good at 7?", Place.prime(7) not in bad_places(F))
