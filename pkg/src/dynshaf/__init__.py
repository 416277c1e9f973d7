"""Exact computations with rational self-maps of P^1 and their reduction.

Modules:

* :mod:`~dynshaf.exactalg` -- Q, F_p(t), finite fields, places and valuations
* :mod:`~dynshaf.forms` -- binary forms, resultants, discriminants, the GL_2 x G_m action
* :mod:`~dynshaf.ratmap` -- rational maps, critical loci, differential good reduction, multipliers
* :mod:`~dynshaf.divisors` -- point tuples, cross-ratios, reduced divisors, S-unit equations
* :mod:`~dynshaf.lattes` -- Lattes maps of elliptic curves
* :mod:`~dynshaf.census` -- height-bounded census and finiteness evidence
"""

from .divisors import (
    PointTuple,
    ReducedDivisor,
    cross_ratio,
    divisor_good_reduction_at,
    divisors_equivalent,
    enumerate_gr_lambdas,
    moduli_point,
    normalize_three,
    solve_unit_equation,
)
from .exactalg import GF, QQ, FunctionField, Place
from .forms import BinaryForm, GroupElement, act, classical_discriminant, discriminant, resultant, wronskian
from .lattes import EllipticCurve, division_data, lattes_dgr_correspondence, lattes_map, verify_disc_identity
from .ratmap import (
    RationalMapModel,
    bad_places,
    branch_form,
    critical_data,
    dgr_at,
    differential_discriminant,
    multiplier_invariants,
    verify_relative_invariance,
)

__all__ = [
    "GF", "QQ", "FunctionField", "Place",
    "BinaryForm", "GroupElement", "act", "classical_discriminant", "discriminant", "resultant", "wronskian",
    "RationalMapModel", "bad_places", "branch_form", "critical_data", "dgr_at", "differential_discriminant",
    "multiplier_invariants", "verify_relative_invariance",
    "PointTuple", "ReducedDivisor", "cross_ratio", "divisor_good_reduction_at", "divisors_equivalent",
    "enumerate_gr_lambdas", "moduli_point", "normalize_three", "solve_unit_equation",
    "EllipticCurve", "division_data", "lattes_dgr_correspondence", "lattes_map", "verify_disc_identity",
]

__version__ = "0.1.0"
