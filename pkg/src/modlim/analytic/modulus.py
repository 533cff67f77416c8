"""Exact moduli of quadrilateral families in the upper half-plane and the disk."""

import math

from modlim.analytic.elliptic import grotzsch_mu
from modlim.analytic.mobius import (
    conjugate_triple,
    liouville_mass_halfplane,
    normalize_to_halfplane,
)
from modlim.core.errors import DegenerateQuadruple
from modlim.models.analytic import CircleQuadruple, HalfPlaneTriple

ASYMPTOTIC_OFFSET = (2.0 / math.pi) * math.log(4.0)


def _modulus_from_ratio(r_squared: float) -> float:
    return (2.0 / math.pi) * grotzsch_mu(math.sqrt(r_squared))


def quad_modulus(t: HalfPlaneTriple) -> float:
    """
    Modulus of the curves joining [w1, w2] to [w3, oo] in the upper half-plane.

    Increases as w2 approaches w3 and equals 1 at (0, 1, 2).
    """
    return _modulus_from_ratio((t.w3 - t.w2) / (t.w3 - t.w1))


def quadrilateral_modulus(w1: float, w2: float, w3: float, w4: float) -> float:
    """Modulus of the curves joining [w1, w2] to [w3, w4] for finite w1 < w2 < w3 < w4."""
    ws = (w1, w2, w3, w4)
    if not all(math.isfinite(w) for w in ws) or not w1 < w2 < w3 < w4:
        raise DegenerateQuadruple(f"need finite w1 < w2 < w3 < w4, got {ws}")
    return _modulus_from_ratio(((w3 - w2) * (w4 - w1)) / ((w3 - w1) * (w4 - w2)))


def circle_modulus(q: CircleQuadruple) -> float:
    """Modulus of the curves in the unit disk joining arc (a, b) to arc (c, d)."""
    return quad_modulus(normalize_to_halfplane(q))


def conjugate_modulus(t: HalfPlaneTriple) -> float:
    """Modulus of the curves joining [w2, w3] to [oo, w1]; the reciprocal of quad_modulus."""
    return quad_modulus(conjugate_triple(t))


def asymptotic_defect(t: HalfPlaneTriple) -> float:
    """quad_modulus - L/pi - (2/pi) log 4, which vanishes as the modulus grows."""
    return (
        quad_modulus(t)
        - liouville_mass_halfplane(t).value / math.pi
        - ASYMPTOTIC_OFFSET
    )
