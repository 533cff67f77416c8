from .elliptic import agm, elliptic_k, grotzsch_mu
from .mobius import (
    conjugate_triple,
    cross_ratio,
    liouville_mass_circle,
    liouville_mass_halfplane,
    normalize_to_halfplane,
)
from .modulus import (
    ASYMPTOTIC_OFFSET,
    asymptotic_defect,
    circle_modulus,
    conjugate_modulus,
    quad_modulus,
    quadrilateral_modulus,
)

__all__ = [
    "agm",
    "elliptic_k",
    "grotzsch_mu",
    "conjugate_triple",
    "cross_ratio",
    "liouville_mass_circle",
    "liouville_mass_halfplane",
    "normalize_to_halfplane",
    "ASYMPTOTIC_OFFSET",
    "asymptotic_defect",
    "circle_modulus",
    "conjugate_modulus",
    "quad_modulus",
    "quadrilateral_modulus",
]
