from .beurling import beurling_pairing, check_beurling
from .modulus import (
    density_energy,
    extremal_density,
    line_integral,
    modulus_vertical,
    transverse_measure,
    vertical_family,
)
from .quadrature import integrate_cells, reciprocal_integral

__all__ = [
    "beurling_pairing",
    "check_beurling",
    "density_energy",
    "extremal_density",
    "line_integral",
    "modulus_vertical",
    "transverse_measure",
    "vertical_family",
    "integrate_cells",
    "reciprocal_integral",
]
