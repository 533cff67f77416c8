from .io import write_certificate, write_density_csv
from .paths import FullOracle, PathOracle, WindowedOracle, make_oracle
from .qp import PathProgram
from .raster import rasterize, rasterize_arcs
from .solver import solve_modulus, solve_modulus_restricted

__all__ = [
    "write_certificate",
    "write_density_csv",
    "FullOracle",
    "PathOracle",
    "WindowedOracle",
    "make_oracle",
    "PathProgram",
    "rasterize",
    "rasterize_arcs",
    "solve_modulus",
    "solve_modulus_restricted",
]
