"""Exact modulus of vertical families and its extremal density."""

from typing import Optional

import numpy as np

from modlim.core.errors import EmptyFamily, InvalidInterval
from modlim.core.logging import get_logger
from modlim.domain.graph import overlap_interval
from modlim.models.domain import BoundaryQuadruple, GraphDomain, Interval, StripDomain
from modlim.models.vertical import ExtremalDensity, VerticalFamily
from modlim.vertical.quadrature import integrate_cells, reciprocal_integral

logger = get_logger(__name__)

# inner Gauss-Legendre rule along each vertical
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(8)


def vertical_family(d: GraphDomain, q: BoundaryQuadruple) -> VerticalFamily:
    """The vertical segments of d joining the bottom arc (a, b) to the top arc (c, d)."""
    overlap = overlap_interval(d, q)
    segments = () if overlap is None else (overlap,)
    return VerticalFamily(segments=segments, f=d.f)


def modulus_vertical(
    v: VerticalFamily, tol: Optional[float] = None, max_evals: Optional[int] = None
) -> float:
    """Integral of dx / |gamma(x)| over E; 0 for the empty family."""
    if v.is_empty:
        return 0.0
    return sum(
        reciprocal_integral(v.f, seg.lo, seg.hi, tol=tol, max_evals=max_evals)
        for seg in v.segments
    )


def extremal_density(v: VerticalFamily) -> ExtremalDensity:
    if v.is_empty:
        raise EmptyFamily("the empty family has no extremal density")
    return ExtremalDensity(family=v)


def _vertical_nodes(height: float):
    """Gauss-Legendre nodes and weights on (0, height)."""
    return height * (_GL_NODES + 1.0) / 2.0, height * _GL_WEIGHTS / 2.0


def line_integral(rho: ExtremalDensity, x: float) -> float:
    """Integral of rho along the vertical segment above x."""
    ys, ws = _vertical_nodes(float(rho.family.length(x)))
    return float(np.dot(ws, rho.value(np.full_like(ys, x), ys)))


def density_energy(rho: ExtremalDensity, tol: Optional[float] = None) -> float:
    """Double integral of rho^2 over the domain."""

    def column(x: float) -> float:
        ys, ws = _vertical_nodes(float(rho.family.length(x)))
        return float(np.dot(ws, rho.value(np.full_like(ys, x), ys) ** 2))

    f = rho.family.f
    total = 0.0
    for seg in rho.family.segments:
        cuts = [seg.lo, *(b for b in f.breakpoints if seg.lo < b < seg.hi), seg.hi]
        total += integrate_cells(column, cuts, tol=tol)
    return total


def transverse_measure(
    s: StripDomain, interval: Interval, tol: Optional[float] = None
) -> float:
    """Transverse density of the vertical foliation, the integral of dx / |f - g| over I."""
    if not (
        s.interval.contains(interval.lo) and s.interval.contains(interval.hi)
    ):
        raise InvalidInterval(f"{interval} is not contained in {s.interval}")
    value = reciprocal_integral(s.f, interval.lo, interval.hi, lower=s.g, tol=tol)
    logger.debug(f"Transverse measure over {interval}: {value}")
    return value
