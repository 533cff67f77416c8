"""Graph domains under a boundary function, their quadruples and the vertical stretch."""

import math
from typing import List, Optional, Tuple

import numpy as np

from modlim.core.errors import (
    InfiniteArea,
    InvalidInterval,
    InvalidQuadruple,
    NonPositive,
    NotLSC,
)
from modlim.core.logging import get_logger
from modlim.models.domain import (
    BoundaryFunction,
    BoundaryQuadruple,
    GraphDomain,
    Interval,
    PrimeEnd,
    StripDomain,
    pchip,
)

logger = get_logger(__name__)

# relative slack for comparisons against stored breakpoints
_LSC_RTOL = 1e-12
_X_TOL = 1e-12


def evaluate(f: BoundaryFunction, x):
    """f(x), vectorized. Step functions return the stored value at a breakpoint."""
    return f(x)


def step_pieces(f: BoundaryFunction, interval: Interval) -> List[Tuple[float, float, float]]:
    """(lo, hi, value) for every piece of a step function clipped to the interval."""
    edges = [interval.lo, *f.breakpoints, interval.hi]
    pieces = []
    for lo, hi, v in zip(edges, edges[1:], f.values):
        lo, hi = max(lo, interval.lo), min(hi, interval.hi)
        if hi > lo:
            pieces.append((lo, hi, v))
    return pieces


def _check_function(f: BoundaryFunction, interval: Interval, positive: bool = True):
    if f.kind == "step":
        inside = [interval.lo < b < interval.hi for b in f.breakpoints]
        if not all(inside):
            raise InvalidInterval(
                f"step breakpoints {f.breakpoints} must lie inside "
                f"({interval.lo}, {interval.hi})"
            )
    else:
        nodes = f.breakpoints
        if nodes[0] > interval.lo + _X_TOL or nodes[-1] < interval.hi - _X_TOL:
            raise InvalidInterval(
                f"{f.kind} nodes [{nodes[0]}, {nodes[-1]}] do not cover "
                f"({interval.lo}, {interval.hi})"
            )

    if positive:
        stored = f.values + f.stored_breakpoint_values
        bad = [v for v in stored if v <= 0]
        if bad:
            raise NonPositive(f"boundary values must be > 0, got {bad[0]}")

    if f.kind == "step":
        for x, v, left, right in zip(
            f.breakpoints, f.stored_breakpoint_values, f.values, f.values[1:]
        ):
            if v > min(left, right) * (1 + _LSC_RTOL):
                raise NotLSC(x, v, left, right)


def area_under(f: BoundaryFunction, lo: float, hi: float) -> float:
    """Exact integral of f over [lo, hi] for all three kinds."""
    if f.kind == "step":
        return math.fsum(
            (b - a) * v for a, b, v in step_pieces(f, Interval(lo=lo, hi=hi))
        )
    if f.kind == "piecewise-linear":
        xs = np.unique(
            np.concatenate([[lo, hi], [b for b in f.breakpoints if lo < b < hi]])
        )
        ys = f(xs)
        return float(np.sum(np.diff(xs) * (ys[1:] + ys[:-1]) / 2.0))
    return float(pchip(f.breakpoints, f.values).integrate(lo, hi))


def build_graph_domain(spec: BoundaryFunction, interval: Interval) -> GraphDomain:
    """Validate a boundary function on an interval and cache the area of its hypograph."""
    _check_function(spec, interval)
    area = area_under(spec, interval.lo, interval.hi)
    if not math.isfinite(area):
        raise InfiniteArea(f"area of the graph domain is not finite ({area})")
    if area <= 0:
        raise NonPositive(f"graph domain has non-positive area {area}")
    logger.debug(f"Built {spec.kind} graph domain on {interval} with area {area}")
    return GraphDomain(interval=interval, base=spec, base_area=area)


def scale_vertical(d: GraphDomain, eps: float) -> GraphDomain:
    """The image of d under (x, y) -> (x, eps * y)."""
    if not eps > 0 or not math.isfinite(eps):
        raise NonPositive(f"stretch factor must be a positive real, got {eps}")
    return d.model_copy(update={"stretch": d.stretch * eps})


def minimum_on(f: BoundaryFunction, lo: float, hi: float) -> float:
    """Exact minimum of f over the closed interval [lo, hi]."""
    if hi < lo:
        raise InvalidInterval(f"empty range [{lo}, {hi}]")
    if f.kind == "step":
        edges = [-math.inf, *f.breakpoints, math.inf]
        candidates = [
            v
            for a, b, v in zip(edges, edges[1:], f.values)
            if a < hi and b > lo
        ]
        candidates += [
            v
            for b, v in zip(f.breakpoints, f.stored_breakpoint_values)
            if lo <= b <= hi
        ]
        return float(min(candidates))
    # PCHIP never leaves the range of the neighbouring samples
    xs = [lo, hi, *(b for b in f.breakpoints if lo < b < hi)]
    return float(np.min(f(np.asarray(xs))))


def _jump_at(f: BoundaryFunction, x: float) -> bool:
    return any(abs(b - x) <= _X_TOL for b in f.jumps())


def validate_quadruple(d: GraphDomain, q: BoundaryQuadruple) -> None:
    """Raise InvalidQuadruple unless q is a counterclockwise bottom/top quadruple of d."""
    for name in ("a", "b", "c", "d"):
        p: PrimeEnd = getattr(q, name)
        if not d.interval.contains(p.x, _X_TOL):
            raise InvalidQuadruple(f"prime end {name} at x={p.x} is outside {d.interval}")
        if p.side != "none":
            if p.edge == "bottom" or not _jump_at(d.base, p.x):
                raise InvalidQuadruple(
                    f"prime end {name} carries side '{p.side}' but x={p.x} is not "
                    "a jump of the top boundary"
                )
    if not q.a.x < q.b.x:
        raise InvalidQuadruple(f"bottom arc needs a.x < b.x, got ({q.a.x}, {q.b.x})")
    riser_only = (
        q.c.x == q.d.x and q.c.side == "right" and q.d.side == "left"
    )
    if not (q.d.x < q.c.x or riser_only):
        raise InvalidQuadruple(
            f"top arc runs from c to d counterclockwise and needs d.x < c.x, "
            f"got d.x={q.d.x}, c.x={q.c.x}"
        )


def overlap_interval(d: GraphDomain, q: BoundaryQuadruple) -> Optional[Interval]:
    """[a.x, b.x] intersected with [d.x, c.x]; None when it has zero length."""
    validate_quadruple(d, q)
    lo, hi = max(q.a.x, q.d.x), min(q.b.x, q.c.x)
    if hi <= lo:
        return None
    return Interval(lo=lo, hi=hi)


_SWAP = {"left": "right", "right": "left", "none": "none"}


def _mirror(f: BoundaryFunction, interval: Interval) -> BoundaryFunction:
    s = interval.lo + interval.hi
    return f.model_copy(
        update={
            "breakpoints": tuple(s - b for b in reversed(f.breakpoints)),
            "values": tuple(reversed(f.values)),
            "breakpoint_values": (
                None
                if f.breakpoint_values is None
                else tuple(reversed(f.breakpoint_values))
            ),
        }
    )


def reflect_domain(d: GraphDomain) -> GraphDomain:
    """Mirror image of d about the vertical line through the interval midpoint."""
    return d.model_copy(update={"base": _mirror(d.base, d.interval)})


def reflect_quadruple(d: GraphDomain, q: BoundaryQuadruple) -> BoundaryQuadruple:
    """The quadruple of reflect_domain(d) bounding the mirrored curve family."""
    s = d.interval.lo + d.interval.hi

    def mirror(p: PrimeEnd) -> PrimeEnd:
        return PrimeEnd(x=s - p.x, edge=p.edge, side=_SWAP[p.side])

    return BoundaryQuadruple(
        a=mirror(q.b), b=mirror(q.a), c=mirror(q.d), d=mirror(q.c)
    )


def build_strip_domain(
    f: BoundaryFunction, g: BoundaryFunction, interval: Interval
) -> StripDomain:
    """Validated region between a lower graph g and an upper graph f."""
    _check_function(f, interval, positive=False)
    _check_function(g, interval, positive=False)
    xs = np.unique(
        np.concatenate(
            [
                np.linspace(interval.lo, interval.hi, 1025),
                [b for b in f.breakpoints + g.breakpoints if interval.contains(b)],
            ]
        )
    )
    gap = f(xs) - g(xs)
    if np.min(gap) < 0:
        x_bad = float(xs[np.argmin(gap)])
        raise NonPositive(f"lower graph exceeds upper graph at x={x_bad}")
    return StripDomain(interval=interval, f=f, g=g)
