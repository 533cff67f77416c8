import math
from functools import lru_cache
from typing import Literal, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator
from scipy.interpolate import PchipInterpolator

from modlim.core.errors import InfiniteArea, InvalidInterval, InvalidQuadruple

Kind = Literal["step", "piecewise-linear", "sampled-continuous"]
Edge = Literal["bottom", "top"]
Side = Literal["left", "right", "none"]


@lru_cache(maxsize=64)
def pchip(nodes: Tuple[float, ...], values: Tuple[float, ...]) -> PchipInterpolator:
    return PchipInterpolator(np.asarray(nodes), np.asarray(values), extrapolate=True)


class Interval(BaseModel):
    """A bounded open interval (lo, hi) of x-coordinates."""

    model_config = ConfigDict(frozen=True)

    lo: float
    hi: float

    @model_validator(mode="after")
    def _check(self) -> "Interval":
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise InvalidInterval(
                f"interval ({self.lo}, {self.hi}) must be bounded; "
                "unbounded graph domains are not supported"
            )
        if not self.lo < self.hi:
            raise InvalidInterval(f"interval needs lo < hi, got ({self.lo}, {self.hi})")
        return self

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def contains(self, x: float, tol: float = 0.0) -> bool:
        """Membership in the closed interval."""
        return self.lo - tol <= x <= self.hi + tol


class BoundaryFunction(BaseModel):
    """
    Upper boundary of a graph domain.

    step: `breakpoints` are the interior jump points, `values` one per piece and
    `breakpoint_values` (optional) the value stored at each breakpoint; the
    default is the minimum of the two neighbouring pieces.
    piecewise-linear / sampled-continuous: `breakpoints` are sample nodes that
    span the whole interval and `values` one per node.
    """

    model_config = ConfigDict(frozen=True)

    kind: Kind
    breakpoints: Tuple[float, ...]
    values: Tuple[float, ...]
    breakpoint_values: Optional[Tuple[float, ...]] = None

    @model_validator(mode="after")
    def _check_shape(self) -> "BoundaryFunction":
        bps = self.breakpoints
        if any(b2 <= b1 for b1, b2 in zip(bps, bps[1:])):
            raise ValueError("breakpoints must be strictly ascending")
        if self.kind == "step":
            if len(self.values) != len(bps) + 1:
                raise ValueError(
                    f"step function with {len(bps)} breakpoints needs "
                    f"{len(bps) + 1} piece values, got {len(self.values)}"
                )
            if self.breakpoint_values is not None and len(
                self.breakpoint_values
            ) != len(bps):
                raise ValueError("breakpoint_values needs one value per breakpoint")
        else:
            if len(bps) < 2:
                raise ValueError(f"{self.kind} function needs at least two nodes")
            if len(self.values) != len(bps):
                raise ValueError(f"{self.kind} function needs one value per node")
            if self.breakpoint_values is not None:
                raise ValueError("breakpoint_values only applies to step functions")
        stored = self.values + (self.breakpoint_values or ())
        if not all(math.isfinite(v) for v in stored + bps):
            raise InfiniteArea(
                "boundary values and breakpoints must be finite; "
                "a finite representation cannot carry infinite heights"
            )
        return self

    @property
    def stored_breakpoint_values(self) -> Tuple[float, ...]:
        if self.kind != "step":
            return ()
        if self.breakpoint_values is not None:
            return self.breakpoint_values
        return tuple(min(l, r) for l, r in zip(self.values, self.values[1:]))

    def __call__(self, x):
        """Vectorized evaluation; scalars in, float out."""
        xs = np.asarray(x, dtype=float)
        if self.kind == "step":
            bps = np.asarray(self.breakpoints)
            vals = np.asarray(self.values)
            out = vals[np.searchsorted(bps, xs, side="right")]
            if bps.size:
                at = np.searchsorted(bps, xs, side="left")
                clipped = np.minimum(at, bps.size - 1)
                hit = (at < bps.size) & (bps[clipped] == xs)
                out = np.where(
                    hit, np.asarray(self.stored_breakpoint_values)[clipped], out
                )
        elif self.kind == "piecewise-linear":
            out = np.interp(xs, self.breakpoints, self.values)
        else:
            out = pchip(self.breakpoints, self.values)(xs)
        return float(out) if np.ndim(out) == 0 else out

    def scaled(self, eps: float) -> "BoundaryFunction":
        return self.model_copy(
            update={
                "values": tuple(v * eps for v in self.values),
                "breakpoint_values": (
                    None
                    if self.breakpoint_values is None
                    else tuple(v * eps for v in self.breakpoint_values)
                ),
            }
        )

    def jumps(self) -> Tuple[float, ...]:
        """Breakpoints where a step function actually jumps."""
        if self.kind != "step":
            return ()
        return tuple(
            b
            for b, l, r in zip(self.breakpoints, self.values, self.values[1:])
            if l != r
        )


class GraphDomain(BaseModel):
    """
    The region {(x, y): lo < x < hi, 0 < y < stretch * base(x)}.

    The vertical stretch is kept apart from the profile so that composing
    stretches multiplies a single factor.
    """

    model_config = ConfigDict(frozen=True)

    interval: Interval
    base: BoundaryFunction
    stretch: float = 1.0
    base_area: float

    @property
    def f(self) -> BoundaryFunction:
        return self.base if self.stretch == 1.0 else self.base.scaled(self.stretch)

    @property
    def area(self) -> float:
        return self.base_area * self.stretch

    def height(self, x):
        return self.f(x)


class StripDomain(BaseModel):
    """The region between a lower graph g and an upper graph f."""

    model_config = ConfigDict(frozen=True)

    interval: Interval
    f: BoundaryFunction
    g: BoundaryFunction


class PrimeEnd(BaseModel):
    """A boundary prime end reduced to its x-coordinate, edge and jump side."""

    model_config = ConfigDict(frozen=True)

    x: float
    edge: Edge
    side: Side = "none"


class BoundaryQuadruple(BaseModel):
    """Prime ends (a, b) on the bottom edge and (c, d) on the top edge, ccw."""

    model_config = ConfigDict(frozen=True)

    a: PrimeEnd
    b: PrimeEnd
    c: PrimeEnd
    d: PrimeEnd

    @model_validator(mode="after")
    def _check_edges(self) -> "BoundaryQuadruple":
        if self.a.edge != "bottom" or self.b.edge != "bottom":
            raise InvalidQuadruple("a and b must lie on the bottom edge")
        if self.c.edge != "top" or self.d.edge != "top":
            raise InvalidQuadruple("c and d must lie on the top edge")
        return self

    @classmethod
    def full(cls, interval: Interval) -> "BoundaryQuadruple":
        """The whole bottom edge against the whole top edge."""
        return cls(
            a=PrimeEnd(x=interval.lo, edge="bottom"),
            b=PrimeEnd(x=interval.hi, edge="bottom"),
            c=PrimeEnd(x=interval.hi, edge="top"),
            d=PrimeEnd(x=interval.lo, edge="top"),
        )

    @classmethod
    def from_arcs(
        cls, bottom: Tuple[float, float], top: Tuple[float, float]
    ) -> "BoundaryQuadruple":
        """Bottom arc (a.x, b.x) and top arc x-projection (d.x, c.x)."""
        return cls(
            a=PrimeEnd(x=bottom[0], edge="bottom"),
            b=PrimeEnd(x=bottom[1], edge="bottom"),
            c=PrimeEnd(x=top[1], edge="top"),
            d=PrimeEnd(x=top[0], edge="top"),
        )


class BoundaryArc(BaseModel):
    """A closed x-range of one boundary edge, used by the general rasterizer."""

    model_config = ConfigDict(frozen=True)

    edge: Edge
    lo: float
    hi: float
    # jump risers strictly inside a top arc always belong to it; a riser at an
    # endpoint belongs to it only when flagged
    riser_at_lo: bool = False
    riser_at_hi: bool = False
