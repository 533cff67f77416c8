from typing import List, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict

from modlim.models.domain import BoundaryFunction, Interval


class VerticalFamily(BaseModel):
    """Vertical segments {x} x (0, f(x)) for x in a finite union of intervals E."""

    model_config = ConfigDict(frozen=True)

    segments: Tuple[Interval, ...]
    f: BoundaryFunction

    @property
    def is_empty(self) -> bool:
        return not self.segments

    def contains(self, x):
        xs = np.asarray(x, dtype=float)
        inside = np.zeros(xs.shape, dtype=bool)
        for seg in self.segments:
            inside |= (xs >= seg.lo) & (xs <= seg.hi)
        return inside

    def length(self, x):
        """|gamma(x)|, the segment length above x."""
        return self.f(x)


class ExtremalDensity(BaseModel):
    """rho_0 = 1/|gamma(x)| on the segments of the family, 0 elsewhere."""

    model_config = ConfigDict(frozen=True)

    family: VerticalFamily

    def value(self, x, y):
        xs = np.asarray(x, dtype=float)
        ys = np.asarray(y, dtype=float)
        heights = self.family.length(xs)
        on = self.family.contains(xs) & (ys > 0) & (ys < heights)
        out = np.where(on, 1.0 / heights, 0.0)
        return float(out) if np.ndim(out) == 0 else out


class BeurlingReport(BaseModel):
    """Outcome of the randomized extremality check."""

    admissibility_error: float
    sampled_verticals: int
    pairings: List[float]
    min_vertical_mean: float
    tolerance: float
    passed: int

    @property
    def probes(self) -> int:
        return len(self.pairings)

    @property
    def ok(self) -> bool:
        return self.passed == self.probes and self.admissibility_error <= self.tolerance
