"""Richardson extrapolation of eps-sequences to eps = 0."""

import math
from typing import Optional, Sequence

import numpy as np

from modlim.core.errors import ExtrapolationError


def richardson_extrapolate(eps: Sequence[float], values: Sequence[float]) -> float:
    """
    Value at eps = 0 of the quadratic through the last three (eps, value) rows.

    Exact on L + C * eps, and on L + C1 * eps + C2 * eps^2.
    """
    if len(eps) != len(values):
        raise ExtrapolationError(
            f"got {len(eps)} eps values but {len(values)} measurements"
        )
    if len(eps) < 3:
        raise ExtrapolationError(
            f"extrapolation needs at least 3 rows, got {len(eps)}"
        )
    e = np.asarray(eps[-3:], dtype=float)
    v = np.asarray(values[-3:], dtype=float)
    if len(set(e.tolist())) < 3:
        raise ExtrapolationError(f"eps values must be distinct, got {e.tolist()}")
    coeffs = np.polyfit(e, v, 2)
    return float(coeffs[-1])


def observed_rate(eps: Sequence[float], values: Sequence[float]) -> Optional[float]:
    """
    Convergence order p from the last three rows, assuming a constant eps ratio.

    None when successive differences vanish or change sign.
    """
    if len(eps) < 3:
        return None
    e1, e2, _ = eps[-3:]
    v1, v2, v3 = values[-3:]
    d1, d2 = v1 - v2, v2 - v3
    if d1 == 0 or d2 == 0 or (d1 > 0) != (d2 > 0):
        return None
    return math.log(d1 / d2) / math.log(e1 / e2)


def monotone_tail(values: Sequence[float], slack: float = 0.0) -> bool:
    """True when the last three values move in one direction (up to slack)."""
    tail = list(values[-3:])
    steps = [b - a for a, b in zip(tail, tail[1:])]
    return all(s >= -slack for s in steps) or all(s <= slack for s in steps)
