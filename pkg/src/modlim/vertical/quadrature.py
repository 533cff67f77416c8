"""
Adaptive Simpson quadrature over breakpoint cells.

Integrands here are smooth inside each cell between consecutive breakpoints, so
the cells are integrated independently and the absolute tolerance is shared
between them in proportion to their width.
"""

import math
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from modlim.core.config import settings
from modlim.core.errors import DegenerateStrip, QuadratureFailure
from modlim.core.logging import get_logger
from modlim.models.domain import BoundaryFunction

logger = get_logger(__name__)

_MAX_DEPTH = 50


def _simpson(fa: float, fm: float, fb: float, h: float) -> float:
    return h / 3.0 * (fa + 4.0 * fm + fb)


class _Budget:
    def __init__(self, max_evals: int):
        self.max_evals = max_evals
        self.evals = 0

    def spend(self, n: int) -> None:
        self.evals += n
        if self.evals > self.max_evals:
            raise QuadratureFailure(
                f"evaluation budget of {self.max_evals} exhausted before the "
                "tolerance was met"
            )


def _adaptive_cell(
    g: Callable[[float], float], a: float, b: float, tol: float, budget: _Budget
) -> Tuple[float, float]:
    fa, fm, fb = g(a), g((a + b) / 2.0), g(b)
    budget.spend(3)
    total, error = 0.0, 0.0
    stack = [(a, b, fa, fm, fb, _simpson(fa, fm, fb, (b - a) / 2.0), tol, 0)]
    while stack:
        a, b, fa, fm, fb, whole, tol, depth = stack.pop()
        m = (a + b) / 2.0
        flm, frm = g((a + m) / 2.0), g((m + b) / 2.0)
        budget.spend(2)
        left = _simpson(fa, flm, fm, (m - a) / 2.0)
        right = _simpson(fm, frm, fb, (b - m) / 2.0)
        estimate = (left + right - whole) / 15.0
        if abs(estimate) < tol:
            # Richardson correction
            total += left + right + estimate
            error += abs(estimate)
        elif depth >= _MAX_DEPTH:
            raise QuadratureFailure(
                f"no convergence on [{a}, {b}] at depth {depth} "
                f"(error estimate {abs(estimate):.3g})"
            )
        else:
            stack.append((a, m, fa, flm, fm, left, tol / 2.0, depth + 1))
            stack.append((m, b, fm, frm, fb, right, tol / 2.0, depth + 1))
    return total, error


def integrate_cells(
    g: Callable[[float], float],
    cuts: Sequence[float],
    tol: Optional[float] = None,
    max_evals: Optional[int] = None,
) -> float:
    """Integrate g over [cuts[0], cuts[-1]], cell by cell."""
    tol = settings.quad_tol if tol is None else tol
    budget = _Budget(settings.quad_max_evals if max_evals is None else max_evals)
    width = cuts[-1] - cuts[0]
    if width <= 0:
        return 0.0
    total, error = 0.0, 0.0
    for a, b in zip(cuts, cuts[1:]):
        if b <= a:
            continue
        # values at a cell end belong to the neighbouring cell
        nudge = (b - a) * 1e-12

        def inner(x: float, a=a, b=b, nudge=nudge) -> float:
            return g(min(max(x, a + nudge), b - nudge))

        value, err = _adaptive_cell(inner, a, b, tol * (b - a) / width, budget)
        total += value
        error += err
    logger.debug(
        f"Integrated over {len(cuts) - 1} cells with {budget.evals} evaluations "
        f"(error estimate {error:.3g})"
    )
    return total


def _cuts(lo: float, hi: float, *functions: Optional[BoundaryFunction]) -> List[float]:
    inner = {
        b
        for f in functions
        if f is not None
        for b in f.breakpoints
        if lo < b < hi
    }
    return [lo, *sorted(inner), hi]


def reciprocal_integral(
    f: BoundaryFunction,
    lo: float,
    hi: float,
    lower: Optional[BoundaryFunction] = None,
    tol: Optional[float] = None,
    max_evals: Optional[int] = None,
) -> float:
    """
    Integral of dx / |f(x) - lower(x)| over [lo, hi] (lower defaults to 0).

    Step kinds are summed exactly; otherwise adaptive Simpson runs on every cell
    between breakpoints. Raises DegenerateStrip when the gap vanishes on a cell.
    """
    if hi <= lo:
        return 0.0
    cuts = _cuts(lo, hi, f, lower)

    def gap(x):
        y = f(x)
        return y - lower(x) if lower is not None else y

    mids = [(a + b) / 2.0 for a, b in zip(cuts, cuts[1:])]
    if f.kind == "step" and (lower is None or lower.kind == "step"):
        gaps = np.abs(gap(np.asarray(mids)))
        if np.any(gaps == 0):
            x_bad = mids[int(np.argmin(gaps))]
            raise DegenerateStrip(f"gap vanishes on the piece containing x={x_bad}")
        return math.fsum((b - a) / g for a, b, g in zip(cuts, cuts[1:], gaps))

    for a, b in zip(cuts, cuts[1:]):
        probe = np.abs(gap(np.linspace(a, b, 7)[1:-1]))
        if np.all(probe == 0):
            raise DegenerateStrip(f"gap vanishes on [{a}, {b}]")

    def integrand(x: float) -> float:
        g = abs(gap(x))
        return 1.0 / g if g > 0 else math.inf

    return integrate_cells(integrand, cuts, tol=tol, max_evals=max_evals)
