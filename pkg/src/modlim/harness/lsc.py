"""
Continuous approximation of a lower-semicontinuous step boundary from below.

f_n(x) = inf_y f(y) + n |x - y| is a lower envelope of cones, one per piece and
one per stored breakpoint value, so it is piecewise linear and can be computed
exactly from its kinks and the pairwise crossings of the cones.
"""

import math
from typing import List, Optional, Sequence, Tuple

import numpy as np

from modlim.core.errors import OutOfRange, UnsupportedKind
from modlim.core.logging import get_logger
from modlim.domain.graph import minimum_on, step_pieces
from modlim.models.domain import BoundaryFunction, Interval
from modlim.models.harness import LscReport

logger = get_logger(__name__)

_TOL = 1e-12


def _cones(f: BoundaryFunction, interval: Interval) -> np.ndarray:
    """Rows (lo, hi, value): flat on [lo, hi], slope n on either side."""
    rows = list(step_pieces(f, interval))
    rows += [
        (b, b, v)
        for b, v in zip(f.breakpoints, f.stored_breakpoint_values)
        if interval.lo < b < interval.hi
    ]
    return np.asarray(rows, dtype=float)


def _envelope(cones: np.ndarray, n: float, x: np.ndarray) -> np.ndarray:
    lo, hi, v = cones[:, 0:1], cones[:, 1:2], cones[:, 2:3]
    dist = np.maximum(lo - x, 0.0) + np.maximum(x - hi, 0.0)
    return np.min(v + n * dist, axis=0)


def _candidates(cones: np.ndarray, n: float, interval: Interval) -> np.ndarray:
    lo, hi, v = cones[:, 0], cones[:, 1], cones[:, 2]
    dv = v[None, :] - v[:, None]  # dv[j, k] = v_k - v_j
    xs = np.concatenate(
        [
            [interval.lo, interval.hi],
            lo,
            hi,
            (lo[:, None] - dv / n).ravel(),
            (hi[:, None] + dv / n).ravel(),
            ((-dv + n * (lo[:, None] + hi[None, :])) / (2 * n)).ravel(),
        ]
    )
    xs = xs[(xs >= interval.lo) & (xs <= interval.hi)]
    return np.unique(xs)


def _insert_crossings(
    xs: np.ndarray, a: np.ndarray, b: np.ndarray
) -> Tuple[np.ndarray, np.ndarray]:
    """Nodes of max(a, b) for two piecewise-linear functions sampled on xs."""
    diff = a - b
    out_x, out_y = [xs[0]], [max(a[0], b[0])]
    for i in range(1, len(xs)):
        d0, d1 = diff[i - 1], diff[i]
        if d0 * d1 < 0:
            t = d0 / (d0 - d1)
            out_x.append(xs[i - 1] + t * (xs[i] - xs[i - 1]))
            out_y.append(a[i - 1] + t * (a[i] - a[i - 1]))
        out_x.append(xs[i])
        out_y.append(max(a[i], b[i]))
    return np.asarray(out_x), np.asarray(out_y)


def _floor(
    f: BoundaryFunction, cones: np.ndarray, band: Interval
) -> Optional[Tuple[float, float]]:
    """
    (c, N) for the floor cone c - N dist(x, band), or None when f >= c everywhere.

    N = (c - min f) / delta, delta the distance from the band to the nearest
    piece below c; lower semicontinuity keeps delta positive.
    """
    c = minimum_on(f, band.lo, band.hi)
    low = cones[cones[:, 2] < c]
    if low.size == 0:
        return None
    dist = np.maximum(band.lo - low[:, 1], 0.0) + np.maximum(low[:, 0] - band.hi, 0.0)
    delta = float(np.min(dist))
    if delta <= 0:
        raise UnsupportedKind(
            f"a piece below the floor {c} touches [{band.lo}, {band.hi}]"
        )
    return c, (c - float(np.min(low[:, 2]))) / delta


def lsc_approximant(
    f: BoundaryFunction,
    n: float,
    interval: Interval,
    band: Optional[Interval] = None,
) -> BoundaryFunction:
    """
    The piecewise-linear f_n, kept at or above min f over the band near the band.

    The floor cone is independent of n, so f_n stays nondecreasing in n and
    below f.
    """
    if f.kind != "step":
        raise UnsupportedKind(
            f"lsc approximation takes a step function, got {f.kind}"
        )
    if not n > 0:
        raise OutOfRange(f"slope n must be positive, got {n}")
    cones = _cones(f, interval)
    xs = _candidates(cones, n, interval)
    ys = _envelope(cones, n, xs[None, :])

    floor = _floor(f, cones, band) if band is not None else None
    if floor is not None:
        c, slope = floor
        xs = np.unique(np.concatenate([xs, [band.lo, band.hi]]))
        ys = _envelope(cones, n, xs[None, :])
        dist = np.maximum(band.lo - xs, 0.0) + np.maximum(xs - band.hi, 0.0)
        xs, ys = _insert_crossings(xs, ys, c - slope * dist)

    keep = np.concatenate([[True], np.diff(xs) > _TOL * interval.width])
    return BoundaryFunction(
        kind="piecewise-linear",
        breakpoints=tuple(float(x) for x in xs[keep]),
        values=tuple(float(y) for y in ys[keep]),
    )


def reciprocal_integral_pl(f: BoundaryFunction, lo: float, hi: float) -> float:
    """Closed-form integral of 1/f for a positive piecewise-linear f."""
    xs = np.unique(
        np.concatenate([[lo, hi], [b for b in f.breakpoints if lo < b < hi]])
    )
    ys = f(xs)
    total = []
    for w, y0, y1 in zip(np.diff(xs), ys[:-1], ys[1:]):
        if abs(y1 - y0) <= _TOL * max(y0, y1):
            total.append(w / y0)
        else:
            total.append(w * (math.log(y1) - math.log(y0)) / (y1 - y0))
    return math.fsum(total)


def lsc_approximation(
    f: BoundaryFunction,
    n_list: Sequence[int],
    interval: Interval,
    overlap: Optional[Interval] = None,
    samples: int = 1000,
) -> Tuple[List[BoundaryFunction], LscReport]:
    """
    f_n for every n in n_list, with a report on monotonicity and the integrals.

    Integrals run over the overlap interval (the whole interval by default),
    where the vertical family lives.
    """
    if f.kind != "step":
        raise UnsupportedKind(
            f"lsc approximation takes a step function, got {f.kind}"
        )
    if not n_list or any(b <= a for a, b in zip(n_list, n_list[1:])):
        raise OutOfRange(f"n_list must be nonempty and increasing, got {list(n_list)}")
    band = overlap or interval
    fns = [lsc_approximant(f, n, interval, band) for n in n_list]

    target = math.fsum(
        (b - a) / v for a, b, v in step_pieces(f, band)
    )
    integrals = [reciprocal_integral_pl(fn, band.lo, band.hi) for fn in fns]
    defects = [i - target for i in integrals]

    xs = np.linspace(interval.lo, interval.hi, samples)
    exact = f(xs)
    values = [fn(xs) for fn in fns]
    below = all(bool(np.all(v <= exact + _TOL * np.abs(exact))) for v in values)
    monotone = all(
        bool(np.all(a <= b + _TOL * np.abs(b))) for a, b in zip(values, values[1:])
    )
    mags = [abs(d) for d in defects]
    decreasing = all(b < a for a, b in zip(mags, mags[1:]))
    for n, d in zip(n_list, defects):
        logger.info(f"lsc n={n}: defect {d:.6g}")
    if not (below and monotone):
        logger.warning("lsc approximants are not monotone below f on the sample grid")

    report = LscReport(
        n_list=list(n_list),
        integrals=integrals,
        target=target,
        defects=defects,
        floor=minimum_on(f, band.lo, band.hi),
        samples=samples,
        monotone_in_n=monotone,
        below_f=below,
        defects_decreasing=decreasing,
    )
    return fns, report
