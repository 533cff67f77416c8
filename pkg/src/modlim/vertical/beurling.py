"""
Randomized extremality check for rho_0.

A density is extremal for the vertical family when it is admissible with unit
length on every segment and every test function h with nonnegative integrals
along the segments pairs nonnegatively with it. Test functions are piecewise
polynomials in (x, t), t = y / |gamma(x)|, shifted in t so their vertical
means equal a random nonnegative polynomial in x.
"""

from typing import Callable, List, Optional

import numpy as np

from modlim.core.config import settings
from modlim.core.logging import get_logger
from modlim.models.vertical import BeurlingReport, ExtremalDensity, VerticalFamily
from modlim.vertical.modulus import line_integral

logger = get_logger(__name__)

TestFunction = Callable[[np.ndarray, np.ndarray], np.ndarray]

_DEGREE = 3
# exact for the polynomial degrees used by the probes
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(2 * _DEGREE + 2)


def _gauss(lo: float, hi: float):
    return (
        lo + (hi - lo) * (_GL_NODES + 1.0) / 2.0,
        (hi - lo) * _GL_WEIGHTS / 2.0,
    )


def _pieces(v: VerticalFamily):
    """Integration cells of E: the segments split at breakpoints of f."""
    for seg in v.segments:
        cuts = [seg.lo, *(b for b in v.f.breakpoints if seg.lo < b < seg.hi), seg.hi]
        yield from zip(cuts, cuts[1:])


def beurling_pairing(rho: ExtremalDensity, h: TestFunction) -> float:
    """Double integral of h * rho over the domain, by tensor Gauss-Legendre."""
    total = 0.0
    for lo, hi in _pieces(rho.family):
        xs, wx = _gauss(lo, hi)
        for x, w in zip(xs, wx):
            height = float(rho.family.length(x))
            ys, wy = _gauss(0.0, height)
            xx = np.full_like(ys, x)
            total += w * float(np.dot(wy, h(xx, ys) * rho.value(xx, ys)))
    return total


def _random_probe(rng: np.random.Generator, v: VerticalFamily) -> TestFunction:
    """A piecewise polynomial test function with nonnegative vertical means."""
    lo = min(s.lo for s in v.segments)
    hi = max(s.hi for s in v.segments)
    cuts = np.sort(rng.uniform(lo, hi, size=rng.integers(0, 4)))
    n_pieces = len(cuts) + 1
    coeffs = rng.normal(size=(n_pieces, _DEGREE + 1, _DEGREE + 1))
    mean_roots = rng.normal(size=(n_pieces, 2))
    scale = max(hi - lo, 1e-300)

    def h(x: np.ndarray, y: np.ndarray) -> np.ndarray:
        piece = np.searchsorted(cuts, x, side="right")
        u = (x - lo) / scale
        t = y / v.length(x)
        powers_u = np.stack([u**j for j in range(_DEGREE + 1)], axis=-1)
        powers_t = np.stack([t**k for k in range(_DEGREE + 1)], axis=-1)
        c = coeffs[piece]
        raw = np.einsum("...j,...jk,...k->...", powers_u, c, powers_t)
        # mean over t in [0, 1] of the raw polynomial
        raw_mean = np.einsum(
            "...j,...jk,k->...", powers_u, c, 1.0 / np.arange(1, _DEGREE + 2)
        )
        r = mean_roots[piece]
        target = (r[..., 0] + r[..., 1] * u) ** 2
        return raw - raw_mean + target

    return h


def _vertical_mean(h: TestFunction, v: VerticalFamily, x: float) -> float:
    ys, wy = _gauss(0.0, float(v.length(x)))
    return float(np.dot(wy, h(np.full_like(ys, x), ys)))


def check_beurling(
    rho: ExtremalDensity,
    v: VerticalFamily,
    probes: Optional[int] = None,
    seed: Optional[int] = None,
    tolerance: float = 1e-10,
    extra: Optional[List[TestFunction]] = None,
    samples: int = 257,
) -> BeurlingReport:
    """
    Verify admissibility of rho along sampled verticals and the nonnegative
    pairing of rho with random (and any extra) admissible test functions.
    """
    probes = settings.beurling_probes if probes is None else probes
    rng = np.random.default_rng(settings.seed if seed is None else seed)

    xs = np.concatenate(
        [np.linspace(s.lo, s.hi, samples)[1:-1] for s in v.segments] or [np.empty(0)]
    )
    admissibility = max(
        (abs(line_integral(rho, float(x)) - 1.0) for x in xs), default=0.0
    )

    tests: List[TestFunction] = list(extra or [])
    if not v.is_empty:
        tests += [_random_probe(rng, v) for _ in range(probes)]

    pairings, min_mean = [], np.inf
    for h in tests:
        means = [_vertical_mean(h, v, float(x)) for x in xs[:: max(1, len(xs) // 32)]]
        min_mean = min(min_mean, min(means, default=np.inf))
        pairings.append(beurling_pairing(rho, h))

    passed = sum(p >= -tolerance for p in pairings)
    report = BeurlingReport(
        admissibility_error=admissibility,
        sampled_verticals=len(xs),
        pairings=pairings,
        min_vertical_mean=float(min_mean),
        tolerance=tolerance,
        passed=passed,
    )
    logger.info(
        f"Beurling check: {passed}/{len(pairings)} pairings >= -{tolerance:g}, "
        f"admissibility error {admissibility:.3g}"
    )
    return report
