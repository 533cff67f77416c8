"""Complete elliptic integrals and the Grötzsch ring function via the AGM."""

import math
from typing import Optional

from modlim.core.config import settings
from modlim.core.errors import OutOfRange

_AGM_MAX_STEPS = 64


def agm(a: float, b: float) -> float:
    """Arithmetic-geometric mean of two positive numbers."""
    for _ in range(_AGM_MAX_STEPS):
        if abs(a - b) <= 4e-16 * a:
            break
        a, b = (a + b) / 2.0, math.sqrt(a * b)
    return (a + b) / 2.0


def complement(k: float) -> float:
    """sqrt(1 - k^2) without cancellation near k = 1."""
    return math.sqrt((1.0 - k) * (1.0 + k))


def elliptic_k(k: float) -> float:
    """Complete elliptic integral of the first kind K(k), k the modulus (not m = k^2)."""
    if not 0.0 <= k < 1.0:
        raise OutOfRange(f"elliptic modulus k must lie in [0, 1), got {k}")
    return math.pi / (2.0 * agm(1.0, complement(k)))


def grotzsch_mu(r: float, threshold: Optional[float] = None) -> float:
    """
    Modulus function of the Grötzsch ring, mu(r) = (pi/2) K(r') / K(r).

    Pinned by mu(1/sqrt(2)) = pi/2. Below `threshold` the asymptotic branch
    log(4/r) is used; the two branches agree to machine precision there.
    """
    if not 0.0 < r < 1.0:
        raise OutOfRange(f"mu(r) needs 0 < r < 1, got {r}")
    threshold = settings.mu_asymptotic_threshold if threshold is None else threshold
    if r < threshold:
        return math.log(4.0 / r)
    return (math.pi / 2.0) * agm(1.0, complement(r)) / agm(1.0, r)
