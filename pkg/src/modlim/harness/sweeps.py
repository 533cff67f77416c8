"""
The eps -> 0 and eta -> 0 experiments.

Rows are independent solves; they run on a thread pool and are assembled in
input order.
"""

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Literal, Optional, Sequence, TypeVar

import numpy as np
from tqdm import tqdm

from modlim.core.config import settings
from modlim.core.errors import (
    Disconnected,
    ExtrapolationError,
    InfeasibleEta,
    IterationLimit,
)
from modlim.core.logging import get_logger
from modlim.discrete.raster import rasterize
from modlim.discrete.solver import solve_modulus, solve_modulus_restricted
from modlim.domain.graph import minimum_on, scale_vertical, validate_quadruple
from modlim.harness.extrapolation import (
    monotone_tail,
    observed_rate,
    richardson_extrapolate,
)
from modlim.models.discrete import ModulusEstimate, SolveOptions
from modlim.models.domain import BoundaryQuadruple, GraphDomain
from modlim.models.harness import (
    EtaReport,
    EtaRow,
    HSchedule,
    SandwichVerdict,
    SweepReport,
    SweepRow,
    WideBoundRow,
)
from modlim.vertical.modulus import modulus_vertical, vertical_family

logger = get_logger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def _run_rows(
    fn: Callable[[T], R], items: Sequence[T], workers: Optional[int], label: str
) -> List[R]:
    workers = settings.sweep_workers if workers is None else workers
    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        return list(
            tqdm(pool.map(fn, items), total=len(items), desc=label, leave=False)
        )


def _solve_or_partial(solve: Callable[[], ModulusEstimate], label: str):
    """Solve a row; an empty family counts as modulus 0, an iteration limit as partial."""
    try:
        return solve()
    except Disconnected:
        logger.info(f"{label}: no connecting path, modulus 0")
        return None
    except IterationLimit as e:
        if e.estimate is None:
            raise
        logger.warning(f"{label}: iteration limit, keeping best estimate")
        return e.estimate


def _check_decreasing(values: Sequence[float], name: str) -> None:
    if any(b >= a for a, b in zip(values, values[1:])):
        raise ExtrapolationError(f"{name} must be strictly decreasing, got {list(values)}")


def epsilon_sweep(
    d: GraphDomain,
    q: BoundaryQuadruple,
    eps_list: Sequence[float],
    h_schedule: Optional[HSchedule] = None,
    opts: Optional[SolveOptions] = None,
    allowance: Optional[float] = None,
    workers: Optional[int] = None,
) -> SweepReport:
    """eps * mod of the stretched families, extrapolated to eps = 0 and compared to mod(Gamma_v)."""
    if len(eps_list) < 3:
        raise ExtrapolationError(
            f"extrapolation needs at least 3 eps values, got {len(eps_list)}"
        )
    _check_decreasing(eps_list, "eps_list")
    validate_quadruple(d, q)
    schedule = h_schedule or HSchedule()
    opts = opts or SolveOptions()
    allowance = settings.discretization_allowance if allowance is None else allowance
    min_f = minimum_on(d.f, d.interval.lo, d.interval.hi)
    target = modulus_vertical(vertical_family(d, q))
    # schedule problems surface before any solve starts
    hs = [schedule.h_for(eps, eps * min_f) for eps in eps_list]

    def row(args) -> SweepRow:
        eps, h = args
        label = f"eps={eps:g}"
        g = rasterize(scale_vertical(d, eps), h, q)
        est = _solve_or_partial(lambda: solve_modulus(g, opts), label)
        raw = 0.0 if est is None else est.value
        out = SweepRow(
            eps=eps,
            h=h,
            raw_modulus=raw,
            eps_times_modulus=eps * raw,
            lower_bound=0.0 if est is None else est.lower_bound,
            gap=0.0 if est is None else est.gap,
            allowance=allowance * target,
            iterations=0 if est is None else est.iterations,
            converged=True if est is None else est.converged,
        )
        logger.info(
            f"{label} h={h:.4g}: eps*mod={out.eps_times_modulus:.12g} "
            f"(gap {out.gap:.3g}, {out.iterations} iterations)"
        )
        return out

    rows = _run_rows(row, list(zip(eps_list, hs)), workers, "eps sweep")
    scaled = [r.eps_times_modulus for r in rows]
    limit = richardson_extrapolate(list(eps_list), scaled)
    error = abs(limit - target) / target if target > 0 else abs(limit)
    tail_ok = monotone_tail(scaled, slack=max(r.eps * r.gap for r in rows[-3:]))
    if not tail_ok:
        logger.warning(f"eps sweep tail is not monotone: {scaled[-3:]}")
    logger.info(
        f"eps sweep: limit {limit:.12g}, target {target:.12g}, "
        f"relative error {error:.3g}"
    )
    return SweepReport(
        rows=rows,
        extrapolated_limit=limit,
        observed_rate=observed_rate(list(eps_list), scaled),
        target=target,
        relative_error=error,
        monotone_tail=tail_ok,
    )


def riemann_upper_bound(
    d: GraphDomain, q: BoundaryQuadruple, eta: float, max_pieces: int = 64
) -> float:
    """
    Padded-partition bound on mod(Gamma_<eta).

    A curve of horizontal extent below eta starts in [P, Q] =
    [max(a, d - eta), min(b, c + eta)]. Each cell [x_i, x_i+1] of a partition of
    that range feeds a strip [x_i - eta, x_i+1 + eta] clipped to the domain, whose
    modulus is at most its width over the minimum height. The smallest sum over
    uniform partitions with up to max_pieces cells is returned.
    """
    validate_quadruple(d, q)
    lo, hi = d.interval.lo, d.interval.hi
    start, stop = max(q.a.x, q.d.x - eta), min(q.b.x, q.c.x + eta)
    if stop < start:
        return 0.0
    f = d.f
    best = np.inf
    for n in range(1, max_pieces + 1):
        cuts = np.linspace(start, stop, n + 1)
        total = 0.0
        for x0, x1 in zip(cuts, cuts[1:]):
            left, right = max(lo, x0 - eta), min(hi, x1 + eta)
            total += (right - left) / minimum_on(f, left, right)
        best = min(best, total)
    return float(best)


def wide_family_bound(d: GraphDomain, eps: float, eta: float) -> float:
    """eps^2 * area(D) / eta^2, bounding eps * mod of the curves of extent >= eta."""
    return eps**2 * d.area / eta**2


def wide_family_check(
    d: GraphDomain,
    q: BoundaryQuadruple,
    sweep: SweepReport,
    eta_list: Sequence[float],
    complement: bool = False,
    opts: Optional[SolveOptions] = None,
    workers: Optional[int] = None,
) -> List[WideBoundRow]:
    """
    Check eps * mod(Gamma^eps) against the narrow and wide parts at every (eps, eta).

    With `complement`, the narrow part is the solver's restricted modulus on the
    row's own grid wherever eta covers a cell; otherwise it is the Riemann bound.
    """
    opts = opts or SolveOptions()
    riemann = {eta: riemann_upper_bound(d, q, eta) for eta in eta_list}

    def row(args) -> WideBoundRow:
        r, eta = args
        bound, slack = riemann[eta], r.allowance + r.eps * r.gap
        source: Literal["riemann", "solver"] = "riemann"
        if complement and eta >= r.h:
            g = rasterize(scale_vertical(d, r.eps), r.h, q)
            row_opts = opts.model_copy(update={"eta": eta})
            label = f"eps={r.eps:g} eta={eta:g}"
            est = _solve_or_partial(lambda: solve_modulus_restricted(g, row_opts), label)
            if est is not None:
                bound, slack = r.eps * est.value, slack + r.eps * est.gap
            else:
                bound = 0.0
            source = "solver"
        out = WideBoundRow(
            eps=r.eps,
            eta=eta,
            scaled_modulus=r.eps * r.lower_bound,
            restricted_bound=bound,
            restricted_source=source,
            wide_bound=wide_family_bound(d, r.eps, eta),
            slack=slack,
        )
        if not out.holds:
            logger.warning(
                f"eps={r.eps:g} eta={eta:g}: eps*mod {out.scaled_modulus:.9g} exceeds "
                f"{source} bound {bound:.9g} + wide bound {out.wide_bound:.3g}"
            )
        return out

    pairs = [(r, eta) for r in sweep.rows for eta in eta_list]
    return _run_rows(row, pairs, workers, "wide-family check")


def eta_sweep(
    d: GraphDomain,
    q: BoundaryQuadruple,
    eta_list: Sequence[float],
    h: float,
    opts: Optional[SolveOptions] = None,
    workers: Optional[int] = None,
) -> EtaReport:
    """Restricted moduli mod(Gamma_<eta) for decreasing eta at a fixed cell size."""
    _check_decreasing(eta_list, "eta_list")
    too_small = [eta for eta in eta_list if eta < h]
    if too_small:
        raise InfeasibleEta(f"eta values {too_small} are below the cell size h={h}")
    opts = opts or SolveOptions()
    g = rasterize(d, h, q)

    def row(eta: float) -> EtaRow:
        label = f"eta={eta:g}"
        row_opts = opts.model_copy(update={"eta": eta})
        est = _solve_or_partial(lambda: solve_modulus_restricted(g, row_opts), label)
        out = EtaRow(
            eta=eta,
            restricted_modulus=0.0 if est is None else est.value,
            lower_bound=0.0 if est is None else est.lower_bound,
            gap=0.0 if est is None else est.gap,
            riemann_bound=riemann_upper_bound(d, q, eta),
            iterations=0 if est is None else est.iterations,
            converged=True if est is None else est.converged,
        )
        logger.info(
            f"{label}: mod={out.restricted_modulus:.12g} (gap {out.gap:.3g}), "
            f"Riemann bound {out.riemann_bound:.6g}"
        )
        return out

    rows = _run_rows(row, list(eta_list), workers, "eta sweep")
    # rows run from large to small eta, so values must not increase
    nondecreasing = all(
        b.restricted_modulus <= a.restricted_modulus + a.gap + b.gap
        for a, b in zip(rows, rows[1:])
    )
    if not nondecreasing:
        logger.warning("restricted moduli are not monotone in eta within their gaps")
    riemann_ok = all(
        r.lower_bound <= r.riemann_bound * (1 + settings.discretization_allowance)
        for r in rows
    )
    return EtaReport(
        h=g.h,
        rows=rows,
        limit_estimate=rows[-1].restricted_modulus,
        nondecreasing=nondecreasing,
        riemann_ok=riemann_ok,
    )


def sandwich_check(
    d: GraphDomain,
    q: BoundaryQuadruple,
    eps_list: Sequence[float],
    eta_list: Sequence[float],
    eta_h: float,
    h_schedule: Optional[HSchedule] = None,
    opts: Optional[SolveOptions] = None,
    allowance: Optional[float] = None,
    workers: Optional[int] = None,
    complement: bool = False,
) -> tuple:
    """
    Check mod(Gamma_v) <= eps-limit <= eta-limit within the tolerance chain.

    Every sweep row is also split at each eta into its narrow and wide parts
    (see wide_family_check). Returns the verdict together with both sweep reports.
    """
    allowance = settings.discretization_allowance if allowance is None else allowance
    sweep = epsilon_sweep(d, q, eps_list, h_schedule, opts, allowance, workers)
    etas = eta_sweep(d, q, eta_list, eta_h, opts, workers)
    vertical = sweep.target
    eps_limit = sweep.extrapolated_limit
    eta_limit = etas.limit_estimate

    gaps = sum(r.eps * r.gap for r in sweep.rows[-3:]) + etas.rows[-1].gap
    tol_chain = gaps + allowance * max(vertical, eps_limit, eta_limit)
    rowwise = all(
        r.eps_times_modulus >= vertical - (r.eps * r.gap + r.allowance)
        for r in sweep.rows
    )
    wide_rows = wide_family_check(d, q, sweep, eta_list, complement, opts, workers)
    verdict = SandwichVerdict(
        vertical=vertical,
        eps_limit=eps_limit,
        eta_limit=eta_limit,
        tol_chain=tol_chain,
        lower_holds=vertical <= eps_limit + tol_chain,
        upper_holds=eps_limit <= eta_limit + tol_chain,
        rowwise_holds=rowwise,
        eta_nondecreasing=etas.nondecreasing,
        monotone_tail=sweep.monotone_tail,
        wide_rows=wide_rows,
    )
    log = logger.info if verdict.ok else logger.warning
    log(
        f"sandwich: {vertical:.12g} <= {eps_limit:.12g} <= {eta_limit:.12g} "
        f"(tolerance {tol_chain:.3g}): {'holds' if verdict.ok else 'VIOLATED'}"
    )
    return verdict, sweep, etas
