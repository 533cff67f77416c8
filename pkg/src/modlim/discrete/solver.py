"""Discrete modulus by shortest-path constraint generation with dual certificates."""

import math
from typing import Optional

import numpy as np

from modlim.core.errors import Disconnected, InfeasibleEta, IterationLimit
from modlim.core.logging import get_logger
from modlim.discrete.paths import PathOracle, make_oracle
from modlim.discrete.qp import PathProgram
from modlim.models.discrete import DiscreteDomain, ModulusEstimate, SolveOptions

logger = get_logger(__name__)


def _estimate(
    program: PathProgram,
    rho: np.ndarray,
    shortest: float,
    iterations: int,
    opts: SolveOptions,
    converged: bool,
) -> ModulusEstimate:
    ones_lam, quad = program.dual_terms()
    energy = quad / 4.0
    value = energy / shortest**2
    lower = min(ones_lam**2 / quad, value) if quad > 0 else 0.0
    density = rho / shortest
    lengths = program.lengths(density)
    active = [
        (path, float(lam))
        for path, length, lam in zip(program.paths, lengths, program.lam)
        if abs(length - 1.0) <= opts.tol
    ]
    return ModulusEstimate(
        value=value,
        lower_bound=lower,
        upper_bound=value,
        gap=max(0.0, value - lower),
        density=density,
        active_paths=[p for p, _ in active],
        multipliers=[lam for _, lam in active],
        iterations=iterations,
        converged=converged,
        eta=opts.eta,
    )


def _solve(g: DiscreteDomain, oracle: PathOracle, opts: SolveOptions) -> ModulusEstimate:
    program = PathProgram(g.node_area, g.edge_tail, g.edge_head, g.edge_length)
    rho = np.zeros(g.n_nodes)

    first = oracle.shortest(rho, limit=opts.paths_per_iter)
    if not first:
        raise Disconnected("no path joins the source arc to the sink arc; modulus is 0")
    program.add([p for _, p in first])

    best: Optional[ModulusEstimate] = None
    for iteration in range(1, opts.max_iter + 1):
        sweeps = program.solve(opts.inner_sweeps, opts.inner_tol)
        rho = program.density()

        candidates = oracle.shortest(rho, limit=opts.paths_per_iter)
        shortest_path = candidates[0][1]
        # exact rho-length of the nearest path, without the tie-break term
        shortest = float(program.lengths_of([shortest_path], rho)[0])
        if not shortest > 0:
            # a zero-length path means rho vanishes somewhere on every route
            shortest = math.inf
        estimate = (
            _estimate(program, rho, shortest, iteration, opts, converged=True)
            if math.isfinite(shortest)
            else None
        )
        if estimate is not None and (best is None or estimate.gap < best.gap):
            best = estimate

        logger.debug(
            f"iter {iteration}: {len(program.paths)} paths, {sweeps} sweeps, "
            f"shortest {shortest:.6g}"
            + (
                f", value {estimate.value:.9g}, lower {estimate.lower_bound:.9g}"
                if estimate
                else ""
            )
        )
        if estimate is not None and estimate.gap <= opts.tol * estimate.value:
            logger.info(
                f"Converged after {iteration} iterations: modulus {estimate.value:.9g} "
                f"(gap {estimate.gap:.3g}, {len(estimate.active_paths)} active paths)"
            )
            return estimate

        known = set(program.paths)
        fresh = [p for d, p in candidates if d < 1.0 and p not in known]
        lengths = program.lengths(rho)
        program.drop((program.lam > 0) | (lengths <= 1.0 + opts.tol))
        if fresh:
            program.add(fresh)

    if best is not None:
        best = best.model_copy(update={"converged": False})
    logger.warning(
        f"Iteration limit {opts.max_iter} reached"
        + (f"; best gap {best.gap:.3g} at value {best.value:.9g}" if best else "")
    )
    raise IterationLimit(
        f"no certified solution within {opts.max_iter} iterations", estimate=best
    )


def solve_modulus(g: DiscreteDomain, opts: Optional[SolveOptions] = None) -> ModulusEstimate:
    """Discrete modulus of all source-to-sink paths of g."""
    opts = opts or SolveOptions()
    if opts.eta is not None:
        return solve_modulus_restricted(g, opts)
    return _solve(g, make_oracle(g, seed=opts.seed), opts)


def solve_modulus_restricted(g: DiscreteDomain, opts: SolveOptions) -> ModulusEstimate:
    """Discrete modulus of the paths whose horizontal extent is below opts.eta."""
    if opts.eta is None:
        raise InfeasibleEta("the restricted family needs an eta")
    return _solve(g, make_oracle(g, opts.eta, opts.seed), opts)
