"""
modlim command line.

Exit codes: 0 success, 1 I/O or malformed JSON, 2 invalid domain, 3 solver
failure or a failed numerical check, 4 quadrature failure, 64 usage.
"""

import argparse
import math
import sys
from pathlib import Path
from typing import List, Optional, Sequence

from modlim import __version__
from modlim.analytic import (
    ASYMPTOTIC_OFFSET,
    asymptotic_defect,
    circle_modulus,
    grotzsch_mu,
    liouville_mass_circle,
    liouville_mass_halfplane,
    quad_modulus,
)
from modlim.core.config import settings
from modlim.core.errors import (
    ConfigError,
    Disconnected,
    IterationLimit,
    ModlimError,
    OutOfRange,
    UsageError,
)
from modlim.core.logging import get_logger, setup_logging
from modlim.discrete import (
    rasterize,
    solve_modulus,
    solve_modulus_restricted,
    write_certificate,
    write_density_csv,
)
from modlim.domain import (
    build_graph_domain,
    build_strip_domain,
    load_domain_spec,
    read_domain_spec,
    validate_quadruple,
)
from modlim.domain.graph import overlap_interval
from modlim.harness import (
    epsilon_sweep,
    eta_sweep,
    load_experiment_config,
    lsc_approximation,
    sandwich_check,
    write_eta_outputs,
    write_lsc_csv,
    write_manifest,
    write_sweep_outputs,
    write_wide_csv,
)
from modlim.harness.reports import fmt, sandwich_summary, write_text
from modlim.models import (
    BoundaryQuadruple,
    CircleQuadruple,
    ExperimentConfig,
    GraphDomain,
    HalfPlaneTriple,
    Interval,
    ModulusEstimate,
    PrimeEnd,
    SolveOptions,
)
from modlim.vertical import (
    check_beurling,
    extremal_density,
    modulus_vertical,
    transverse_measure,
    vertical_family,
)

logger = get_logger("modlim.cli")

EXIT_OK = 0
EXIT_IO = 1
EXIT_CHECK_FAILED = 3

# triples (0, w2, 1) with Liouville mass at least log 10 count as asymptotic
_ASYMPTOTIC_MASS = math.log(10.0)


class ModlimArgumentParser(argparse.ArgumentParser):
    """argparse parser that reports usage problems as UsageError (exit 64)."""

    def error(self, message: str):
        raise UsageError(f"{self.prog}: {message}")


def _print(label: str, value) -> None:
    if isinstance(value, float):
        value = fmt(value)
    print(f"{label}: {value}")


def _parse_prime_end(text: str) -> PrimeEnd:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) not in (2, 3):
        raise UsageError(f"prime end must be X,EDGE[,SIDE], got '{text}'")
    try:
        x = float(parts[0])
    except ValueError as e:
        raise UsageError(f"prime end x must be a number, got '{parts[0]}'") from e
    side = parts[2] if len(parts) == 3 else "none"
    if parts[1] not in ("bottom", "top") or side not in ("left", "right", "none"):
        raise UsageError(f"bad edge or side in prime end '{text}'")
    return PrimeEnd(x=x, edge=parts[1], side=side)


def _quadruple(args, d: GraphDomain) -> BoundaryQuadruple:
    if not args.quad:
        return BoundaryQuadruple.full(d.interval)
    if len(args.quad) != 4:
        raise UsageError(f"--quad must be given 4 times (a b c d), got {len(args.quad)}")
    a, b, c, e = (_parse_prime_end(t) for t in args.quad)
    q = BoundaryQuadruple(a=a, b=b, c=c, d=e)
    validate_quadruple(d, q)
    return q


def _out_dir(args, default: Optional[Path] = None) -> Path:
    if args.out is not None:
        return Path(args.out)
    return default if default is not None else Path(settings.output_dir)


# ---------- domain ----------
def cmd_domain_validate(args) -> int:
    f, interval = read_domain_spec(args.path)
    d = build_graph_domain(f, interval)
    _print("kind", f.kind)
    _print("interval", f"({fmt(interval.lo)}, {fmt(interval.hi)})")
    _print("area", d.area)
    _print("jumps", " ".join(fmt(x) for x in f.jumps()) or "none")
    _print("lsc", "ok")
    return EXIT_OK


# ---------- modulus ----------
def _print_estimate(est: ModulusEstimate) -> None:
    _print("value", est.value)
    _print("lower_bound", est.lower_bound)
    _print("upper_bound", est.upper_bound)
    _print("gap", est.gap)
    _print("iterations", est.iterations)
    _print("converged", str(est.converged).lower())


def _modulus_discrete(args, d: GraphDomain, q: BoundaryQuadruple) -> int:
    if args.h is None:
        raise UsageError("discrete mode needs --h")
    opts = SolveOptions(
        tol=args.tol if args.tol is not None else settings.tol,
        seed=args.seed if args.seed is not None else settings.seed,
        eta=args.eta,
    )
    g = rasterize(d, args.h, q)
    status = EXIT_OK
    try:
        est = solve_modulus_restricted(g, opts) if args.eta else solve_modulus(g, opts)
    except Disconnected as e:
        logger.info(f"{e}")
        est = ModulusEstimate.disconnected(g.n_nodes, opts.eta)
    except IterationLimit as e:
        if e.estimate is None:
            raise
        logger.error(f"{e}; reporting the best certificate so far")
        est, status = e.estimate, EXIT_CHECK_FAILED
    _print("nodes", g.n_nodes)
    _print_estimate(est)
    if args.dump_density:
        out = _out_dir(args)
        files = [
            write_density_csv(g, est, out / "density.csv"),
            write_certificate(est, out / "certificate.txt"),
        ]
        write_manifest(out, "modulus", files, seed=opts.seed)
        logger.info(f"Wrote density and certificate to {out}")
    return status


def cmd_modulus(args) -> int:
    if args.mode == "analytic-quad":
        if not args.triple:
            raise UsageError("analytic-quad mode needs --triple W1 W2 W3")
        _print("modulus", quad_modulus(_triple(args.triple)))
        return EXIT_OK
    if args.path is None:
        raise UsageError(f"{args.mode} mode needs a domain spec path")
    d = load_domain_spec(args.path)
    q = _quadruple(args, d)
    if args.mode == "discrete":
        return _modulus_discrete(args, d, q)

    v = vertical_family(d, q)
    _print("modulus", modulus_vertical(v))
    if args.beurling and not v.is_empty:
        report = check_beurling(extremal_density(v), v, seed=args.seed)
        _print("admissibility_error", report.admissibility_error)
        _print("probes_passed", f"{report.passed}/{report.probes}")
        _print("min_pairing", min(report.pairings) if report.pairings else 0.0)
        if not report.ok:
            return EXIT_CHECK_FAILED
    return EXIT_OK


# ---------- experiments ----------
def _experiment(args):
    config = load_experiment_config(args.config)
    d = load_domain_spec(config.domain)
    q = config.quadruple or BoundaryQuadruple.full(d.interval)
    opts = SolveOptions(tol=config.tol, seed=config.seed)
    return config, d, q, opts


def _eta_h(config: ExperimentConfig) -> float:
    h = config.eta_h or config.h
    if h is None:
        raise ConfigError("eta sweeps need eta_h (or h) in the experiment config")
    return h


def cmd_sweep_eps(args) -> int:
    config, d, q, opts = _experiment(args)
    out = _out_dir(args, config.output_dir / config.name)
    report = epsilon_sweep(
        d, q, config.eps_list, config.schedule(), opts, workers=args.workers
    )
    files = write_sweep_outputs(report, out, config.relative_error_bound)
    write_manifest(out, "sweep eps", files, config)
    _print("extrapolated_limit", report.extrapolated_limit)
    _print("target", report.target)
    _print("relative_error", report.relative_error)
    if report.relative_error > config.relative_error_bound:
        logger.error(
            f"relative error {report.relative_error:.3g} exceeds "
            f"{config.relative_error_bound:.3g}"
        )
        return EXIT_CHECK_FAILED
    return EXIT_OK


def cmd_sweep_eta(args) -> int:
    config, d, q, opts = _experiment(args)
    out = _out_dir(args, config.output_dir / config.name)
    report = eta_sweep(
        d, q, config.eta_list, _eta_h(config), opts, workers=args.workers
    )
    files = write_eta_outputs(report, out)
    write_manifest(out, "sweep eta", files, config)
    _print("limit_estimate", report.limit_estimate)
    _print("nondecreasing", str(report.nondecreasing).lower())
    _print("riemann_ok", str(report.riemann_ok).lower())
    return EXIT_OK if report.nondecreasing and report.riemann_ok else EXIT_CHECK_FAILED


def cmd_sandwich(args) -> int:
    config, d, q, opts = _experiment(args)
    out = _out_dir(args, config.output_dir / config.name)
    verdict, sweep, etas = sandwich_check(
        d,
        q,
        config.eps_list,
        config.eta_list,
        _eta_h(config),
        config.schedule(),
        opts,
        workers=args.workers,
        complement=args.complement,
    )
    files = write_sweep_outputs(sweep, out, config.relative_error_bound)
    files += write_eta_outputs(etas, out)
    files.append(write_wide_csv(verdict.wide_rows, out / "sandwich_wide.csv"))
    summary = sandwich_summary(verdict)
    files.append(write_text(out / "sandwich_summary.txt", summary))
    write_manifest(out, "sandwich", files, config)
    sys.stdout.write(summary)
    return EXIT_OK if verdict.ok else EXIT_CHECK_FAILED


# ---------- analytic ----------
def cmd_asymptotics(args) -> int:
    w2_list: List[float] = args.w2
    if any(not 0 < w < 1 for w in w2_list):
        raise OutOfRange(f"w2 values must lie in (0, 1), got {w2_list}")
    if any(b <= a for a, b in zip(w2_list, w2_list[1:])):
        raise OutOfRange(f"w2 values must increase toward 1, got {w2_list}")

    print("w2,modulus,liouville_term,defect")
    tail = []
    for w2 in w2_list:
        t = HalfPlaneTriple(w1=0.0, w2=w2, w3=1.0)
        mass = liouville_mass_halfplane(t).value
        defect = asymptotic_defect(t)
        print(
            f"{fmt(w2)},{fmt(quad_modulus(t))},"
            f"{fmt(mass / math.pi + ASYMPTOTIC_OFFSET)},{fmt(defect)}"
        )
        if mass >= _ASYMPTOTIC_MASS:
            tail.append(abs(defect))
    if not tail:
        logger.info("no row is in the asymptotic regime; nothing to check")
        return EXIT_OK
    shrinking = all(b < a for a, b in zip(tail, tail[1:]))
    if not shrinking or tail[-1] >= 0.01:
        logger.error(f"defects do not shrink below 0.01: {tail}")
        return EXIT_CHECK_FAILED
    return EXIT_OK


def _triple(values: Sequence[float]) -> HalfPlaneTriple:
    return HalfPlaneTriple(w1=values[0], w2=values[1], w3=values[2])


def cmd_analytic(args) -> int:
    if args.quantity == "mu":
        _print("mu", grotzsch_mu(args.r))
    elif args.quantity == "liouville":
        _print("liouville", liouville_mass_halfplane(_triple(args.w)).value)
    elif args.quantity == "quad":
        _print("modulus", quad_modulus(_triple(args.w)))
    elif args.quantity == "circle":
        a, b, c, d = args.angles
        q = CircleQuadruple(a=a, b=b, c=c, d=d)
        _print("liouville", liouville_mass_circle(q).value)
        _print("modulus", circle_modulus(q))
    else:
        _print("defect", asymptotic_defect(_triple(args.w)))
    return EXIT_OK


# ---------- lsc / transverse ----------
def cmd_lsc_approx(args) -> int:
    d = load_domain_spec(args.path)
    q = _quadruple(args, d)
    overlap = overlap_interval(d, q) or d.interval
    _, report = lsc_approximation(d.f, args.n, d.interval, overlap, args.samples)
    print("n,integral,defect")
    for n, i, e in zip(report.n_list, report.integrals, report.defects):
        print(f"{n},{fmt(i)},{fmt(e)}")
    _print("target", report.target)
    if args.out is not None:
        files = [write_lsc_csv(report, Path(args.out) / "lsc.csv")]
        write_manifest(args.out, "lsc-approx", files)
    ok = report.monotone_in_n and report.below_f and report.defects_decreasing
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def cmd_transverse(args) -> int:
    f, interval = read_domain_spec(args.upper)
    g, lower_interval = read_domain_spec(args.lower)
    if lower_interval != interval:
        raise UsageError(
            f"upper and lower specs must share an interval, got {interval} and {lower_interval}"
        )
    strip = build_strip_domain(f, g, interval)
    lo = interval.lo if args.lo is None else args.lo
    hi = interval.hi if args.hi is None else args.hi
    _print("transverse_measure", transverse_measure(strip, Interval(lo=lo, hi=hi)))
    return EXIT_OK


# ---------- parser ----------
def build_parser() -> ModlimArgumentParser:
    ap = ModlimArgumentParser(
        prog="modlim",
        description="Conformal moduli of curve families in graph domains under vertical stretch.",
    )
    ap.add_argument("--version", action="version", version=f"modlim {__version__}")
    ap.add_argument(
        "--log-level",
        type=str,
        default=None,
        help="Logging level (DEBUG, INFO, WARNING, ERROR); default from MODLIM_LOG_LEVEL.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    domain = sub.add_parser("domain", help="Domain spec utilities.")
    domain_sub = domain.add_subparsers(dest="action", required=True)
    validate = domain_sub.add_parser("validate", help="Validate a domain spec file.")
    validate.add_argument("path", type=Path)
    validate.set_defaults(func=cmd_domain_validate)

    quad_help = "Prime end X,EDGE[,SIDE]; give four times in the order a b c d."

    modulus = sub.add_parser("modulus", help="Modulus of a boundary-quadruple family.")
    modulus.add_argument("path", type=Path, nargs="?", help="Domain spec file.")
    modulus.add_argument(
        "--mode", choices=["vertical", "discrete", "analytic-quad"], default="vertical"
    )
    modulus.add_argument("--quad", action="append", help=quad_help)
    modulus.add_argument("--triple", type=float, nargs=3, metavar="W")
    modulus.add_argument("--h", type=float, default=None, help="Cell size (discrete).")
    modulus.add_argument("--tol", type=float, default=None, help="Relative gap target.")
    modulus.add_argument("--eta", type=float, default=None, help="Horizontal-extent cap.")
    modulus.add_argument(
        "--seed", type=int, default=None, help="Seed of Beurling perturbations and path tie-breaks."
    )
    modulus.add_argument("--out", type=Path, default=None, help="Output directory.")
    modulus.add_argument(
        "--dump-density", action="store_true", help="Write density CSV and certificate."
    )
    modulus.add_argument(
        "--beurling", action="store_true", help="Run the randomized extremality check."
    )
    modulus.set_defaults(func=cmd_modulus)

    sweep = sub.add_parser("sweep", help="eps or eta sweeps from an experiment file.")
    sweep_sub = sweep.add_subparsers(dest="kind", required=True)
    for kind, func in (("eps", cmd_sweep_eps), ("eta", cmd_sweep_eta)):
        p = sweep_sub.add_parser(kind)
        p.add_argument("config", type=Path)
        p.add_argument("--out", type=Path, default=None)
        p.add_argument("--workers", type=int, default=None)
        p.set_defaults(func=func)

    sandwich = sub.add_parser("sandwich", help="Check the vertical <= eps <= eta chain.")
    sandwich.add_argument("config", type=Path)
    sandwich.add_argument("--out", type=Path, default=None)
    sandwich.add_argument("--workers", type=int, default=None)
    sandwich.add_argument(
        "--complement",
        action="store_true",
        help="Bound the narrow curves by restricted solves instead of the Riemann bound.",
    )
    sandwich.set_defaults(func=cmd_sandwich)

    asym = sub.add_parser("asymptotics", help="Modulus against Liouville mass for (0, w2, 1).")
    asym.add_argument("w2", type=float, nargs="+")
    asym.set_defaults(func=cmd_asymptotics)

    lsc = sub.add_parser("lsc-approx", help="Continuous approximants of a step boundary.")
    lsc.add_argument("path", type=Path)
    lsc.add_argument("--n", type=int, nargs="+", default=[4, 16, 64, 256])
    lsc.add_argument("--samples", type=int, default=1000)
    lsc.add_argument("--quad", action="append", help=quad_help)
    lsc.add_argument("--out", type=Path, default=None)
    lsc.set_defaults(func=cmd_lsc_approx)

    analytic = sub.add_parser("analytic", help="Closed-form quantities.")
    analytic_sub = analytic.add_subparsers(dest="quantity", required=True)
    mu = analytic_sub.add_parser("mu", help="Grotzsch modulus function.")
    mu.add_argument("r", type=float)
    for name in ("liouville", "quad", "defect"):
        p = analytic_sub.add_parser(name, help=f"{name} of a half-plane triple.")
        p.add_argument("w", type=float, nargs=3, metavar="W")
    circle = analytic_sub.add_parser("circle", help="Quadruple on the unit circle (radians).")
    circle.add_argument("angles", type=float, nargs=4, metavar="THETA")
    analytic.set_defaults(func=cmd_analytic)

    transverse = sub.add_parser("transverse", help="Transverse measure of a strip.")
    transverse.add_argument("upper", type=Path, help="Spec of the upper graph f.")
    transverse.add_argument("lower", type=Path, help="Spec of the lower graph g.")
    transverse.add_argument("--lo", type=float, default=None)
    transverse.add_argument("--hi", type=float, default=None)
    transverse.set_defaults(func=cmd_transverse)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code
    setup_logging(args.log_level)
    try:
        return args.func(args)
    except ModlimError as e:
        logger.error(f"{type(e).__name__}: {e}")
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return e.exit_code
    except OSError as e:
        logger.error(f"I/O failure: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    raise SystemExit(main())
