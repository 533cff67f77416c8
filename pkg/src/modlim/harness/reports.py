"""Experiment files in, CSV / summary / SVG / manifest out."""

import csv
import hashlib
import json
import math
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

from pydantic import ValidationError

from modlim import __version__
from modlim.core.errors import ConfigError, SpecParseError
from modlim.core.logging import get_logger
from modlim.models.harness import (
    EtaReport,
    ExperimentConfig,
    LscReport,
    SandwichVerdict,
    SweepReport,
    WideBoundRow,
)

logger = get_logger(__name__)

PathLike = Union[str, Path]

SWEEP_HEADER = [
    "eps",
    "h",
    "raw_modulus",
    "eps_times_modulus",
    "lower_bound",
    "gap",
    "allowance",
    "iterations",
    "converged",
]
ETA_HEADER = [
    "eta",
    "restricted_modulus",
    "lower_bound",
    "gap",
    "riemann_bound",
    "iterations",
    "converged",
]
WIDE_HEADER = [
    "eps",
    "eta",
    "scaled_modulus",
    "restricted_bound",
    "restricted_source",
    "wide_bound",
    "slack",
    "holds",
]


def fmt(value: float) -> str:
    """Twelve significant digits, the format of every number the toolkit prints."""
    return f"{value:.12g}"


def load_experiment_config(path: PathLike) -> ExperimentConfig:
    """Read an ExperimentConfig, resolving a relative domain path against the file."""
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise SpecParseError(str(path), e.lineno, e.colno, e.msg) from e
    if not isinstance(raw, dict):
        raise ConfigError(f"{path}: experiment config must be a JSON object")
    domain = raw.get("domain")
    if isinstance(domain, str) and not Path(domain).is_absolute():
        raw["domain"] = str((path.parent / domain).resolve())
    try:
        return ExperimentConfig.model_validate(raw)
    except ValidationError as e:
        first = e.errors()[0]
        field = ".".join(str(p) for p in first["loc"]) or "<root>"
        raise ConfigError(f"{path}: field '{field}': {first['msg']}") from e


def config_digest(config: ExperimentConfig) -> str:
    canonical = json.dumps(
        config.model_dump(mode="json"), sort_keys=True, separators=(",", ":")
    )
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def _write_rows(path: Path, header: List[str], rows: List[list]) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)
    return path


def _cell(value) -> str:
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return fmt(value)
    return str(value)


def write_sweep_csv(report: SweepReport, path: PathLike) -> Path:
    rows = [[_cell(getattr(r, k)) for k in SWEEP_HEADER] for r in report.rows]
    return _write_rows(Path(path), SWEEP_HEADER, rows)


def write_eta_csv(report: EtaReport, path: PathLike) -> Path:
    rows = [[_cell(getattr(r, k)) for k in ETA_HEADER] for r in report.rows]
    return _write_rows(Path(path), ETA_HEADER, rows)


def write_wide_csv(rows: Sequence[WideBoundRow], path: PathLike) -> Path:
    cells = [[_cell(getattr(r, k)) for k in WIDE_HEADER] for r in rows]
    return _write_rows(Path(path), WIDE_HEADER, cells)


def write_lsc_csv(report: LscReport, path: PathLike) -> Path:
    rows = [
        [str(n), fmt(i), fmt(d)]
        for n, i, d in zip(report.n_list, report.integrals, report.defects)
    ]
    return _write_rows(Path(path), ["n", "integral", "defect"], rows)


def sweep_summary(report: SweepReport, bound: Optional[float] = None) -> str:
    rate = "n/a" if report.observed_rate is None else fmt(report.observed_rate)
    lines = [
        f"extrapolated_limit: {fmt(report.extrapolated_limit)}",
        f"target: {fmt(report.target)}",
        f"relative_error: {fmt(report.relative_error)}",
        f"observed_rate: {rate}",
        f"monotone_tail: {str(report.monotone_tail).lower()}",
    ]
    if bound is not None:
        verdict = "pass" if report.relative_error <= bound else "fail"
        lines.append(f"bound: {fmt(bound)} ({verdict})")
    return "\n".join(lines) + "\n"


def eta_summary(report: EtaReport) -> str:
    return (
        f"h: {fmt(report.h)}\n"
        f"limit_estimate: {fmt(report.limit_estimate)}\n"
        f"nondecreasing: {str(report.nondecreasing).lower()}\n"
        f"riemann_ok: {str(report.riemann_ok).lower()}\n"
    )


def sandwich_summary(verdict: SandwichVerdict) -> str:
    return (
        f"vertical: {fmt(verdict.vertical)}\n"
        f"eps_limit: {fmt(verdict.eps_limit)}\n"
        f"eta_limit: {fmt(verdict.eta_limit)}\n"
        f"tol_chain: {fmt(verdict.tol_chain)}\n"
        f"lower_holds: {str(verdict.lower_holds).lower()}\n"
        f"upper_holds: {str(verdict.upper_holds).lower()}\n"
        f"rowwise_holds: {str(verdict.rowwise_holds).lower()}\n"
        f"eta_nondecreasing: {str(verdict.eta_nondecreasing).lower()}\n"
        f"monotone_tail: {str(verdict.monotone_tail).lower()}\n"
        f"wide_holds: {str(verdict.wide_holds).lower()} ({len(verdict.wide_rows)} rows)\n"
        f"verdict: {'holds' if verdict.ok else 'violated'}\n"
    )


_W, _H, _PAD = 640, 400, 60


def render_svg_chart(
    series: Dict[str, Sequence[Tuple[float, float]]],
    title: str,
    x_label: str,
    y_label: str,
    reference: Optional[float] = None,
    log_x: bool = True,
) -> str:
    """A static line chart; `reference` draws a dashed horizontal line."""
    points = [p for pts in series.values() for p in pts]
    tx = (lambda v: math.log10(v)) if log_x else (lambda v: v)
    xs = [tx(x) for x, _ in points]
    ys = [y for _, y in points] + ([reference] if reference is not None else [])
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    if x1 == x0:
        x0, x1 = x0 - 1, x1 + 1
    if y1 == y0:
        y0, y1 = y0 - 1, y1 + 1
    margin = 0.05 * (y1 - y0)
    y0, y1 = y0 - margin, y1 + margin

    def sx(x: float) -> float:
        return _PAD + (tx(x) - x0) / (x1 - x0) * (_W - 2 * _PAD)

    def sy(y: float) -> float:
        return _H - _PAD - (y - y0) / (y1 - y0) * (_H - 2 * _PAD)

    colors = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"]
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}" font-family="sans-serif" font-size="12">',
        f'<rect width="{_W}" height="{_H}" fill="white"/>',
        f'<text x="{_W / 2}" y="24" text-anchor="middle" font-size="14">{title}</text>',
        f'<line x1="{_PAD}" y1="{_H - _PAD}" x2="{_W - _PAD}" y2="{_H - _PAD}" '
        'stroke="black"/>',
        f'<line x1="{_PAD}" y1="{_PAD}" x2="{_PAD}" y2="{_H - _PAD}" stroke="black"/>',
        f'<text x="{_W / 2}" y="{_H - 16}" text-anchor="middle">{x_label}</text>',
        f'<text x="16" y="{_H / 2}" text-anchor="middle" '
        f'transform="rotate(-90 16 {_H / 2})">{y_label}</text>',
    ]
    for x, _ in sorted(set(points)):
        out.append(
            f'<text x="{sx(x):.2f}" y="{_H - _PAD + 16}" text-anchor="middle">'
            f"{x:.3g}</text>"
        )
    for y in (y0 + margin, y1 - margin):
        out.append(
            f'<text x="{_PAD - 6}" y="{sy(y):.2f}" text-anchor="end">{y:.4g}</text>'
        )
    if reference is not None:
        out.append(
            f'<line x1="{_PAD}" y1="{sy(reference):.2f}" x2="{_W - _PAD}" '
            f'y2="{sy(reference):.2f}" stroke="gray" stroke-dasharray="6 4"/>'
        )
    for i, (name, pts) in enumerate(series.items()):
        color = colors[i % len(colors)]
        coords = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in pts)
        out.append(
            f'<polyline points="{coords}" fill="none" stroke="{color}" '
            'stroke-width="2"/>'
        )
        for x, y in pts:
            out.append(
                f'<circle cx="{sx(x):.2f}" cy="{sy(y):.2f}" r="3" fill="{color}"/>'
            )
        out.append(
            f'<text x="{_W - _PAD - 4}" y="{_PAD + 16 * (i + 1)}" text-anchor="end" '
            f'fill="{color}">{name}</text>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def sweep_chart(report: SweepReport) -> str:
    return render_svg_chart(
        {"eps * mod": [(r.eps, r.eps_times_modulus) for r in report.rows]},
        title="eps * mod(Gamma^eps)",
        x_label="eps (log scale)",
        y_label="eps * modulus",
        reference=report.target,
    )


def eta_chart(report: EtaReport) -> str:
    return render_svg_chart(
        {
            "mod(Gamma_<eta)": [(r.eta, r.restricted_modulus) for r in report.rows],
            "Riemann bound": [(r.eta, r.riemann_bound) for r in report.rows],
        },
        title="restricted modulus",
        x_label="eta (log scale)",
        y_label="modulus",
    )


def write_manifest(
    out_dir: PathLike,
    command: str,
    files: Sequence[Path],
    config: Optional[ExperimentConfig] = None,
    seed: Optional[int] = None,
) -> Path:
    """manifest.json naming the inputs that reproduce the files next to it."""
    out_dir = Path(out_dir)
    manifest = {
        "command": command,
        "version": __version__,
        "config_sha256": None if config is None else config_digest(config),
        "config_name": None if config is None else config.name,
        "seed": seed if seed is not None else (None if config is None else config.seed),
        "files": sorted(Path(f).name for f in files),
    }
    path = out_dir / "manifest.json"
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path


def write_text(path: PathLike, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    return path


def write_sweep_outputs(
    report: SweepReport, out_dir: PathLike, bound: Optional[float] = None
) -> List[Path]:
    out_dir = Path(out_dir)
    files = [
        write_sweep_csv(report, out_dir / "sweep_eps.csv"),
        write_text(out_dir / "sweep_eps_summary.txt", sweep_summary(report, bound)),
        write_text(out_dir / "sweep_eps.svg", sweep_chart(report)),
    ]
    logger.info(f"Wrote eps sweep report to {out_dir}")
    return files


def write_eta_outputs(report: EtaReport, out_dir: PathLike) -> List[Path]:
    out_dir = Path(out_dir)
    files = [
        write_eta_csv(report, out_dir / "sweep_eta.csv"),
        write_text(out_dir / "sweep_eta_summary.txt", eta_summary(report)),
        write_text(out_dir / "sweep_eta.svg", eta_chart(report)),
    ]
    logger.info(f"Wrote eta sweep report to {out_dir}")
    return files
