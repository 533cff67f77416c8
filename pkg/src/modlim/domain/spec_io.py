"""
Domain spec files.

A spec is a UTF-8 JSON object:

    {"kind": "step", "interval": [0, 2], "breakpoints": [1],
     "values": [1, 2], "breakpoint_values": [1]}

For step kind `breakpoints` are the interior jump points, `values` one per piece
and the optional `breakpoint_values` one per breakpoint. For piecewise-linear and
sampled-continuous kinds `breakpoints` are sample nodes covering the interval and
`values` one per node.
"""

import json
import re
from pathlib import Path
from typing import List, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, ValidationError

from modlim.core.errors import DomainSpecError, SpecParseError
from modlim.core.logging import get_logger
from modlim.domain.graph import build_graph_domain
from modlim.models.domain import BoundaryFunction, GraphDomain, Interval, Kind

logger = get_logger(__name__)


class DomainSpec(BaseModel):
    """Wire schema of a domain spec file."""

    model_config = ConfigDict(extra="forbid")

    kind: Kind
    interval: Tuple[float, float]
    breakpoints: List[float] = []
    values: List[float]
    breakpoint_values: Optional[List[float]] = None

    def boundary_function(self) -> BoundaryFunction:
        return BoundaryFunction(
            kind=self.kind,
            breakpoints=tuple(self.breakpoints),
            values=tuple(self.values),
            breakpoint_values=(
                None
                if self.breakpoint_values is None
                else tuple(self.breakpoint_values)
            ),
        )


def _line_of(text: str, field: str) -> int:
    """Line number of the first occurrence of a JSON key, 1 when absent."""
    match = re.search(rf'"{re.escape(field)}"\s*:', text)
    return text.count("\n", 0, match.start()) + 1 if match else 1


def _describe(text: str, err: ValidationError) -> str:
    first = err.errors()[0]
    loc = [str(p) for p in first["loc"]]
    line = _line_of(text, loc[0]) if loc else 1
    field = ".".join(loc) or "<root>"
    return f"line {line}, field '{field}': {first['msg']}"


def parse_domain_spec(text: str, path: str = "<string>") -> Tuple[BoundaryFunction, Interval]:
    """Parse spec text into a boundary function and its interval."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise SpecParseError(path, e.lineno, e.colno, e.msg) from e
    try:
        spec = DomainSpec.model_validate(raw)
        return spec.boundary_function(), Interval(
            lo=spec.interval[0], hi=spec.interval[1]
        )
    except ValidationError as e:
        raise DomainSpecError(path, _describe(text, e)) from e


def read_domain_spec(path: Union[str, Path]) -> Tuple[BoundaryFunction, Interval]:
    path = Path(path)
    return parse_domain_spec(path.read_text(encoding="utf-8"), str(path))


def load_domain_spec(path: Union[str, Path]) -> GraphDomain:
    """Read, validate and build the graph domain described by a spec file."""
    f, interval = read_domain_spec(path)
    domain = build_graph_domain(f, interval)
    logger.info(f"Loaded {f.kind} domain from {path} (area {domain.area:.12g})")
    return domain


def dump_domain_spec(d: GraphDomain, path: Union[str, Path]) -> Path:
    """Write the (stretched) boundary of d as a spec file."""
    f = d.f
    spec = DomainSpec(
        kind=f.kind,
        interval=(d.interval.lo, d.interval.hi),
        breakpoints=list(f.breakpoints),
        values=list(f.values),
        breakpoint_values=(
            None if f.breakpoint_values is None else list(f.breakpoint_values)
        ),
    )
    path = Path(path)
    path.write_text(
        json.dumps(spec.model_dump(exclude_none=True), indent=2) + "\n",
        encoding="utf-8",
    )
    return path
