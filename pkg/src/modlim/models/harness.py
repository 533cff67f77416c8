import errno
from pathlib import Path
from typing import List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from modlim.core.config import settings
from modlim.core.errors import ConfigError, ScheduleTooCoarse
from modlim.models.domain import BoundaryQuadruple


class HSchedule(BaseModel):
    """Couples the cell size to the stretch: h <= eps * min f / factor."""

    model_config = ConfigDict(frozen=True)

    factor: float = Field(default_factory=lambda: settings.h_factor, gt=0)
    h: Optional[float] = Field(default=None, gt=0)

    def h_for(self, eps: float, min_height: float) -> float:
        """Cell size for a row whose stretched domain has minimum height min_height."""
        limit = min_height / self.factor
        if self.h is None:
            return limit
        if self.h > limit * (1 + 1e-12):
            raise ScheduleTooCoarse(
                f"h={self.h} exceeds eps * min f / {self.factor} = {limit} at eps={eps}"
            )
        return self.h


class SweepRow(BaseModel):
    eps: float
    h: float
    raw_modulus: float
    eps_times_modulus: float
    lower_bound: float
    gap: float
    allowance: float
    iterations: int
    converged: bool = True


class SweepReport(BaseModel):
    rows: List[SweepRow]
    extrapolated_limit: float
    observed_rate: Optional[float]
    target: float
    relative_error: float
    monotone_tail: bool


class EtaRow(BaseModel):
    eta: float
    restricted_modulus: float
    lower_bound: float
    gap: float
    riemann_bound: float
    iterations: int
    converged: bool = True


class EtaReport(BaseModel):
    h: float
    rows: List[EtaRow]
    limit_estimate: float
    nondecreasing: bool
    riemann_ok: bool


class WideBoundRow(BaseModel):
    """
    eps * mod(Gamma^eps) split at horizontal extent eta.

    The curves of extent below eta are bounded by `restricted_bound` (the
    Riemann bound, or the solver's restricted modulus on the same grid), the
    rest by eps^2 * area / eta^2.
    """

    eps: float
    eta: float
    scaled_modulus: float
    restricted_bound: float
    restricted_source: Literal["riemann", "solver"]
    wide_bound: float
    slack: float

    @property
    def holds(self) -> bool:
        return self.scaled_modulus <= self.restricted_bound + self.wide_bound + self.slack


class SandwichVerdict(BaseModel):
    vertical: float
    eps_limit: float
    eta_limit: float
    tol_chain: float
    lower_holds: bool
    upper_holds: bool
    rowwise_holds: bool
    eta_nondecreasing: bool
    monotone_tail: bool
    wide_rows: List[WideBoundRow] = Field(default_factory=list)

    @property
    def wide_holds(self) -> bool:
        return all(r.holds for r in self.wide_rows)

    @property
    def ok(self) -> bool:
        return (
            self.lower_holds
            and self.upper_holds
            and self.rowwise_holds
            and self.eta_nondecreasing
            and self.wide_holds
        )


class LscReport(BaseModel):
    n_list: List[int]
    integrals: List[float]
    target: float
    defects: List[float]
    floor: float
    samples: int
    monotone_in_n: bool
    below_f: bool
    defects_decreasing: bool


def _strictly_decreasing(values: List[float]) -> bool:
    return all(b < a for a, b in zip(values, values[1:]))


class ExperimentConfig(BaseModel):
    """A named experiment read from JSON; relative paths resolve against the file."""

    model_config = ConfigDict(extra="forbid")

    name: str = "experiment"
    domain: Path
    quadruple: Optional[BoundaryQuadruple] = None
    eps_list: List[float] = []
    eta_list: List[float] = []
    h: Optional[float] = Field(default=None, gt=0)
    eta_h: Optional[float] = Field(default=None, gt=0)
    h_factor: float = Field(default_factory=lambda: settings.h_factor, gt=0)
    tol: float = Field(default_factory=lambda: settings.tol, gt=0)
    seed: int = Field(default_factory=lambda: settings.seed)
    relative_error_bound: float = Field(default=0.02, gt=0)
    output_dir: Path = Field(default_factory=lambda: Path(settings.output_dir))

    @field_validator("eps_list", "eta_list")
    @classmethod
    def _monotone(cls, values: List[float]) -> List[float]:
        if any(v <= 0 for v in values):
            raise ConfigError(f"list entries must be positive, got {values}")
        if not _strictly_decreasing(values):
            raise ConfigError(f"list must be strictly decreasing, got {values}")
        return values

    @model_validator(mode="after")
    def _check_paths(self) -> "ExperimentConfig":
        if not self.domain.is_file():
            raise FileNotFoundError(errno.ENOENT, "domain spec not found", str(self.domain))
        if not self.eps_list and not self.eta_list:
            raise ConfigError("an experiment needs eps_list, eta_list or both")
        return self

    def schedule(self) -> HSchedule:
        return HSchedule(factor=self.h_factor, h=self.h)
