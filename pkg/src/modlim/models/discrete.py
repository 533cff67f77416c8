from typing import List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from modlim.core.config import settings


class DiscreteDomain(BaseModel):
    """
    Rasterized graph domain.

    Nodes are stored column by column, bottom to top, so the nodes of any run of
    consecutive columns form one contiguous index range
    `column_start[i]:column_start[j]`.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    h: float
    column_x: np.ndarray
    column_height: np.ndarray
    column_start: np.ndarray  # len(column_x) + 1 offsets
    x: np.ndarray
    y: np.ndarray
    node_area: np.ndarray
    edge_tail: np.ndarray
    edge_head: np.ndarray
    edge_length: np.ndarray
    sources: np.ndarray
    sinks: np.ndarray

    @property
    def n_nodes(self) -> int:
        return len(self.x)

    @property
    def n_columns(self) -> int:
        return len(self.column_x)

    @property
    def column(self) -> np.ndarray:
        """Column index of every node."""
        return np.repeat(np.arange(self.n_columns), np.diff(self.column_start))

    def top(self, i: int) -> int:
        return int(self.column_start[i + 1] - 1)


class SolveOptions(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    tol: float = Field(default_factory=lambda: settings.tol, gt=0)
    max_iter: int = Field(default_factory=lambda: settings.max_iter, gt=0)
    eta: Optional[float] = Field(default=None, gt=0)
    # seeds the tie-break between paths of equal rho-length
    seed: int = Field(default_factory=lambda: settings.seed)
    paths_per_iter: int = Field(default_factory=lambda: settings.paths_per_iter, gt=0)
    inner_sweeps: int = Field(default_factory=lambda: settings.inner_sweeps, gt=0)
    inner_tol: float = Field(default_factory=lambda: settings.inner_tol, gt=0)


class ModulusEstimate(BaseModel):
    """Primal value with its dual bracket and path certificate."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    value: float
    lower_bound: float
    upper_bound: float
    gap: float
    density: np.ndarray
    active_paths: List[Tuple[int, ...]]
    multipliers: List[float]
    iterations: int
    converged: bool = True
    eta: Optional[float] = None

    @model_validator(mode="after")
    def _check_bracket(self) -> "ModulusEstimate":
        if self.gap < 0 or self.lower_bound > self.value * (1 + 1e-12) + 1e-15:
            raise ValueError(
                f"inconsistent bracket: lower {self.lower_bound}, value {self.value}"
            )
        return self

    @property
    def relative_gap(self) -> float:
        return self.gap / self.value if self.value > 0 else 0.0

    @classmethod
    def disconnected(cls, n_nodes: int, eta: Optional[float] = None) -> "ModulusEstimate":
        """The exact answer for a family with no paths: modulus 0, rho = 0."""
        return cls(
            value=0.0,
            lower_bound=0.0,
            upper_bound=0.0,
            gap=0.0,
            density=np.zeros(n_nodes),
            active_paths=[],
            multipliers=[],
            iterations=0,
            eta=eta,
        )
