from .analytic import CircleQuadruple, HalfPlaneTriple, LiouvilleMass
from .domain import (
    Interval,
    BoundaryFunction,
    GraphDomain,
    StripDomain,
    PrimeEnd,
    BoundaryQuadruple,
    BoundaryArc,
)
from .discrete import DiscreteDomain, ModulusEstimate, SolveOptions
from .harness import (
    EtaReport,
    EtaRow,
    ExperimentConfig,
    HSchedule,
    LscReport,
    SandwichVerdict,
    WideBoundRow,
    SweepReport,
    SweepRow,
)
from .vertical import BeurlingReport, ExtremalDensity, VerticalFamily

__all__ = [
    "CircleQuadruple",
    "DiscreteDomain",
    "ModulusEstimate",
    "SolveOptions",
    "HalfPlaneTriple",
    "LiouvilleMass",
    "Interval",
    "BoundaryFunction",
    "GraphDomain",
    "StripDomain",
    "PrimeEnd",
    "BoundaryQuadruple",
    "BoundaryArc",
    "BeurlingReport",
    "ExtremalDensity",
    "VerticalFamily",
    "EtaReport",
    "EtaRow",
    "ExperimentConfig",
    "HSchedule",
    "LscReport",
    "SandwichVerdict",
    "WideBoundRow",
    "SweepReport",
    "SweepRow",
]
