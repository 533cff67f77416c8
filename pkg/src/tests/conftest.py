import json
from pathlib import Path

import pytest
from faker import Faker

from modlim.domain import build_graph_domain
from modlim.models import BoundaryFunction, BoundaryQuadruple, Interval

EXPERIMENTS = Path(__file__).resolve().parents[2] / "experiments"


def step(breakpoints, values, lo, hi, breakpoint_values=None):
    f = BoundaryFunction(
        kind="step",
        breakpoints=tuple(breakpoints),
        values=tuple(values),
        breakpoint_values=None if breakpoint_values is None else tuple(breakpoint_values),
    )
    return build_graph_domain(f, Interval(lo=lo, hi=hi))


def linear(nodes, values):
    f = BoundaryFunction(
        kind="piecewise-linear", breakpoints=tuple(nodes), values=tuple(values)
    )
    return build_graph_domain(f, Interval(lo=nodes[0], hi=nodes[-1]))


@pytest.fixture
def unit_square():
    return step([], [1.0], 0.0, 1.0)


@pytest.fixture
def tall_rectangle():
    """Width 1, height 2: the 2x1 rectangle with its short sides at top and bottom."""
    return step([], [2.0], 0.0, 1.0)


@pytest.fixture
def step12():
    return step([1.0], [1.0, 2.0], 0.0, 2.0)


@pytest.fixture
def tent():
    return linear([0.0, 1.0, 2.0], [0.5, 1.5, 0.5])


@pytest.fixture
def ramp():
    """f(x) = 1 + x on (0, 1)."""
    return linear([0.0, 1.0], [1.0, 2.0])


@pytest.fixture
def full():
    return lambda d: BoundaryQuadruple.full(d.interval)


@pytest.fixture
def fake():
    faker = Faker()
    faker.seed_instance(20240611)
    return faker


@pytest.fixture
def write_spec(tmp_path):
    """Write a domain spec dict (or raw text) to a file and return its path."""

    def _write(content, name="domain.json"):
        path = tmp_path / name
        text = content if isinstance(content, str) else json.dumps(content, indent=2)
        path.write_text(text, encoding="utf-8")
        return path

    return _write
