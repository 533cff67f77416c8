import math

import numpy as np
import pytest

from modlim.core.errors import (
    DomainSpecError,
    InfiniteArea,
    InvalidInterval,
    InvalidQuadruple,
    NonPositive,
    NotLSC,
    SpecParseError,
)
from modlim.domain import (
    area_under,
    build_strip_domain,
    dump_domain_spec,
    evaluate,
    load_domain_spec,
    minimum_on,
    overlap_interval,
    parse_domain_spec,
    reflect_domain,
    reflect_quadruple,
    scale_vertical,
    validate_quadruple,
)
from modlim.models import BoundaryFunction, BoundaryQuadruple, Interval, PrimeEnd
from tests.conftest import linear, step

pytestmark = pytest.mark.unit


class TestBoundaryFunction:
    def test_step_takes_stored_value_at_breakpoint(self, step12):
        f = step12.f
        assert evaluate(f, 0.5) == 1.0
        assert evaluate(f, 1.5) == 2.0
        assert evaluate(f, 1.0) == 1.0
        np.testing.assert_array_equal(f(np.array([0.25, 1.0, 1.75])), [1.0, 1.0, 2.0])

    def test_slit_value_below_both_sides_is_lsc(self):
        d = step([1.0], [1.0, 1.0], 0.0, 2.0, breakpoint_values=[0.25])
        assert evaluate(d.f, 1.0) == 0.25
        assert d.area == pytest.approx(2.0)

    def test_breakpoint_value_above_neighbour_is_not_lsc(self):
        with pytest.raises(NotLSC) as err:
            step([1.0], [1.0, 2.0], 0.0, 2.0, breakpoint_values=[1.5])
        assert err.value.x == 1.0
        assert "x=1.0" in str(err.value)

    def test_piecewise_linear_interpolates(self, ramp):
        assert evaluate(ramp.f, 0.25) == pytest.approx(1.25)

    def test_sampled_continuous_stays_positive(self):
        xs = np.linspace(0.0, 1.0, 9)
        f = BoundaryFunction(
            kind="sampled-continuous",
            breakpoints=tuple(xs),
            values=tuple(0.2 + xs**2),
        )
        dense = f(np.linspace(0.0, 1.0, 1001))
        assert np.all(dense >= 0.2 - 1e-12)
        assert area_under(f, 0.0, 1.0) == pytest.approx(0.2 + 1.0 / 3.0, rel=1e-3)

    def test_infinite_values_are_rejected(self):
        with pytest.raises(InfiniteArea):
            BoundaryFunction(kind="step", breakpoints=(), values=(math.inf,))

    def test_non_positive_values_are_rejected(self):
        with pytest.raises(NonPositive):
            step([1.0], [1.0, 0.0], 0.0, 2.0)

    def test_unbounded_interval_is_rejected(self):
        with pytest.raises(InvalidInterval):
            Interval(lo=0.0, hi=math.inf)

    def test_breakpoint_outside_interval(self):
        with pytest.raises(InvalidInterval):
            step([3.0], [1.0, 2.0], 0.0, 2.0)


class TestAreaAndMinimum:
    def test_areas(self, unit_square, step12, tent, ramp):
        assert unit_square.area == 1.0
        assert step12.area == pytest.approx(3.0)
        assert tent.area == pytest.approx(2.0)
        assert ramp.area == pytest.approx(1.5)

    def test_minimum_on_step_includes_closed_ends(self, step12):
        assert minimum_on(step12.f, 1.2, 1.8) == 2.0
        assert minimum_on(step12.f, 1.0, 1.8) == 1.0
        assert minimum_on(step12.f, 0.0, 2.0) == 1.0

    def test_minimum_on_linear_uses_nodes(self, tent):
        assert minimum_on(tent.f, 0.5, 1.5) == pytest.approx(1.0)
        assert minimum_on(tent.f, 0.8, 1.2) == pytest.approx(1.3)


class TestStretch:
    def test_scale_vertical_multiplies_heights_and_area(self, step12):
        d = scale_vertical(step12, 0.25)
        assert d.area == pytest.approx(0.75)
        assert evaluate(d.f, 1.5) == pytest.approx(0.5)

    def test_stretches_compose(self, step12):
        d = scale_vertical(scale_vertical(step12, 0.5), 0.5)
        assert d.stretch == pytest.approx(0.25)

    @pytest.mark.parametrize("eps", [0.0, -1.0, math.inf])
    def test_bad_stretch(self, step12, eps):
        with pytest.raises(NonPositive):
            scale_vertical(step12, eps)


class TestQuadruple:
    def test_full_quadruple_is_valid(self, step12, full):
        validate_quadruple(step12, full(step12))

    def test_edges_are_enforced(self):
        with pytest.raises(InvalidQuadruple):
            BoundaryQuadruple(
                a=PrimeEnd(x=0.0, edge="top"),
                b=PrimeEnd(x=1.0, edge="bottom"),
                c=PrimeEnd(x=1.0, edge="top"),
                d=PrimeEnd(x=0.0, edge="top"),
            )

    def test_orientation(self, unit_square):
        q = BoundaryQuadruple.from_arcs((0.0, 1.0), (1.0, 0.0))
        with pytest.raises(InvalidQuadruple):
            validate_quadruple(unit_square, q)

    def test_outside_interval(self, unit_square):
        q = BoundaryQuadruple.from_arcs((0.0, 1.5), (0.0, 1.0))
        with pytest.raises(InvalidQuadruple):
            validate_quadruple(unit_square, q)

    def test_side_only_at_jumps(self, step12):
        q = BoundaryQuadruple(
            a=PrimeEnd(x=0.0, edge="bottom"),
            b=PrimeEnd(x=2.0, edge="bottom"),
            c=PrimeEnd(x=0.5, edge="top", side="right"),
            d=PrimeEnd(x=0.0, edge="top"),
        )
        with pytest.raises(InvalidQuadruple):
            validate_quadruple(step12, q)

    def test_riser_only_top_arc(self, step12):
        q = BoundaryQuadruple(
            a=PrimeEnd(x=0.0, edge="bottom"),
            b=PrimeEnd(x=2.0, edge="bottom"),
            c=PrimeEnd(x=1.0, edge="top", side="right"),
            d=PrimeEnd(x=1.0, edge="top", side="left"),
        )
        validate_quadruple(step12, q)
        assert overlap_interval(step12, q) is None

    def test_overlap(self, step12):
        q = BoundaryQuadruple.from_arcs((0.0, 1.5), (0.5, 2.0))
        assert overlap_interval(step12, q) == Interval(lo=0.5, hi=1.5)
        disjoint = BoundaryQuadruple.from_arcs((0.0, 0.8), (1.2, 2.0))
        assert overlap_interval(step12, disjoint) is None

    @pytest.mark.parametrize(
        "bottom, top, expected",
        [
            ((0.0, 2.0), (1.0, 3.0), (1.0, 2.0)),
            ((0.0, 1.0), (2.0, 3.0), None),
            ((0.0, 2.0), (0.0, 2.0), (0.0, 2.0)),
        ],
    )
    def test_overlap_examples(self, bottom, top, expected):
        d = step([1.5], [1.0, 2.0], 0.0, 3.0)
        got = overlap_interval(d, BoundaryQuadruple.from_arcs(bottom, top))
        if expected is None:
            assert got is None
        else:
            assert got == Interval(lo=expected[0], hi=expected[1])

    @pytest.mark.parametrize(
        "bottom, top",
        [
            ((0.0, 1.5), (0.5, 2.0)),
            ((0.0, 0.8), (1.2, 2.0)),
            ((0.3, 2.0), (0.0, 1.7)),
            ((0.0, 2.0), (0.0, 2.0)),
            ((0.4, 1.0), (1.0, 1.6)),
        ],
    )
    def test_overlap_commutes_with_reflection(self, step12, bottom, top):
        q = BoundaryQuadruple.from_arcs(bottom, top)
        direct = overlap_interval(step12, q)
        mirrored = overlap_interval(reflect_domain(step12), reflect_quadruple(step12, q))
        if direct is None:
            assert mirrored is None
        else:
            assert mirrored.lo == pytest.approx(2.0 - direct.hi, abs=1e-12)
            assert mirrored.hi == pytest.approx(2.0 - direct.lo, abs=1e-12)


class TestReflection:
    def test_reflect_domain_mirrors_profile(self, step12):
        r = reflect_domain(step12)
        assert evaluate(r.f, 0.5) == 2.0
        assert evaluate(r.f, 1.5) == 1.0
        assert r.area == pytest.approx(step12.area)

    def test_reflect_quadruple_swaps_roles(self, step12):
        q = BoundaryQuadruple(
            a=PrimeEnd(x=0.0, edge="bottom"),
            b=PrimeEnd(x=0.5, edge="bottom"),
            c=PrimeEnd(x=1.0, edge="top", side="right"),
            d=PrimeEnd(x=0.2, edge="top"),
        )
        r = reflect_quadruple(step12, q)
        assert (r.a.x, r.b.x) == (1.5, 2.0)
        assert (r.d.x, r.d.side) == (1.0, "left")
        assert r.c.x == pytest.approx(1.8)
        validate_quadruple(reflect_domain(step12), r)


class TestStrip:
    def test_strip_between_graphs(self):
        f = BoundaryFunction(kind="step", breakpoints=(), values=(2.0,))
        g = BoundaryFunction(kind="step", breakpoints=(), values=(1.0,))
        s = build_strip_domain(f, g, Interval(lo=0.0, hi=3.0))
        assert s.interval.width == 3.0

    def test_crossing_graphs(self):
        f = BoundaryFunction(kind="piecewise-linear", breakpoints=(0.0, 1.0), values=(1.0, 0.0))
        g = BoundaryFunction(kind="step", breakpoints=(), values=(0.5,))
        with pytest.raises(NonPositive):
            build_strip_domain(f, g, Interval(lo=0.0, hi=1.0))


class TestSpecFiles:
    def test_load_and_dump(self, write_spec, tmp_path):
        path = write_spec(
            {"kind": "step", "interval": [0, 2], "breakpoints": [1], "values": [1, 2]}
        )
        d = load_domain_spec(path)
        assert d.area == pytest.approx(3.0)
        out = dump_domain_spec(scale_vertical(d, 0.5), tmp_path / "half.json")
        assert load_domain_spec(out).area == pytest.approx(1.5)

    def test_malformed_json_reports_position(self):
        with pytest.raises(SpecParseError) as err:
            parse_domain_spec('{\n  "kind": "step",\n  "values": [1,\n}', "bad.json")
        assert err.value.line == 4
        assert str(err.value).startswith("bad.json:4:")

    def test_field_error_reports_line_and_field(self):
        text = '{\n  "kind": "step",\n  "interval": [0, 1],\n  "values": "tall"\n}'
        with pytest.raises(DomainSpecError) as err:
            parse_domain_spec(text, "spec.json")
        assert "line 4" in str(err.value)
        assert "values" in str(err.value)

    def test_unknown_kind(self):
        text = '{"kind": "spline", "interval": [0, 1], "values": [1]}'
        with pytest.raises(DomainSpecError):
            parse_domain_spec(text)

    def test_piece_count_mismatch(self):
        text = '{"kind": "step", "interval": [0, 2], "breakpoints": [1], "values": [1]}'
        with pytest.raises(DomainSpecError):
            parse_domain_spec(text)

    def test_linear_spec(self):
        f, interval = parse_domain_spec(
            '{"kind": "piecewise-linear", "interval": [0, 2],'
            ' "breakpoints": [0, 1, 2], "values": [0.5, 1.5, 0.5]}'
        )
        assert interval == Interval(lo=0.0, hi=2.0)
        assert linear([0.0, 1.0, 2.0], [0.5, 1.5, 0.5]).area == pytest.approx(2.0)
        assert f(1.0) == pytest.approx(1.5)
