import json
import math

import pytest

from modlim.core.errors import (
    ConfigError,
    ExtrapolationError,
    InfeasibleEta,
    ScheduleTooCoarse,
    SpecParseError,
)
from modlim.domain import load_domain_spec
from modlim.harness import (
    config_digest,
    epsilon_sweep,
    eta_sweep,
    load_experiment_config,
    monotone_tail,
    observed_rate,
    richardson_extrapolate,
    riemann_upper_bound,
    sandwich_check,
    wide_family_bound,
    wide_family_check,
    write_eta_outputs,
    write_manifest,
    write_sweep_outputs,
)
from modlim.harness.reports import (
    SWEEP_HEADER,
    render_svg_chart,
    sandwich_summary,
    sweep_summary,
    write_sweep_csv,
    write_wide_csv,
)
from modlim.models import BoundaryQuadruple, SolveOptions
from modlim.models.harness import (
    EtaReport,
    EtaRow,
    HSchedule,
    SandwichVerdict,
    SweepReport,
    SweepRow,
    WideBoundRow,
)
from tests.conftest import EXPERIMENTS

EPS = [0.5, 0.25, 0.125]
DISJOINT = BoundaryQuadruple.from_arcs((0.0, 0.8), (1.2, 2.0))


def sweep_report(scaled=(1.2, 1.1, 1.05), target=1.0):
    rows = [
        SweepRow(
            eps=eps,
            h=eps / 8,
            raw_modulus=v / eps,
            eps_times_modulus=v,
            lower_bound=v / eps * 0.999,
            gap=v / eps * 0.001,
            allowance=0.03,
            iterations=10,
        )
        for eps, v in zip(EPS, scaled)
    ]
    return SweepReport(
        rows=rows,
        extrapolated_limit=1.0,
        observed_rate=1.0,
        target=target,
        relative_error=0.0,
        monotone_tail=True,
    )


@pytest.mark.unit
class TestExtrapolation:
    def test_exact_on_linear(self):
        values = [2.0 + 3.0 * e for e in EPS]
        assert richardson_extrapolate(EPS, values) == pytest.approx(2.0, abs=1e-12)

    def test_exact_on_quadratic(self):
        eps = [0.4, 0.2, 0.1, 0.05]
        values = [1.0 + e - 4.0 * e * e for e in eps]
        assert richardson_extrapolate(eps, values) == pytest.approx(1.0, abs=1e-12)

    def test_needs_three_rows(self):
        with pytest.raises(ExtrapolationError):
            richardson_extrapolate([0.5, 0.25], [1.0, 1.0])

    def test_lengths_must_match(self):
        with pytest.raises(ExtrapolationError):
            richardson_extrapolate(EPS, [1.0, 1.0])

    def test_observed_rate(self):
        values = [1.0 + 0.3 * e * e for e in EPS]
        assert observed_rate(EPS, values) == pytest.approx(2.0, abs=1e-9)

    def test_no_rate_for_oscillation(self):
        assert observed_rate(EPS, [1.0, 1.2, 1.1]) is None
        assert observed_rate(EPS, [1.0, 1.0, 1.0]) is None

    def test_monotone_tail(self):
        assert monotone_tail([5.0, 3.0, 2.0, 1.0])
        assert monotone_tail([1.0, 1.5, 2.0])
        assert not monotone_tail([1.0, 2.0, 1.0])
        assert monotone_tail([1.0, 2.0, 1.99], slack=0.02)


@pytest.mark.unit
class TestSweepArguments:
    def test_two_eps_values(self, unit_square, full):
        with pytest.raises(ExtrapolationError):
            epsilon_sweep(unit_square, full(unit_square), [0.5, 0.25])

    def test_eps_must_decrease(self, unit_square, full):
        with pytest.raises(ExtrapolationError):
            epsilon_sweep(unit_square, full(unit_square), [0.25, 0.5, 0.125])

    def test_fixed_h_coarser_than_schedule(self, unit_square, full):
        schedule = HSchedule(factor=4.0, h=0.2)
        with pytest.raises(ScheduleTooCoarse):
            schedule.h_for(0.5, 0.5)
        with pytest.raises(ScheduleTooCoarse):
            epsilon_sweep(unit_square, full(unit_square), EPS, h_schedule=schedule)

    def test_schedule_default_follows_height(self):
        assert HSchedule(factor=8.0).h_for(0.25, 0.5) == pytest.approx(0.0625)

    def test_eta_below_cell(self, unit_square, full):
        with pytest.raises(InfeasibleEta):
            eta_sweep(unit_square, full(unit_square), [0.4, 0.01], h=0.02)


@pytest.mark.unit
class TestBounds:
    @pytest.mark.parametrize("eta", [1e-4, 0.1, 0.5, 2.0])
    def test_riemann_bound_on_square(self, unit_square, full, eta):
        assert riemann_upper_bound(unit_square, full(unit_square), eta) == pytest.approx(1.0)

    def test_riemann_bound_on_step(self, step12, full):
        assert riemann_upper_bound(step12, full(step12), 0.1) == pytest.approx(2.0)
        fine = riemann_upper_bound(step12, full(step12), 1e-4)
        assert 1.5 <= fine <= 1.55

    def test_riemann_bound_for_distant_arcs(self, step12):
        assert riemann_upper_bound(step12, DISJOINT, 0.1) == 0.0

    def test_wide_family_bound(self, unit_square):
        assert wide_family_bound(unit_square, 0.5, 0.25) == pytest.approx(4.0)
        assert wide_family_bound(unit_square, 0.25, 0.25) == pytest.approx(1.0)

    def test_wide_family_check_flags_excess(self, unit_square, full):
        report = sweep_report(scaled=(1.2, 1.1, 1.5))
        rows = wide_family_check(unit_square, full(unit_square), report, [0.9], workers=1)
        assert [r.eps for r in rows] == EPS
        assert {r.restricted_source for r in rows} == {"riemann"}
        assert rows[0].restricted_bound == pytest.approx(1.0)
        assert rows[0].wide_bound == pytest.approx(0.25 / 0.81)
        assert [r.holds for r in rows] == [True, True, False]

    def test_wide_family_check_pairs_every_eta(self, unit_square, full):
        rows = wide_family_check(
            unit_square, full(unit_square), sweep_report(), [0.4, 0.2], workers=1
        )
        assert [(r.eps, r.eta) for r in rows[:2]] == [(0.5, 0.4), (0.5, 0.2)]
        assert len(rows) == 6
        assert all(r.holds for r in rows)


@pytest.mark.unit
class TestConfigFiles:
    def test_bundled_experiment(self):
        config = load_experiment_config(EXPERIMENTS / "square_sweep.json")
        assert config.name == "unit_square"
        assert config.domain.is_absolute()
        assert load_domain_spec(config.domain).area == pytest.approx(1.0)
        assert len(config.eps_list) == 6
        assert config.schedule().h is None

    def test_relative_domain_path(self, tmp_path, write_spec):
        write_spec({"kind": "step", "interval": [0, 1], "values": [1]}, "sq.json")
        path = tmp_path / "run.json"
        path.write_text(json.dumps({"domain": "sq.json", "eps_list": EPS}))
        config = load_experiment_config(path)
        assert config.domain == (tmp_path / "sq.json").resolve()
        assert len(config_digest(config)) == 64
        assert config_digest(config) == config_digest(load_experiment_config(path))

    def test_malformed_json(self, tmp_path):
        path = tmp_path / "run.json"
        path.write_text('{"domain": "sq.json",\n "eps_list": [0.5,\n}')
        with pytest.raises(SpecParseError) as err:
            load_experiment_config(path)
        assert err.value.line == 3

    def test_missing_domain(self, tmp_path):
        path = tmp_path / "run.json"
        path.write_text(json.dumps({"domain": "nowhere.json", "eps_list": EPS}))
        with pytest.raises(FileNotFoundError) as err:
            load_experiment_config(path)
        assert err.value.filename == str((tmp_path / "nowhere.json").resolve())

    def test_unknown_field(self, tmp_path, write_spec):
        write_spec({"kind": "step", "interval": [0, 1], "values": [1]}, "sq.json")
        path = tmp_path / "run.json"
        path.write_text(json.dumps({"domain": "sq.json", "eps_list": EPS, "epsilon": 1}))
        with pytest.raises(ConfigError):
            load_experiment_config(path)

    def test_increasing_eps(self, tmp_path, write_spec):
        write_spec({"kind": "step", "interval": [0, 1], "values": [1]}, "sq.json")
        path = tmp_path / "run.json"
        path.write_text(json.dumps({"domain": "sq.json", "eps_list": [0.1, 0.2, 0.3]}))
        with pytest.raises(ConfigError):
            load_experiment_config(path)


@pytest.mark.unit
class TestReports:
    def test_sweep_csv(self, tmp_path):
        path = write_sweep_csv(sweep_report(), tmp_path / "sweep.csv")
        lines = path.read_text().splitlines()
        assert lines[0] == ",".join(SWEEP_HEADER)
        assert lines[1].startswith("0.5,0.0625,2.4,1.2,")
        assert lines[1].endswith(",10,true")

    def test_sweep_summary_bound(self):
        text = sweep_summary(sweep_report(), bound=0.02)
        assert "relative_error: 0\n" in text
        assert text.endswith("bound: 0.02 (pass)\n")

    def test_sweep_outputs_and_manifest(self, tmp_path):
        files = write_sweep_outputs(sweep_report(), tmp_path)
        assert sorted(f.name for f in files) == [
            "sweep_eps.csv",
            "sweep_eps.svg",
            "sweep_eps_summary.txt",
        ]
        assert (tmp_path / "sweep_eps.svg").read_text().startswith("<svg")
        manifest = json.loads(write_manifest(tmp_path, "sweep eps", files, seed=3).read_text())
        assert manifest["command"] == "sweep eps"
        assert manifest["seed"] == 3
        assert manifest["config_sha256"] is None
        assert manifest["files"] == sorted(f.name for f in files)
        assert "timestamp" not in manifest

    def test_eta_outputs(self, tmp_path):
        report = EtaReport(
            h=0.02,
            rows=[
                EtaRow(
                    eta=eta,
                    restricted_modulus=m,
                    lower_bound=m,
                    gap=0.0,
                    riemann_bound=2.0,
                    iterations=4,
                )
                for eta, m in [(0.4, 1.7), (0.2, 1.6), (0.1, 1.55)]
            ],
            limit_estimate=1.55,
            nondecreasing=True,
            riemann_ok=True,
        )
        files = write_eta_outputs(report, tmp_path)
        summary = (tmp_path / "sweep_eta_summary.txt").read_text()
        assert "limit_estimate: 1.55\n" in summary
        assert len(files) == 3

    def test_sandwich_summary_verdict(self):
        verdict = SandwichVerdict(
            vertical=1.5,
            eps_limit=1.49,
            eta_limit=1.6,
            tol_chain=0.05,
            lower_holds=True,
            upper_holds=True,
            rowwise_holds=True,
            eta_nondecreasing=False,
            monotone_tail=True,
        )
        assert not verdict.ok
        assert sandwich_summary(verdict).splitlines()[-1] == "verdict: violated"

    def test_failed_wide_row_violates_sandwich(self, tmp_path):
        wide = WideBoundRow(
            eps=0.125,
            eta=0.9,
            scaled_modulus=1.5,
            restricted_bound=1.0,
            restricted_source="riemann",
            wide_bound=0.02,
            slack=0.03,
        )
        verdict = SandwichVerdict(
            vertical=1.0,
            eps_limit=1.0,
            eta_limit=1.0,
            tol_chain=0.05,
            lower_holds=True,
            upper_holds=True,
            rowwise_holds=True,
            eta_nondecreasing=True,
            monotone_tail=True,
            wide_rows=[wide],
        )
        assert not wide.holds
        assert not verdict.ok
        assert "wide_holds: false (1 rows)\n" in sandwich_summary(verdict)
        lines = write_wide_csv([wide], tmp_path / "wide.csv").read_text().splitlines()
        assert lines[1] == "0.125,0.9,1.5,1,riemann,0.02,0.03,false"

    def test_chart_with_single_point(self):
        svg = render_svg_chart({"a": [(1.0, 2.0)]}, "t", "x", "y", reference=2.0)
        assert svg.count("<circle") == 1
        assert "stroke-dasharray" in svg


@pytest.mark.slow
class TestSweeps:
    def test_square(self, unit_square, full):
        report = epsilon_sweep(unit_square, full(unit_square), EPS)
        assert report.target == 1.0
        assert report.relative_error < 0.02
        assert all(r.converged for r in report.rows)

    def test_step(self, step12, full):
        report = epsilon_sweep(step12, full(step12), EPS + [0.0625])
        assert report.target == 1.5
        assert report.relative_error < 0.02

    def test_disjoint_arcs_vanish(self, step12):
        report = epsilon_sweep(step12, DISJOINT, [0.25, 0.125, 0.0625])
        assert report.target == 0.0
        assert report.rows[-1].eps_times_modulus < 0.05
        assert report.relative_error < 0.05

    def test_eta_sweep(self, step12, full):
        report = eta_sweep(step12, full(step12), [0.4, 0.2, 0.1], h=0.02)
        assert report.nondecreasing
        assert report.riemann_ok
        assert report.limit_estimate >= 1.5 * 0.98

    @pytest.mark.parametrize("name", ["unit_square", "step12", "tent"])
    def test_sandwich(self, request, full, name):
        d = request.getfixturevalue(name)
        verdict, sweep, etas = sandwich_check(d, full(d), EPS, [0.4, 0.2, 0.1], 0.02)
        assert verdict.ok, sandwich_summary(verdict)
        assert verdict.vertical == pytest.approx(sweep.target)
        assert len(etas.rows) == 3
        if name == "tent":
            assert verdict.vertical == pytest.approx(2 * math.log(3), abs=1e-10)


@pytest.mark.slow
class TestBundledSweeps:
    """The full 2^-1 .. 2^-6 sweeps of experiments/."""

    def run(self, name):
        config = load_experiment_config(EXPERIMENTS / name)
        d = load_domain_spec(config.domain)
        q = config.quadruple or BoundaryQuadruple.full(d.interval)
        report = epsilon_sweep(
            d, q, config.eps_list, config.schedule(), SolveOptions(tol=config.tol)
        )
        assert [r.eps for r in report.rows] == [2.0**-k for k in range(1, 7)]
        return config, report

    @pytest.mark.parametrize(
        "name, target", [("square_sweep.json", 1.0), ("step12_sweep.json", 1.5)]
    )
    def test_limit_matches_vertical_modulus(self, name, target):
        config, report = self.run(name)
        assert report.target == pytest.approx(target)
        assert report.relative_error < 0.02
        assert config.relative_error_bound == 0.02

    def test_disjoint_projection_vanishes(self):
        _, report = self.run("disjoint_sweep.json")
        assert report.target == 0.0
        assert report.rows[-1].eps_times_modulus < 0.05
