# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
# http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import logging

import pytest

from mdspm.bench import (
    BenchConfig,
    Cell,
    PublishedTable,
    check_reports,
    load_published,
    monotone_in_m,
    published_names,
    run_cell,
    run_grid,
)
from mdspm.solvers import (
    Family,
    MethodDescriptor,
    MethodKind,
    ProblemDescriptor,
    StoppingRule,
)

from .reports import make_report


EXAMPLE1 = ProblemDescriptor(Family.example1, n=40)


class TestPublishedTables:
    def test_names(self):
        assert published_names() == ["table1", "table2", "table3"]

    def test_table1(self):
        table = load_published("table1")

        assert isinstance(table, PublishedTable)
        assert len(table.cells) == 6
        assert {c.problem for c in table.cells} == {
            ProblemDescriptor(Family.example1, n=1000)
        }
        assert [c.method.column for c in table.cells] == [
            "gap2d (ij_gap=2)",
            "gap2d (ij_gap=500)",
            "mdspm (m=2)",
            "mdspm (m=3)",
            "mdspm (m=4)",
            "mdspm (m=5)",
        ]
        assert [c.published for c in table.cells] == [6, 7, 5, 4, 3, 2]
        assert table.absolute_tolerance == 1

    def test_table3(self):
        table = load_published("table3")

        assert len(table.cells) == 18
        assert {c.problem.case for c in table.cells} == {1, 2, 3}
        assert table.relative_tolerance == pytest.approx(0.15)

    def test_unknown(self):
        with pytest.raises(ValueError):
            load_published("table4")

    @pytest.mark.parametrize(
        ("sweeps", "accepted"),
        [(4, True), (5, True), (6, True), (7, False), (3, False)],
    )
    def test_absolute_tolerance(self, sweeps, accepted):
        table = PublishedTable(title="t", cells=[], absolute_tolerance=1)
        assert table.accepts(make_report(sweeps=sweeps, published=5)) is accepted

    @pytest.mark.parametrize(
        ("sweeps", "accepted"), [(85, True), (115, True), (116, False), (84, False)]
    )
    def test_relative_tolerance(self, sweeps, accepted):
        table = PublishedTable(title="t", cells=[], relative_tolerance=0.15)
        assert table.accepts(make_report(sweeps=sweeps, published=100)) is accepted

    def test_rejects_unconverged_and_unpublished(self):
        table = PublishedTable(title="t", cells=[], absolute_tolerance=1)
        assert not table.accepts(make_report(sweeps=5, published=5, converged=False))
        assert not table.accepts(make_report(sweeps=5))
        assert not table.accepts(make_report(published=5, error="boom"))


class TestRunCell:
    def test_success(self):
        cell = Cell(EXAMPLE1, MethodDescriptor("mdspm", m=2), published=3)

        report = run_cell(cell)

        assert report.converged
        assert not report.errored
        assert report.problem == EXAMPLE1
        assert report.method == cell.method
        assert report.published == 3
        assert report.sweeps == len(report.history) > 0

    def test_successive_kernel(self):
        cell = Cell(EXAMPLE1, MethodDescriptor("1ddspm", ij_gap=20))
        report = run_cell(cell, StoppingRule(tol=1e-8))
        assert report.converged
        assert report.method.kind is MethodKind.oned_dspm

    def test_construction_error_is_recorded(self, caplog):
        problem = ProblemDescriptor(Family.example3, case=4, grid=4)
        cell = Cell(problem, MethodDescriptor("gs"), published=10)

        with caplog.at_level(logging.ERROR):
            report = run_cell(cell)

        assert report.errored
        assert report.outcome == "error"
        assert report.error.startswith("ProblemConstructionError: ")
        assert report.problem == problem
        assert report.published == 10
        assert report.history == ()
        assert "Error running gs on example3(case=4,grid=4)" in caplog.text

    def test_solver_error_is_recorded(self):
        cell = Cell(EXAMPLE1, MethodDescriptor("mdspm", m=41))
        report = run_cell(cell)
        assert report.errored
        assert report.error.startswith("ValueError: ")


class TestRunGrid:
    def test_keeps_cell_order(self):
        broken = ProblemDescriptor(Family.example3, case=9, grid=3)
        cells = [Cell(EXAMPLE1, MethodDescriptor("mdspm", m=m)) for m in (5, 1, 3)]
        cells.append(Cell(broken, MethodDescriptor("gs")))
        config = BenchConfig(cells=cells, jobs=2)

        reports = run_grid(config)

        assert [r.method.m for r in reports] == [5, 1, 3, None]
        assert [r.errored for r in reports] == [False, False, False, True]

    def test_config_validation(self):
        with pytest.raises(ValueError):
            BenchConfig(cells=[])
        with pytest.raises(ValueError):
            BenchConfig(cells=[Cell(EXAMPLE1, MethodDescriptor("gs"))], jobs=0)
        with pytest.raises(ValueError):
            BenchConfig(
                cells=[Cell(EXAMPLE1, MethodDescriptor("gs"))], output_format="xml"
            )


class TestMonotoneInM:
    def test_non_increasing(self):
        reports = [make_report(m=m, sweeps=s) for m, s in [(2, 5), (3, 4), (4, 4)]]
        assert monotone_in_m(reports) == []

    def test_violation(self):
        other = ProblemDescriptor(Family.example2, n=1000)
        reports = [
            make_report(m=2, sweeps=5),
            make_report(m=3, sweeps=6),
            make_report(m=2, sweeps=7, problem=other),
            make_report(m=3, sweeps=6, problem=other),
        ]
        assert monotone_in_m(reports) == ["example1(n=1000)"]

    def test_ignores_other_methods_and_failures(self):
        reports = [
            make_report(m=2, sweeps=5),
            make_report(m=3, sweeps=9, converged=False),
            make_report("gap2d", sweeps=9, ij_gap=2),
            make_report(m=4, error="boom"),
        ]
        assert monotone_in_m(reports) == []


class TestCheckReports:
    def test_clean(self, caplog):
        table = PublishedTable(title="t", cells=[], absolute_tolerance=1)
        reports = [make_report(m=2, sweeps=5, published=5)]

        with caplog.at_level(logging.INFO):
            assert check_reports(reports, table)
        assert "published 5" in caplog.text

    def test_mismatch(self, caplog):
        table = PublishedTable(title="t", cells=[], absolute_tolerance=1)
        reports = [make_report(m=2, sweeps=9, published=5)]

        with caplog.at_level(logging.WARNING):
            assert not check_reports(reports, table)
        assert any(r.levelno == logging.WARNING for r in caplog.records)

    def test_monotonicity_without_table(self, caplog):
        reports = [make_report(m=2, sweeps=5), make_report(m=3, sweeps=6)]

        with caplog.at_level(logging.WARNING):
            assert not check_reports(reports)
        assert "increase with m" in caplog.text
