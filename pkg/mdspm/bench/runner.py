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

import json
import logging

from functools import partial
from typing import List, Optional

import attr
import attr.validators
import cattr
import importlib_resources
import trio

from mdspm.problems import build_problem
from mdspm.solvers import (
    MethodDescriptor,
    MethodKind,
    ProblemDescriptor,
    RunReport,
    StoppingRule,
    solve,
)


logger = logging.getLogger(__name__)


FORMATS = ("csv", "markdown", "json")


_cattr = cattr.Converter()


@attr.s(slots=True, frozen=True)
class Cell:

    problem = attr.ib(type=ProblemDescriptor)
    method = attr.ib(type=MethodDescriptor)
    published = attr.ib(type=Optional[int], default=None)


@attr.s(slots=True, frozen=True)
class PublishedTable:

    title = attr.ib(type=str)
    cells = attr.ib(type=List[Cell])
    absolute_tolerance = attr.ib(type=int, default=0)
    relative_tolerance = attr.ib(type=float, default=0.0)

    def accepts(self, report):
        """
        Whether a converged report lands within this table's tolerance of the
        published sweep count.
        """
        if report.published is None or report.errored or not report.converged:
            return False
        allowed = max(
            self.absolute_tolerance, self.relative_tolerance * report.published
        )
        return abs(report.sweeps - report.published) <= allowed


def _non_empty(instance, attribute, value):
    if not value:
        raise ValueError("A benchmark needs at least one cell.")


@attr.s(slots=True, frozen=True)
class BenchConfig:

    cells = attr.ib(type=tuple, converter=tuple, validator=_non_empty)
    rule = attr.ib(type=StoppingRule, factory=StoppingRule)
    output_format = attr.ib(
        type=str, default="markdown", validator=attr.validators.in_(FORMATS)
    )
    output = attr.ib(type=Optional[str], default=None)
    history = attr.ib(type=Optional[str], default=None)
    jobs = attr.ib(type=int, default=1)
    table = attr.ib(type=Optional[PublishedTable], default=None)

    @jobs.validator
    def _check_jobs(self, attribute, value):
        if value < 1:
            raise ValueError(f"jobs must be at least 1, got {value}.")


def _read_tables():
    resource = importlib_resources.files("mdspm").joinpath("tables.json")
    return json.loads(resource.read_text(encoding="utf8"))


def load_published(name):
    tables = _read_tables()
    try:
        data = tables[name]
    except KeyError:
        raise ValueError(
            f"Unknown table {name!r}, expected one of {sorted(tables)}."
        ) from None
    return _cattr.structure(data, PublishedTable)


def published_names():
    return sorted(_read_tables())


def run_cell(cell, rule=None):
    """
    Builds the cell's problem and solves it. Failures are logged and come back as an
    errored RunReport rather than an exception.
    """
    logger.info("Running %s on %s.", cell.method.column, cell.problem.label)
    try:
        spec = build_problem(cell.problem)
        strategy, kernel = cell.method.build()
        _, report = solve(spec.operator, spec.b, spec.x0, strategy, rule, kernel=kernel)
    except Exception as exc:
        logger.exception(
            "Error running %s on %s.", cell.method.column, cell.problem.label
        )
        return RunReport(
            method=cell.method,
            problem=cell.problem,
            published=cell.published,
            error=f"{exc.__class__.__name__}: {exc}",
        )

    logger.info(
        "%s on %s: %s sweeps in %.0f ms.",
        cell.method.column,
        cell.problem.label,
        report.outcome,
        report.wall_ms,
    )
    return attr.evolve(
        report,
        problem=spec.descriptor,
        provenance=spec.provenance,
        published=cell.published,
    )


async def _run_cells(cells, rule, jobs):
    limiter = trio.CapacityLimiter(jobs)
    reports = [None] * len(cells)

    async def run_one(index, cell):
        reports[index] = await trio.to_thread.run_sync(
            partial(run_cell, cell, rule), limiter=limiter
        )

    async with trio.open_nursery() as nursery:
        for index, cell in enumerate(cells):
            nursery.start_soon(run_one, index, cell)

    return reports


def run_grid(config):
    """
    Runs every cell of ``config``, up to ``config.jobs`` at a time, returning the
    reports in cell order.
    """
    return trio.run(_run_cells, config.cells, config.rule, config.jobs)


def monotone_in_m(reports):
    """
    Returns the labels of problems whose converged mdspm sweep counts grow somewhere
    as m grows.
    """
    by_problem = {}
    for report in reports:
        if report.method.kind is MethodKind.mdspm and report.converged:
            by_problem.setdefault(report.problem.label, []).append(
                (report.method.m, report.sweeps)
            )

    violations = []
    for label, counts in by_problem.items():
        sweeps = [count for _, count in sorted(counts)]
        if any(later > earlier for earlier, later in zip(sweeps, sweeps[1:])):
            violations.append(label)
    return violations


def check_reports(reports, table=None):
    """
    Logs how a finished grid compares with its published counts and whether sweep
    counts are non-increasing in m. Returns True when nothing needed a warning.
    """
    clean = True
    if table is not None:
        for report in reports:
            if report.published is None or report.errored:
                continue
            if table.accepts(report):
                logger.info(
                    "%s on %s: %s sweeps, published %d.",
                    report.method.column,
                    report.problem.label,
                    report.outcome,
                    report.published,
                )
            else:
                clean = False
                logger.warning(
                    "%s on %s: %s sweeps, published %d.",
                    report.method.column,
                    report.problem.label,
                    report.outcome,
                    report.published,
                )

    for label in monotone_in_m(reports):
        clean = False
        logger.warning("Sweep counts on %s increase with m.", label)

    return clean
