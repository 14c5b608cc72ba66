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

import click

from mdspm.bench import (
    FORMATS,
    BenchConfig,
    Cell,
    check_reports,
    emit_table,
    load_published,
    published_names,
    run_grid,
    write_history,
)
from mdspm.logging import LEVELS, configure_logging
from mdspm.matrix import write_matrix_market
from mdspm.problems import build_problem
from mdspm.solvers import Family, MethodDescriptor, ProblemDescriptor, StoppingRule


EXIT_OK = 0
EXIT_USAGE = 1
EXIT_RUN_ERROR = 2


logger = logging.getLogger(__name__)


def _problem_descriptor(example, case, n, grid, matrix=None):
    if matrix is not None:
        if any(v is not None for v in (example, case, n, grid)):
            raise click.UsageError(
                "--matrix replaces the generated problems; drop --example, --case, "
                "--n and --grid."
            )
        return ProblemDescriptor(Family.matrix, path=matrix)

    if example is None:
        raise click.UsageError("Pass either --example or --matrix.")

    if example == "3":
        if n is not None:
            raise click.UsageError("--n does not apply to --example 3, use --grid.")
        if case is None:
            raise click.UsageError("--example 3 requires --case.")
        grid = 32 if grid is None else grid
        if grid < 2:
            raise click.UsageError("--grid must be at least 2.")
        return ProblemDescriptor(Family.example3, case=int(case), grid=grid)

    if case is not None or grid is not None:
        raise click.UsageError(
            f"--case and --grid only apply to --example 3, not --example {example}."
        )
    n = 1000 if n is None else n
    if n < 2:
        raise click.UsageError("--n must be at least 2.")
    return ProblemDescriptor(Family(f"example{example}"), n=n)


def _method_descriptor(method, m, ij_gap):
    if method is None:
        raise click.UsageError("Pass --method (or --reproduce).")
    try:
        return MethodDescriptor(method, m=m, ij_gap=ij_gap)
    except ValueError as exc:
        raise click.UsageError(str(exc)) from None


def _check_dimensions(problem, method):
    n = problem.n if problem.family is not Family.example3 else problem.grid ** 2
    if n is None:
        return
    if method.m is not None and not 1 <= method.m <= n:
        raise click.UsageError(f"--m must lie in [1, {n}] for {problem.label}.")
    if method.ij_gap is not None and not 0 < method.ij_gap < n:
        raise click.UsageError(f"--ij-gap must lie in (0, {n}) for {problem.label}.")


@click.group(
    context_settings={
        "auto_envvar_prefix": "MDSPM",
        "help_option_names": ["-h", "--help"],
        "max_content_width": 88,
    }
)
@click.option(
    "--log-level",
    type=click.Choice(LEVELS),
    default="info",
    show_default=True,
    help="The verbosity of the console logger.",
)
@click.option(
    "--log-file",
    type=click.Path(file_okay=True, dir_okay=False, writable=True, readable=True),
    help="A file to additionally send logging to.",
)
def cli(log_level, log_file):
    """
    Successive projection solvers for symmetric positive definite systems.

    Runs the m-dimensional successive projection method and its Gauss-Seidel,
    1D-DSPM and gap based 2D-DSPM relatives on generated or Matrix Market problems,
    and reproduces the published iteration count tables.
    """
    configure_logging(log_level, log_file)


def problem_options(fn):
    for option in reversed(
        [
            click.option(
                "--example",
                type=click.Choice(["1", "2", "3"]),
                help="Which generated problem family to use.",
            ),
            click.option(
                "--case",
                type=click.Choice(["1", "2", "3"]),
                help="The convection diffusion coefficients for --example 3.",
            ),
            click.option(
                "--n",
                type=int,
                metavar="N",
                help="The dimension for --example 1 and 2.  [default: 1000]",
            ),
            click.option(
                "--grid",
                type=int,
                metavar="G",
                help="Interior grid points per side for --example 3.  [default: 32]",
            ),
        ]
    ):
        fn = option(fn)
    return fn


@cli.command(short_help="Runs solvers and renders a table of sweep counts.")
@problem_options
@click.option(
    "--method",
    type=click.Choice(["mdspm", "gap2d", "1ddspm", "gs"]),
    help="The solver method.",
)
@click.option("--m", type=int, metavar="M", help="The subspace dimension for mdspm.")
@click.option(
    "--ij-gap",
    type=int,
    metavar="K",
    help="The index gap for gap2d and 1ddspm.",
)
@click.option(
    "--tol",
    type=float,
    default=1e-6,
    show_default=True,
    help="Stop once the infinity norm of the change across a sweep drops below this.",
)
@click.option(
    "--max-sweeps",
    type=int,
    default=10000,
    show_default=True,
    help="Give up (and report not converged) after this many sweeps.",
)
@click.option(
    "--matrix",
    type=click.Path(exists=True, file_okay=True, dir_okay=False, readable=True),
    metavar="FILE",
    help="A Matrix Market file to solve instead of a generated problem.",
)
@click.option(
    "--history",
    type=click.Path(file_okay=True, dir_okay=False, writable=True),
    metavar="FILE",
    help="Write the per sweep history of a single run as CSV.",
)
@click.option(
    "--format",
    "output_format",
    type=click.Choice(FORMATS),
    default="markdown",
    show_default=True,
    help="The table format.",
)
@click.option(
    "--output",
    type=click.Path(file_okay=True, dir_okay=False, writable=True),
    metavar="FILE",
    help="Write the table here instead of stdout.",
)
@click.option(
    "--jobs",
    type=click.IntRange(min=1),
    default=1,
    show_default=True,
    help="How many cells to run concurrently.",
)
@click.option(
    "--reproduce",
    type=click.Choice(published_names()),
    help="Run a full published grid instead of a single cell.",
)
def bench(
    example,
    case,
    n,
    grid,
    method,
    m,
    ij_gap,
    tol,
    max_sweeps,
    matrix,
    history,
    output_format,
    output,
    jobs,
    reproduce,
):
    """
    Runs one problem/method cell, or with --reproduce a whole published grid, and
    renders the sweep counts as a table.

    Exits with 2 when any cell failed to run.
    """
    if tol <= 0:
        raise click.BadParameter("must be positive.", param_hint="--tol")
    if max_sweeps < 1:
        raise click.BadParameter("must be at least 1.", param_hint="--max-sweeps")

    table = None
    if reproduce is not None:
        flags = {
            "example": example,
            "case": case,
            "n": n,
            "grid": grid,
            "method": method,
            "m": m,
            "ij-gap": ij_gap,
            "matrix": matrix,
            "history": history,
        }
        clashing = sorted(k for k, v in flags.items() if v is not None)
        if clashing:
            raise click.UsageError(
                "--reproduce runs a fixed grid; it cannot be combined with "
                + ", ".join(f"--{flag}" for flag in clashing)
                + "."
            )
        table = load_published(reproduce)
        cells = table.cells
    else:
        problem = _problem_descriptor(example, case, n, grid, matrix)
        descriptor = _method_descriptor(method, m, ij_gap)
        _check_dimensions(problem, descriptor)
        cells = [Cell(problem=problem, method=descriptor)]

    config = BenchConfig(
        cells=cells,
        rule=StoppingRule(tol=tol, max_sweeps=max_sweeps),
        output_format=output_format,
        output=output,
        history=history,
        jobs=jobs,
        table=table,
    )

    # Iterate over all of our configuration, and write out the values to the debug
    # logger to make it easier to see what a run actually picked up.
    for key, value in dict(
        cells=len(config.cells),
        tol=config.rule.tol,
        max_sweeps=config.rule.max_sweeps,
        output_format=config.output_format,
        output=config.output,
        history=config.history,
        jobs=config.jobs,
        reproduce=reproduce,
    ).items():
        logger.debug("Configuring %s to %r", key, value)

    reports = run_grid(config)
    check_reports(reports, config.table)

    text = emit_table(reports, config.output_format)
    if config.output is None:
        click.echo(text, nl=False)
    else:
        with open(config.output, "w", encoding="utf8") as fp:
            fp.write(text)

    if config.history is not None and not reports[0].errored:
        write_history(reports[0], config.history)

    return EXIT_RUN_ERROR if any(r.errored for r in reports) else EXIT_OK


@cli.command(short_help="Writes a generated problem's matrix to Matrix Market.")
@problem_options
@click.argument(
    "output", type=click.Path(file_okay=True, dir_okay=False, writable=True)
)
def export(example, case, n, grid, output):
    """
    Writes the operator of a generated problem to OUTPUT as a symmetric Matrix Market
    coordinate file.
    """
    descriptor = _problem_descriptor(example, case, n, grid)
    spec = build_problem(descriptor)
    write_matrix_market(spec.operator, output, comment=descriptor.label)
    logger.info("Wrote %s to %r.", descriptor.label, output)
    return EXIT_OK


def main(argv=None):
    """
    Runs the command line interface and returns its exit code: 0 on success, 1 on a
    usage error and 2 when a run failed.
    """
    try:
        rv = cli.main(args=argv, prog_name="mdspm", standalone_mode=False)
    except click.UsageError as exc:
        exc.show()
        return EXIT_USAGE
    except click.ClickException as exc:
        exc.show()
        return EXIT_RUN_ERROR
    except click.Abort:
        click.echo("Aborted!", err=True)
        return EXIT_USAGE
    return rv if isinstance(rv, int) else EXIT_OK
