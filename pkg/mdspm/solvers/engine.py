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
import math
import time

import arrow
import attr
import attr.validators
import numpy as np

from mdspm.logging import SPEW as log_SPEW, spewing
from mdspm.matrix import as_vector
from mdspm.solvers.reports import MethodDescriptor, RunReport, SweepRecord
from mdspm.solvers.kernels import (
    StepKernel,
    oned_dspm_step,
    projection_step,
    unit_vector,
)


logger = logging.getLogger(__name__)


def _float_copy(values):
    return np.array(values, dtype=np.float64)


@attr.s(slots=True, eq=False)
class SolverState:
    """
    The iterate, its residual b - Ax (maintained incrementally) and the per sweep
    history of a single run. A state belongs to exactly one run.
    """

    x = attr.ib(converter=_float_copy)
    residual = attr.ib(converter=_float_copy)
    sweep = attr.ib(type=int, default=0)
    history = attr.ib(factory=list)

    @classmethod
    def initial(cls, op, b, x0):
        b = as_vector(b, op.n)
        x = as_vector(x0, op.n)
        return cls(x=x, residual=b - op.matvec(x))

    def copy(self):
        return SolverState(
            x=self.x,
            residual=self.residual,
            sweep=self.sweep,
            history=list(self.history),
        )


def _positive(instance, attribute, value):
    if not value > 0:
        raise ValueError(f"{attribute.name} must be positive, got {value!r}.")


@attr.s(slots=True, frozen=True)
class StoppingRule:
    """
    Stop once the infinity norm of the change of x across a full sweep drops below
    ``tol``, or after ``max_sweeps`` sweeps.
    """

    tol = attr.ib(type=float, default=1e-6, converter=float, validator=_positive)
    max_sweeps = attr.ib(
        type=int,
        default=10000,
        validator=[attr.validators.instance_of(int), _positive],
    )


def _apply_step(op, indices, step, state, kernel):
    if kernel is StepKernel.projection or len(indices) == 1:
        return projection_step(op, indices, state)

    if len(indices) != 2:
        raise ValueError(
            f"The successive kernel works on index pairs, got {len(indices)} indices."
        )
    # The current index goes first, its partner second.
    first = step if step in indices else indices.indices[0]
    (second,) = [i for i in indices if i != first]
    return oned_dspm_step(
        op, unit_vector(op.n, first), unit_vector(op.n, second), state
    )


def sweep(
    op, strategy, state, *, kernel=StepKernel.projection, x_star=None, on_step=None
):
    """
    Runs one outer iteration: n inner steps, each selecting an index set from the
    strategy and projecting onto it. Appends a SweepRecord to ``state.history`` and
    returns it.

    ``on_step(indices, residual_before, decrease)`` is called after every inner step.
    """
    x_start = state.x.copy()
    total = 0.0
    trace = spewing(logger)

    for step in range(op.n):
        # Every step is a no-op once the residual is exactly zero.
        if not state.residual.any():
            break

        indices = strategy.select(step, state.residual)
        before = state.residual.copy() if on_step is not None else None
        decrease = _apply_step(op, indices, step, state, kernel)
        total += decrease

        if trace:
            logger.log(
                log_SPEW,
                "Step %d on %r decreased by %r",
                step,
                indices.indices,
                decrease,
            )
        if on_step is not None:
            on_step(indices, before, decrease)

    state.sweep += 1
    error_a_sq = None
    if x_star is not None:
        error = x_star - state.x
        error_a_sq = float(error @ op.matvec(error))

    record = SweepRecord(
        sweep=state.sweep,
        dx_inf=float(np.max(np.abs(state.x - x_start))),
        res_2=float(np.linalg.norm(state.residual)),
        decrease=total,
        error_a_sq=error_a_sq,
    )
    state.history.append(record)
    return record


def solve(
    op,
    b,
    x0,
    strategy,
    rule=None,
    *,
    kernel=StepKernel.projection,
    x_star=None,
    on_step=None,
):
    """
    Sweeps until the stopping rule is met, returning the final state and a RunReport.
    Hitting ``rule.max_sweeps`` gives a report with ``converged=False``, not an error.
    """
    if rule is None:
        rule = StoppingRule()
    strategy.validate(op.n)
    if x_star is not None:
        x_star = as_vector(x_star, op.n)

    method = MethodDescriptor.from_strategy(strategy, kernel)
    state = SolverState.initial(op, b, x0)

    started = arrow.utcnow()
    clock = time.perf_counter()
    converged = False
    dx_inf = math.nan

    while state.sweep < rule.max_sweeps:
        record = sweep(
            op, strategy, state, kernel=kernel, x_star=x_star, on_step=on_step
        )
        dx_inf = record.dx_inf
        logger.debug(
            "%s sweep %d: dx_inf=%.3e res_2=%.3e",
            method.column,
            record.sweep,
            record.dx_inf,
            record.res_2,
        )
        if dx_inf < rule.tol:
            converged = True
            break

    wall_ms = (time.perf_counter() - clock) * 1000.0
    if not converged:
        logger.warning(
            "%s did not converge within %d sweeps (dx_inf=%.3e).",
            method.column,
            rule.max_sweeps,
            dx_inf,
        )

    report = RunReport(
        method=method,
        sweeps=state.sweep,
        converged=converged,
        final_res_2=float(np.linalg.norm(state.residual)),
        final_dx_inf=dx_inf,
        wall_ms=wall_ms,
        history=state.history,
        started=started,
    )
    return state, report
