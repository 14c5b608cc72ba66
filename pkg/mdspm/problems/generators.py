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

from typing import Callable, Dict

import attr
import numpy as np
import scipy.sparse

from mdspm.matrix import (
    CscOperator,
    NotPositiveDefinite,
    StructuredOperator,
    cholesky_certificate,
    read_matrix_market,
)
from mdspm.solvers.reports import Family, ProblemDescriptor


logger = logging.getLogger(__name__)


BACKGROUND = 0.5


class ProblemConstructionError(ValueError):
    pass


@attr.s(slots=True, frozen=True, eq=False)
class ProblemSpec:

    descriptor = attr.ib(type=ProblemDescriptor)
    operator = attr.ib()
    b = attr.ib()
    x0 = attr.ib()
    provenance = attr.ib(type=Dict[str, str], factory=dict)

    @property
    def n(self):
        return self.operator.n


def _zero(x, y):
    return np.zeros_like(x)


def _constant(value):
    def coefficient(x, y):
        return np.full_like(x, value)

    return coefficient


@attr.s(slots=True, frozen=True)
class PdeCoefficients:
    """
    Coefficients of -Laplace(u) + a u_x + b u_y + c u = f on the unit square, each a
    function of the (vectorized) grid coordinates x and y.
    """

    a = attr.ib(type=Callable, default=_zero)
    b = attr.ib(type=Callable, default=_zero)
    c = attr.ib(type=Callable, default=_zero)
    f = attr.ib(type=Callable, default=_zero)


CASES = {
    1: PdeCoefficients(
        a=_zero,
        b=lambda x, y: 10.0 * (x + y),
        c=lambda x, y: 10.0 * (x - y),
    ),
    2: PdeCoefficients(
        a=lambda x, y: -10.0 * (x + y),
        b=lambda x, y: -10.0 * (x - y),
        c=_constant(1.0),
    ),
    3: PdeCoefficients(
        a=lambda x, y: 10.0 * np.exp(x * y),
        b=lambda x, y: 10.0 * np.exp(-x * y),
        c=_zero,
    ),
}


def initial_guess(n):
    return 0.001 * np.arange(1, n + 1, dtype=np.float64)


def reference_solution(spec):
    return np.ones(spec.n)


def _finish(descriptor, operator, provenance=None):
    spec = ProblemSpec(
        descriptor=descriptor,
        operator=operator,
        b=operator.matvec(np.ones(operator.n)),
        x0=initial_guess(operator.n),
        provenance=provenance or {},
    )
    logger.debug("Built %s with n=%d.", descriptor.label, spec.n)
    return spec


def _build_structured(family, n, diagonal):
    if n < 2:
        raise ProblemConstructionError(f"{family.value} needs n >= 2, got {n}.")

    operator = StructuredOperator(n, diagonal=diagonal, band=n, background=BACKGROUND)
    margin = operator.gershgorin_margin()
    if margin <= 0:
        raise ProblemConstructionError(
            f"{family.value} with n={n} is not diagonally dominant (margin {margin})."
        )
    return _finish(ProblemDescriptor(family, n=n), operator)


def build_example1(n):
    return _build_structured(Family.example1, n, diagonal=4 * n)


def build_example2(n):
    return _build_structured(Family.example2, n, diagonal=3 * n)


def discretize(coefficients, grid):
    """
    Returns the (nonsymmetric) five point finite difference matrix of the convection
    diffusion operator on the grid x grid interior points of the unit square, with zero
    Dirichlet boundary values and row-major (natural) ordering.
    """
    if grid < 2:
        raise ProblemConstructionError(f"grid must be at least 2, got {grid}.")

    h = 1.0 / (grid + 1)
    ix, iy = np.meshgrid(np.arange(grid), np.arange(grid), indexing="xy")
    ix, iy = ix.ravel(), iy.ravel()
    x, y = (ix + 1) * h, (iy + 1) * h
    k = iy * grid + ix

    a = np.broadcast_to(coefficients.a(x, y), k.shape)
    b = np.broadcast_to(coefficients.b(x, y), k.shape)
    c = np.broadcast_to(coefficients.c(x, y), k.shape)

    inv_h2 = 1.0 / (h * h)
    inv_2h = 1.0 / (2.0 * h)

    rows = [k]
    cols = [k]
    vals = [4.0 * inv_h2 + c]
    for mask, offset, convection in (
        (ix < grid - 1, 1, a * inv_2h),
        (ix > 0, -1, -a * inv_2h),
        (iy < grid - 1, grid, b * inv_2h),
        (iy > 0, -grid, -b * inv_2h),
    ):
        rows.append(k[mask])
        cols.append(k[mask] + offset)
        vals.append(-inv_h2 + convection[mask])

    n = grid * grid
    return scipy.sparse.csc_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=(n, n),
    )


def build_example3(case, grid, *, coefficients=None):
    """
    Builds the convection diffusion test matrix for ``case`` (1, 2 or 3) on a
    grid x grid mesh. The raw matrix is nonsymmetric; the operator is its symmetric
    part (M + M^T) / 2, which must pass a Cholesky factorization.
    """
    if coefficients is None:
        try:
            coefficients = CASES[case]
        except KeyError:
            raise ProblemConstructionError(
                f"Unknown case {case!r}, expected one of {sorted(CASES)}."
            ) from None

    raw = discretize(coefficients, grid)
    operator = CscOperator((raw + raw.T) * 0.5)
    try:
        cholesky_certificate(operator)
    except NotPositiveDefinite as exc:
        raise ProblemConstructionError(
            f"Symmetrized case {case} on a {grid}x{grid} grid is not positive "
            f"definite: {exc}"
        ) from exc

    return _finish(
        ProblemDescriptor(Family.example3, case=case, grid=grid),
        operator,
        {"symmetrized": "(M + M^T) / 2"},
    )


def load_matrix(path):
    """
    Loads a Matrix Market operator and pairs it with the same right hand side
    (b = A e) and initial guess the generated problems use.
    """
    operator = read_matrix_market(path)
    return _finish(
        ProblemDescriptor(Family.matrix, n=operator.n, path=str(path)),
        operator,
        {"source": str(path)},
    )


def build_problem(descriptor):
    if descriptor.family is Family.example1:
        return build_example1(descriptor.n)
    elif descriptor.family is Family.example2:
        return build_example2(descriptor.n)
    elif descriptor.family is Family.example3:
        return build_example3(descriptor.case, descriptor.grid)
    return load_matrix(descriptor.path)
