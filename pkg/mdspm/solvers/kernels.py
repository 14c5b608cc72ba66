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

import enum
import logging

import attr
import numpy as np
import scipy.linalg

from mdspm.matrix import DimensionMismatch, NotPositiveDefinite, as_vector
from mdspm.matrix.operators import failed_pivot


logger = logging.getLogger(__name__)


# Relative threshold on ad - c^2 below which two directions count as dependent.
DEPENDENCE_TOLERANCE = 1e-14


class DependentDirections(ArithmeticError):
    def __init__(self, *args, gram_det, **kwargs):
        super().__init__(*args, **kwargs)

        self.gram_det = gram_det


class ZeroDirection(ValueError):
    pass


@enum.unique
class StepKernel(enum.Enum):
    projection = "projection"
    successive = "successive"


@attr.s(slots=True, frozen=True, eq=False)
class ProjectedSystem:

    indices = attr.ib()
    gram = attr.ib()
    rhs = attr.ib()


def extract_projected(op, indices, residual):
    if indices.n != op.n:
        raise DimensionMismatch(
            f"Index set built for n={indices.n}, operator has n={op.n}.",
            expected=op.n,
            actual=indices.n,
        )
    positions = indices.array
    return ProjectedSystem(
        indices=indices,
        gram=op.principal_submatrix(positions),
        rhs=residual[positions].copy(),
    )


def cholesky_solve(gram, rhs):
    gram = np.asarray(gram, dtype=np.float64)
    rhs = as_vector(rhs)
    if gram.ndim != 2 or gram.shape != (rhs.size, rhs.size) or rhs.size == 0:
        raise DimensionMismatch(
            f"Cannot solve a {gram.shape} system with a right hand side of length "
            f"{rhs.size}.",
            expected=(rhs.size, rhs.size),
            actual=gram.shape,
        )

    if rhs.size == 1:
        pivot = gram[0, 0]
        if not pivot > 0:
            raise NotPositiveDefinite(
                f"Non-positive pivot {pivot!r}; the matrix is not positive definite.",
                pivot=0,
            )
        return rhs / pivot

    try:
        factor = scipy.linalg.cho_factor(gram, lower=True, check_finite=False)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefinite(
            f"Cholesky factorization failed: {exc}", pivot=failed_pivot(exc)
        ) from None
    return scipy.linalg.cho_solve(factor, rhs, check_finite=False)


def projection_step(op, indices, state):
    """
    Projects onto the span of the identity columns in ``indices``, orthogonally to the
    same span, and returns the resulting drop in the squared A-norm of the error.

    Only the selected components of ``state.x`` change; the residual is updated from
    the matching columns of ``op``.
    """
    system = extract_projected(op, indices, state.residual)
    y = cholesky_solve(system.gram, system.rhs)

    positions = indices.array
    state.x[positions] += y
    state.residual -= op.combine_columns(positions, y)

    return float(system.rhs @ y)


def unit_vector(n, i):
    e = np.zeros(n)
    e[i] = 1.0
    return e


def _directions(op, v1, v2):
    v1 = as_vector(v1, op.n)
    v2 = as_vector(v2, op.n)
    if not v1.any() or not v2.any():
        raise ZeroDirection("Projection directions must be nonzero.")

    av1 = op.matvec(v1)
    av2 = op.matvec(v2)
    a, c, d = v1 @ av1, v1 @ av2, v2 @ av2
    if a <= 0.0 or d <= 0.0:
        raise NotPositiveDefinite(
            f"Non-positive direction energy (a = {a!r}, d = {d!r}); the matrix is "
            f"not positive definite.",
            pivot=0 if a <= 0.0 else 1,
        )
    return v1, v2, av1, av2, a, c, d


def oned_dspm_step(op, v1, v2, state):
    """
    Two successive one dimensional projections, first along ``v1`` then along ``v2``,
    folded into a single update x += alpha1 * v1 + beta2 * v2.

    Returns the drop in the squared A-norm of the error.
    """
    v1, v2, av1, av2, a, c, d = _directions(op, v1, v2)
    p1 = -(state.residual @ v1)
    p2 = -(state.residual @ v2)

    alpha1 = -p1 / a
    beta2 = (c * p1 - a * p2) / (a * d)

    state.x += alpha1 * v1 + beta2 * v2
    state.residual -= alpha1 * av1 + beta2 * av2

    return float(p1 * p1 / a + beta2 * beta2 * d)


def twod_dspm_step(op, v1, v2, state):
    """
    One projection onto span{v1, v2} written in closed form.

    Returns the drop in the squared A-norm of the error.
    """
    v1, v2, av1, av2, a, c, d = _directions(op, v1, v2)
    det = a * d - c * c
    if det < -DEPENDENCE_TOLERANCE * a * d:
        raise NotPositiveDefinite(
            f"Projected 2x2 system is indefinite (ad - c^2 = {det!r}).", pivot=1
        )
    elif det <= DEPENDENCE_TOLERANCE * a * d:
        raise DependentDirections(
            f"Directions are numerically dependent (ad - c^2 = {det!r}).",
            gram_det=det,
        )

    p1 = -(state.residual @ v1)
    p2 = -(state.residual @ v2)

    alpha = (c * p2 - d * p1) / det
    beta = (c * p1 - a * p2) / det

    state.x += alpha * v1 + beta * v2
    state.residual -= alpha * av1 + beta * av2

    return float(-alpha * p1 - beta * p2)
