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

import numpy as np

from mdspm.matrix import as_vector


logger = logging.getLogger(__name__)


def a_norm_sq(op, v):
    v = as_vector(v, op.n)
    return float(v @ op.matvec(v))


def error_a_norm_sq(op, x_star, x):
    return a_norm_sq(op, as_vector(x_star, op.n) - as_vector(x, op.n))


def a_norm_drop(op, x_star, x_before, x_after):
    """
    ||x* - x_before||_A^2 - ||x* - x_after||_A^2, evaluated as
    (x_after - x_before)^T A (2 x* - x_before - x_after) so that small drops are not
    lost to cancellation.
    """
    x_star = as_vector(x_star, op.n)
    step = as_vector(x_after, op.n) - as_vector(x_before, op.n)
    return float(step @ op.matvec(2.0 * x_star - x_before - x_after))


def decrease_identity_check(
    op, x_star, state_before, state_after, s_returned, *, rel_tol=1e-9
):
    """
    Whether the squared A-norm error drop between the two states equals the decrease
    a projection step reported, relative to the size of the error before the step.
    """
    drop = a_norm_drop(op, x_star, state_before.x, state_after.x)
    scale = max(abs(s_returned), error_a_norm_sq(op, x_star, state_before.x))
    return math.isclose(drop, s_returned, rel_tol=rel_tol, abs_tol=rel_tol * scale)


def greedy_bound_check(op, residual, m, lambda_max, s, *, slack=1e-12):
    """
    Whether a greedy top-m step on ``residual`` decreased the squared A-norm error by
    at least m / (n * lambda_max) * ||r||^2.
    """
    residual = as_vector(residual, op.n)
    bound = m / (op.n * lambda_max) * float(residual @ residual)
    return s >= bound - slack


def estimate_lambda_max(op, *, tol=1e-8, max_iter=10000, inflate=1e-6, seed=0):
    """
    Estimates the largest eigenvalue of ``op`` by power iteration from a seeded random
    positive vector, stopping once the Rayleigh quotient changes by less than ``tol``
    relative, then inflates it by ``inflate`` relative so it can serve as an upper
    bound.
    """
    v = np.random.RandomState(seed).uniform(0.5, 1.5, op.n)
    v /= np.linalg.norm(v)
    estimate = 0.0
    for iteration in range(1, max_iter + 1):
        w = op.matvec(v)
        previous, estimate = estimate, float(v @ w)
        norm = np.linalg.norm(w)
        if norm == 0.0:
            return 0.0
        v = w / norm
        if abs(estimate - previous) <= tol * abs(estimate):
            break
    else:
        logger.warning(
            "Power iteration stopped after %d iterations without reaching %g.",
            max_iter,
            tol,
        )

    logger.debug("lambda_max estimate %r after %d iterations.", estimate, iteration)
    return estimate * (1.0 + inflate)


def residual_drift(op, b, state):
    """
    Relative distance between the incrementally maintained residual and b - Ax.
    """
    b = as_vector(b, op.n)
    true_residual = b - op.matvec(state.x)
    scale = np.linalg.norm(b) or 1.0
    return float(np.linalg.norm(true_residual - state.residual) / scale)
