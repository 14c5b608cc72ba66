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

from mdspm.solvers.kernels import (
    DependentDirections,
    ProjectedSystem,
    StepKernel,
    ZeroDirection,
    cholesky_solve,
    extract_projected,
    oned_dspm_step,
    projection_step,
    twod_dspm_step,
    unit_vector,
)
from mdspm.solvers.reports import (
    Family,
    MethodDescriptor,
    MethodKind,
    ProblemDescriptor,
    RunReport,
    SweepRecord,
)
from mdspm.solvers.engine import SolverState, StoppingRule, solve, sweep
from mdspm.solvers.diagnostics import (
    a_norm_drop,
    a_norm_sq,
    decrease_identity_check,
    error_a_norm_sq,
    estimate_lambda_max,
    greedy_bound_check,
    residual_drift,
)


__all__ = [
    "DependentDirections",
    "Family",
    "MethodDescriptor",
    "MethodKind",
    "ProblemDescriptor",
    "ProjectedSystem",
    "RunReport",
    "SolverState",
    "StepKernel",
    "StoppingRule",
    "SweepRecord",
    "ZeroDirection",
    "a_norm_drop",
    "a_norm_sq",
    "cholesky_solve",
    "decrease_identity_check",
    "error_a_norm_sq",
    "estimate_lambda_max",
    "extract_projected",
    "greedy_bound_check",
    "oned_dspm_step",
    "projection_step",
    "residual_drift",
    "solve",
    "sweep",
    "twod_dspm_step",
    "unit_vector",
]
