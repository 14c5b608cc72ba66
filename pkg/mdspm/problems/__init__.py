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

from mdspm.problems.generators import (
    CASES,
    PdeCoefficients,
    ProblemConstructionError,
    ProblemSpec,
    build_example1,
    build_example2,
    build_example3,
    build_problem,
    discretize,
    initial_guess,
    load_matrix,
    reference_solution,
)


__all__ = [
    "CASES",
    "PdeCoefficients",
    "ProblemConstructionError",
    "ProblemSpec",
    "build_example1",
    "build_example2",
    "build_example3",
    "build_problem",
    "discretize",
    "initial_guess",
    "load_matrix",
    "reference_solution",
]
