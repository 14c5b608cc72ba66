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
import math
import os.path

from typing import Dict, Optional, Tuple

import arrow
import attr
import attr.validators

from mdspm.selection import Cyclic, Gap, GreedyTopM
from mdspm.solvers.kernels import StepKernel


@enum.unique
class Family(enum.Enum):
    example1 = "example1"
    example2 = "example2"
    example3 = "example3"
    matrix = "matrix"


@enum.unique
class MethodKind(enum.Enum):
    gap2d = "gap2d"
    oned_dspm = "1ddspm"
    gs = "gs"
    mdspm = "mdspm"


_FAMILY_ORDER = list(Family)
_KIND_ORDER = list(MethodKind)


_optional_int = attr.validators.optional(attr.validators.instance_of(int))


@attr.s(slots=True, frozen=True)
class ProblemDescriptor:

    family = attr.ib(type=Family, converter=Family)
    n = attr.ib(type=Optional[int], default=None, validator=_optional_int)
    case = attr.ib(type=Optional[int], default=None, validator=_optional_int)
    grid = attr.ib(type=Optional[int], default=None, validator=_optional_int)
    path = attr.ib(type=Optional[str], default=None)

    @property
    def label(self):
        if self.family is Family.example3:
            return f"{self.family.value}(case={self.case},grid={self.grid})"
        elif self.family is Family.matrix:
            return f"{self.family.value}({os.path.basename(self.path or '')})"
        return f"{self.family.value}(n={self.n})"

    @property
    def sort_key(self):
        return (
            _FAMILY_ORDER.index(self.family),
            self.case or 0,
            self.n or 0,
            self.grid or 0,
            self.path or "",
        )


@attr.s(slots=True, frozen=True)
class MethodDescriptor:
    """
    The name and parameters of a solver method, as flags and reports spell them.
    """

    kind = attr.ib(type=MethodKind, converter=MethodKind)
    m = attr.ib(type=Optional[int], default=None, validator=_optional_int)
    ij_gap = attr.ib(type=Optional[int], default=None, validator=_optional_int)

    def __attrs_post_init__(self):
        if self.kind is MethodKind.mdspm and self.m is None:
            raise ValueError("Method mdspm requires m.")
        if self.kind is not MethodKind.mdspm and self.m is not None:
            raise ValueError(f"Method {self.kind.value} does not take m.")
        if self.kind in {MethodKind.gap2d, MethodKind.oned_dspm}:
            if self.ij_gap is None:
                raise ValueError(f"Method {self.kind.value} requires ij_gap.")
        elif self.ij_gap is not None:
            raise ValueError(f"Method {self.kind.value} does not take ij_gap.")

    @classmethod
    def from_strategy(cls, strategy, kernel=StepKernel.projection):
        if isinstance(strategy, GreedyTopM):
            return cls(MethodKind.mdspm, m=strategy.m)
        elif isinstance(strategy, Gap):
            kind = (
                MethodKind.oned_dspm
                if kernel is StepKernel.successive
                else MethodKind.gap2d
            )
            return cls(kind, ij_gap=strategy.ij_gap)
        elif isinstance(strategy, Cyclic):
            return cls(MethodKind.gs)
        raise TypeError(f"Unknown selection strategy {strategy!r}.")

    def build(self):
        """
        Returns the (selection strategy, step kernel) pair implementing this method.
        """
        if self.kind is MethodKind.mdspm:
            return GreedyTopM(self.m), StepKernel.projection
        elif self.kind is MethodKind.gap2d:
            return Gap(self.ij_gap), StepKernel.projection
        elif self.kind is MethodKind.oned_dspm:
            return Gap(self.ij_gap), StepKernel.successive
        return Cyclic(), StepKernel.projection

    @property
    def label(self):
        return self.kind.value

    @property
    def params(self):
        if self.m is not None:
            return f"m={self.m}"
        elif self.ij_gap is not None:
            return f"ij_gap={self.ij_gap}"
        return ""

    @property
    def column(self):
        return f"{self.label} ({self.params})" if self.params else self.label

    @property
    def sort_key(self):
        return (_KIND_ORDER.index(self.kind), self.ij_gap or 0, self.m or 0)


@attr.s(slots=True, frozen=True)
class SweepRecord:

    sweep = attr.ib(type=int)
    dx_inf = attr.ib(type=float)
    res_2 = attr.ib(type=float)
    decrease = attr.ib(type=Optional[float], default=None)
    error_a_sq = attr.ib(type=Optional[float], default=None)


def _check_history(instance, attribute, value):
    if instance.error is None and len(value) != instance.sweeps:
        raise ValueError(
            f"A report of {instance.sweeps} sweeps needs as many history records, "
            f"got {len(value)}."
        )


@attr.s(slots=True, frozen=True)
class RunReport:

    method = attr.ib(type=MethodDescriptor)
    problem = attr.ib(type=Optional[ProblemDescriptor], default=None)
    sweeps = attr.ib(type=int, default=0)
    converged = attr.ib(type=bool, default=False)
    final_res_2 = attr.ib(type=float, default=math.nan)
    final_dx_inf = attr.ib(type=float, default=math.nan)
    wall_ms = attr.ib(type=float, default=0.0)
    history = attr.ib(
        type=Tuple[SweepRecord, ...],
        converter=tuple,
        default=(),
        validator=_check_history,
    )
    provenance = attr.ib(type=Dict[str, str], factory=dict)
    started = attr.ib(type=arrow.Arrow, factory=arrow.utcnow)
    published = attr.ib(type=Optional[int], default=None)
    error = attr.ib(type=Optional[str], default=None)

    @property
    def errored(self):
        return self.error is not None

    @property
    def outcome(self):
        if self.errored:
            return "error"
        elif not self.converged:
            return "not converged"
        return str(self.sweeps)
