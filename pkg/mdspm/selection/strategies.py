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

import abc
import logging
import operator

import attr
import attr.validators
import numpy as np

from mdspm.matrix import as_vector


logger = logging.getLogger(__name__)


def _as_indices(values):
    return tuple(operator.index(v) for v in values)


def _validate_indices(instance, attribute, value):
    if not 1 <= len(value) <= instance.n:
        raise ValueError(
            f"An index set needs between 1 and {instance.n} indices, got {len(value)}."
        )
    if any(a >= b for a, b in zip(value, value[1:])):
        raise ValueError(f"Indices must be strictly increasing, got {value!r}.")
    if value[0] < 0 or value[-1] >= instance.n:
        raise ValueError(f"Indices {value!r} fall outside [0, {instance.n}).")


@attr.s(slots=True, frozen=True)
class IndexSet:
    """
    The ordered columns of the identity spanning one projection subspace.
    """

    n = attr.ib(type=int, validator=attr.validators.instance_of(int))
    indices = attr.ib(type=tuple, converter=_as_indices, validator=_validate_indices)

    @property
    def m(self):
        return len(self.indices)

    @property
    def array(self):
        return np.array(self.indices, dtype=np.intp)

    def __iter__(self):
        return iter(self.indices)

    def __len__(self):
        return len(self.indices)

    def __contains__(self, index):
        return index in self.indices


def top_m_indices(residual, m):
    """
    Returns the ``m`` positions of ``residual`` with the largest magnitude, sorted
    ascending. Among equal magnitudes the smaller index wins.
    """
    magnitude = np.abs(as_vector(residual))
    n = magnitude.size
    if not 1 <= m <= n:
        raise ValueError(f"m must lie in [1, {n}], got {m}.")
    if m == n:
        return IndexSet(n, range(n))

    # np.partition is O(n); only the threshold value needs exact tie handling.
    threshold = np.partition(magnitude, n - m)[n - m]
    above = np.flatnonzero(magnitude > threshold)
    ties = np.flatnonzero(magnitude == threshold)[: m - above.size]
    return IndexSet(n, np.sort(np.concatenate((above, ties))))


def gap_indices(i, ij_gap, n):
    """
    Returns the pair {i, i - ij_gap}, wrapping around by n when the second index would
    be negative. ``i`` is 0-based.
    """
    if not 0 < ij_gap < n:
        raise ValueError(f"ij_gap must lie in (0, {n}), got {ij_gap}.")
    if not 0 <= i < n:
        raise ValueError(f"i must lie in [0, {n}), got {i}.")

    j = i - ij_gap
    if j < 0:
        j += n
    return IndexSet(n, sorted((i, j)))


class SelectionStrategy(metaclass=abc.ABCMeta):
    @property
    @abc.abstractmethod
    def name(self):
        """
        A short name for this strategy, useful for logging and reports.
        """

    @abc.abstractmethod
    def validate(self, n):
        """
        Raises ValueError when this strategy cannot run on a system of dimension n.
        """

    @abc.abstractmethod
    def select(self, step, residual):
        """
        Returns the IndexSet for inner step ``step`` (0-based) given the current
        residual.
        """


@attr.s(slots=True, frozen=True)
class GreedyTopM(SelectionStrategy):

    m = attr.ib(type=int, validator=attr.validators.instance_of(int))

    @m.validator
    def _check_m(self, attribute, value):
        if value < 1:
            raise ValueError(f"m must be at least 1, got {value}.")

    @property
    def name(self):
        return f"greedy top-{self.m}"

    def validate(self, n):
        if self.m > n:
            raise ValueError(f"m={self.m} exceeds the dimension n={n}.")

    def select(self, step, residual):
        return top_m_indices(residual, self.m)


@attr.s(slots=True, frozen=True)
class Gap(SelectionStrategy):

    ij_gap = attr.ib(type=int, validator=attr.validators.instance_of(int))

    @ij_gap.validator
    def _check_gap(self, attribute, value):
        if value < 1:
            raise ValueError(f"ij_gap must be positive, got {value}.")

    @property
    def name(self):
        return f"gap {self.ij_gap}"

    def validate(self, n):
        if self.ij_gap >= n:
            raise ValueError(f"ij_gap={self.ij_gap} must be less than n={n}.")

    def select(self, step, residual):
        return gap_indices(step, self.ij_gap, residual.shape[0])


@attr.s(slots=True, frozen=True)
class Cyclic(SelectionStrategy):
    @property
    def name(self):
        return "cyclic"

    def validate(self, n):
        pass

    def select(self, step, residual):
        return IndexSet(residual.shape[0], (step,))
