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

import numpy as np
import scipy.linalg
import scipy.sparse


logger = logging.getLogger(__name__)


class IndexOutOfRange(IndexError):
    def __init__(self, *args, index, n, **kwargs):
        super().__init__(*args, **kwargs)

        self.index = index
        self.n = n


class DimensionMismatch(ValueError):
    def __init__(self, *args, expected, actual, **kwargs):
        super().__init__(*args, **kwargs)

        self.expected = expected
        self.actual = actual


class NotPositiveDefinite(ArithmeticError):
    def __init__(self, *args, pivot=None, **kwargs):
        super().__init__(*args, **kwargs)

        self.pivot = pivot


def as_vector(values, n=None):
    vector = np.asarray(values, dtype=np.float64)
    if vector.ndim != 1:
        raise DimensionMismatch(
            f"Expected a vector, got an array of shape {vector.shape}.",
            expected=n,
            actual=vector.shape,
        )
    if n is not None and vector.shape[0] != n:
        raise DimensionMismatch(
            f"Expected a vector of length {n}, got length {vector.shape[0]}.",
            expected=n,
            actual=vector.shape[0],
        )
    return vector


class SpdOperator(metaclass=abc.ABCMeta):
    """
    A symmetric positive definite matrix exposed through the access patterns the
    projection solvers need: single entries, whole columns and products.

    Operators are immutable once built, so one instance may back any number of
    concurrent solves.
    """

    @property
    @abc.abstractmethod
    def n(self):
        """
        The dimension of the (square) operator.
        """

    @abc.abstractmethod
    def _entry(self, i, j):
        """
        Returns A[i, j] for already validated indices.
        """

    @abc.abstractmethod
    def _column(self, j):
        """
        Returns a fresh dense copy of column j for an already validated index.
        """

    @abc.abstractmethod
    def _matvec(self, x):
        """
        Returns A @ x for a vector already checked against the dimension.
        """

    @abc.abstractmethod
    def to_dense(self):
        """
        Materializes the operator as a dense n x n array.
        """

    def _check_index(self, index):
        index = operator.index(index)
        if not 0 <= index < self.n:
            raise IndexOutOfRange(
                f"Index {index} out of range for an operator of dimension {self.n}.",
                index=index,
                n=self.n,
            )
        return index

    def _check_indices(self, indices):
        indices = np.asarray(indices, dtype=np.intp)
        if indices.ndim != 1:
            raise DimensionMismatch(
                "Expected a flat sequence of indices.",
                expected=1,
                actual=indices.ndim,
            )
        if indices.size and (indices.min() < 0 or indices.max() >= self.n):
            bad = int(indices[(indices < 0) | (indices >= self.n)][0])
            raise IndexOutOfRange(
                f"Index {bad} out of range for an operator of dimension {self.n}.",
                index=bad,
                n=self.n,
            )
        return indices

    def entry(self, i, j):
        return float(self._entry(self._check_index(i), self._check_index(j)))

    def column(self, j):
        return self._column(self._check_index(j))

    def matvec(self, x):
        return self._matvec(as_vector(x, self.n))

    def diagonal(self):
        return np.array([self._entry(i, i) for i in range(self.n)], dtype=np.float64)

    def principal_submatrix(self, indices):
        indices = self._check_indices(indices)
        return np.array(
            [[self._entry(i, j) for j in indices] for i in indices], dtype=np.float64
        )

    def combine_columns(self, indices, weights):
        """
        Returns sum(weights[k] * column(indices[k])), the update the residual needs
        after a projection step.
        """
        indices = self._check_indices(indices)
        weights = as_vector(weights, indices.size)

        out = np.zeros(self.n)
        for j, w in zip(indices, weights):
            out += w * self._column(j)
        return out

    def to_csc(self):
        return scipy.sparse.csc_matrix(self.to_dense())

    def __repr__(self):
        return f"<{self.__class__.__name__} n={self.n}>"


class DenseOperator(SpdOperator):
    def __init__(self, matrix):
        matrix = np.array(matrix, dtype=np.float64)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise DimensionMismatch(
                f"Expected a square matrix, got shape {matrix.shape}.",
                expected="square",
                actual=matrix.shape,
            )
        matrix.setflags(write=False)

        self._matrix = matrix

    @property
    def n(self):
        return self._matrix.shape[0]

    def _entry(self, i, j):
        return self._matrix[i, j]

    def _column(self, j):
        return self._matrix[:, j].copy()

    def _matvec(self, x):
        return self._matrix @ x

    def diagonal(self):
        return self._matrix.diagonal().copy()

    def principal_submatrix(self, indices):
        indices = self._check_indices(indices)
        return self._matrix[np.ix_(indices, indices)].copy()

    def combine_columns(self, indices, weights):
        indices = self._check_indices(indices)
        return self._matrix[:, indices] @ as_vector(weights, indices.size)

    def to_dense(self):
        return self._matrix.copy()


class StructuredOperator(SpdOperator):
    """
    A dense matrix with a constant ``background`` everywhere except the main
    diagonal (``diagonal``) and the first sub/super diagonals (``band``).

    Nothing of size n x n is ever stored: columns and products cost O(n).
    """

    def __init__(self, n, *, diagonal, band, background):
        n = operator.index(n)
        if n < 1:
            raise ValueError(f"Dimension must be positive, got {n}.")

        self._n = n
        self.diagonal_value = float(diagonal)
        self.band_value = float(band)
        self.background_value = float(background)

    @property
    def n(self):
        return self._n

    def _entry(self, i, j):
        offset = abs(i - j)
        if offset == 0:
            return self.diagonal_value
        elif offset == 1:
            return self.band_value
        return self.background_value

    def _column(self, j):
        col = np.full(self._n, self.background_value)
        col[j] = self.diagonal_value
        if j > 0:
            col[j - 1] = self.band_value
        if j < self._n - 1:
            col[j + 1] = self.band_value
        return col

    def _matvec(self, x):
        sigma = self.background_value
        y = np.full(self._n, sigma * x.sum())
        y += (self.diagonal_value - sigma) * x
        y[:-1] += (self.band_value - sigma) * x[1:]
        y[1:] += (self.band_value - sigma) * x[:-1]
        return y

    def diagonal(self):
        return np.full(self._n, self.diagonal_value)

    def principal_submatrix(self, indices):
        indices = self._check_indices(indices)
        offsets = np.abs(indices[:, None] - indices[None, :])
        return np.where(
            offsets == 0,
            self.diagonal_value,
            np.where(offsets == 1, self.band_value, self.background_value),
        )

    def combine_columns(self, indices, weights):
        indices = self._check_indices(indices)
        weights = as_vector(weights, indices.size)
        sigma = self.background_value

        out = np.full(self._n, sigma * weights.sum())
        np.add.at(out, indices, (self.diagonal_value - sigma) * weights)

        lower = indices > 0
        np.add.at(out, indices[lower] - 1, (self.band_value - sigma) * weights[lower])
        upper = indices < self._n - 1
        np.add.at(out, indices[upper] + 1, (self.band_value - sigma) * weights[upper])
        return out

    def to_dense(self):
        dense = np.full((self._n, self._n), self.background_value)
        np.fill_diagonal(dense, self.diagonal_value)
        rows = np.arange(self._n - 1)
        dense[rows, rows + 1] = self.band_value
        dense[rows + 1, rows] = self.band_value
        return dense

    def gershgorin_margin(self):
        """
        Returns the smallest gap between a diagonal entry and the absolute sum of the
        off diagonal entries of its row. A positive margin certifies positive
        definiteness of this symmetric form.
        """
        n = self._n
        band, background = abs(self.band_value), abs(self.background_value)
        if n == 1:
            return self.diagonal_value
        edge = band + (n - 2) * background
        interior = 2 * band + (n - 3) * background if n > 2 else edge
        return self.diagonal_value - max(edge, interior)

    def __repr__(self):
        return (
            f"<StructuredOperator n={self._n} diagonal={self.diagonal_value!r} "
            f"band={self.band_value!r} background={self.background_value!r}>"
        )


class CscOperator(SpdOperator):
    """
    A sparse operator stored in compressed column form. Columns are what the solvers
    consume, so entries and columns are read straight out of the CSC arrays.
    """

    def __init__(self, matrix):
        matrix = scipy.sparse.csc_matrix(matrix, dtype=np.float64)
        if matrix.shape[0] != matrix.shape[1]:
            raise DimensionMismatch(
                f"Expected a square matrix, got shape {matrix.shape}.",
                expected="square",
                actual=matrix.shape,
            )
        matrix.sum_duplicates()
        matrix.sort_indices()

        self._matrix = matrix
        self._indptr = matrix.indptr
        self._indices = matrix.indices
        self._data = matrix.data

    @property
    def n(self):
        return self._matrix.shape[0]

    @property
    def nnz(self):
        return self._matrix.nnz

    def _span(self, j):
        return self._indptr[j], self._indptr[j + 1]

    def _entry(self, i, j):
        start, end = self._span(j)
        rows = self._indices[start:end]
        k = np.searchsorted(rows, i)
        if k < rows.size and rows[k] == i:
            return self._data[start + k]
        return 0.0

    def _column(self, j):
        start, end = self._span(j)
        col = np.zeros(self.n)
        col[self._indices[start:end]] = self._data[start:end]
        return col

    def _matvec(self, x):
        return self._matrix @ x

    def diagonal(self):
        return self._matrix.diagonal()

    def principal_submatrix(self, indices):
        indices = self._check_indices(indices)
        sub = np.zeros((indices.size, indices.size))
        for k, j in enumerate(indices):
            start, end = self._span(j)
            rows = self._indices[start:end]
            if not rows.size:
                continue
            pos = np.searchsorted(rows, indices)
            found = pos < rows.size
            found[found] = rows[pos[found]] == indices[found]
            sub[found, k] = self._data[start + pos[found]]
        return sub

    def combine_columns(self, indices, weights):
        indices = self._check_indices(indices)
        weights = as_vector(weights, indices.size)

        out = np.zeros(self.n)
        for j, w in zip(indices, weights):
            start, end = self._span(j)
            out[self._indices[start:end]] += w * self._data[start:end]
        return out

    def to_dense(self):
        return self._matrix.toarray()

    def to_csc(self):
        return self._matrix.copy()

    def __repr__(self):
        return f"<CscOperator n={self.n} nnz={self.nnz}>"


def is_symmetric(op):
    """
    Exact symmetry check, comparing the stored entries of the CSC form with its
    transpose.
    """
    csc = op.to_csc()
    return (csc != csc.T).nnz == 0


def cholesky_certificate(op):
    """
    Proves positive definiteness by factorizing the densified operator, raising
    NotPositiveDefinite when the factorization breaks down.
    """
    try:
        scipy.linalg.cholesky(op.to_dense(), lower=True, check_finite=False)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefinite(
            f"Cholesky factorization failed: {exc}", pivot=failed_pivot(exc)
        ) from None


def failed_pivot(exc):
    # LAPACK reports the order of the leading minor, e.g. "3-th leading minor ...".
    head = str(exc).split("-th", 1)[0].strip()
    return int(head) - 1 if head.isdigit() else None
