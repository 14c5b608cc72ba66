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

from mdspm.matrix.operators import (
    CscOperator,
    DenseOperator,
    DimensionMismatch,
    IndexOutOfRange,
    NotPositiveDefinite,
    SpdOperator,
    StructuredOperator,
    as_vector,
    cholesky_certificate,
    is_symmetric,
)
from mdspm.matrix.market import (
    MatrixMarketError,
    parse_matrix_market,
    read_matrix_market,
    write_matrix_market,
)


__all__ = [
    "CscOperator",
    "DenseOperator",
    "DimensionMismatch",
    "IndexOutOfRange",
    "MatrixMarketError",
    "NotPositiveDefinite",
    "SpdOperator",
    "StructuredOperator",
    "as_vector",
    "cholesky_certificate",
    "is_symmetric",
    "parse_matrix_market",
    "read_matrix_market",
    "write_matrix_market",
]
