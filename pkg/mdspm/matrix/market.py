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

import numpy as np
import scipy.io
import scipy.sparse

from pyparsing import CaselessKeyword as K, Literal as L, Regex, Word, nums
from pyparsing import ParseException

from .operators import CscOperator, is_symmetric


logger = logging.getLogger(__name__)


class MatrixMarketError(ValueError):
    def __init__(self, *args, lineno, **kwargs):
        super().__init__(*args, **kwargs)

        self.lineno = lineno

    def __str__(self):
        return f"line {self.lineno}: {super().__str__()}"


BANNER = L("%%MatrixMarket").suppress()

OBJECT = K("matrix")
OBJECT = OBJECT.setResultsName("object")
OBJECT.setName("Object")

FORMAT = K("coordinate") | K("array")
FORMAT = FORMAT.setResultsName("format")
FORMAT.setName("Format")

FIELD = K("real") | K("double") | K("integer") | K("complex") | K("pattern")
FIELD = FIELD.setResultsName("field")
FIELD.setName("Field")

SYMMETRY = K("general") | K("symmetric") | K("skew-symmetric") | K("hermitian")
SYMMETRY = SYMMETRY.setResultsName("symmetry")
SYMMETRY.setName("Symmetry")

HEADER = BANNER + OBJECT + FORMAT + FIELD + SYMMETRY

INTEGER = Word(nums)
INTEGER.setName("Integer")
INTEGER.setParseAction(lambda s, l, t: int(t[0]))

REAL = Regex(r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eEdD][+-]?\d+)?")
REAL.setName("Real")
REAL.setParseAction(lambda s, l, t: float(t[0].replace("d", "e").replace("D", "e")))

COORDINATE_SIZE = (
    INTEGER.setResultsName("rows")
    + INTEGER.setResultsName("columns")
    + INTEGER.setResultsName("entries")
)
ARRAY_SIZE = INTEGER.setResultsName("rows") + INTEGER.setResultsName("columns")

COORDINATE_ENTRY = (
    INTEGER.setResultsName("row")
    + INTEGER.setResultsName("column")
    + REAL.setResultsName("value")
)
ARRAY_ENTRY = REAL.setResultsName("value")


def _parse(grammar, line, lineno, what):
    try:
        return grammar.parseString(line, parseAll=True)
    except ParseException as exc:
        raise MatrixMarketError(f"Malformed {what}: {exc}", lineno=lineno) from None


def _data_lines(numbered):
    for lineno, line in numbered:
        stripped = line.strip()
        if stripped and not stripped.startswith("%"):
            yield lineno, stripped


def _next_data_line(data, last_lineno, what):
    try:
        return next(data)
    except StopIteration:
        raise MatrixMarketError(
            f"Unexpected end of file, expected {what}.", lineno=last_lineno + 1
        ) from None


def parse_matrix_market(lines):
    """
    Parses the text of a Matrix Market file into a CscOperator.

    Only real (or integer) square matrices are accepted. ``symmetric`` files must store
    the lower triangle, which gets expanded; ``general`` files must hold a symmetric
    matrix.
    """
    numbered = enumerate(lines, start=1)

    lineno, banner = next(numbered, (1, ""))
    header = _parse(HEADER, banner, lineno, "header")
    if header.field in {"complex", "pattern"}:
        raise MatrixMarketError(
            f"Unsupported field {header.field!r}, expected real values.", lineno=lineno
        )
    if header.symmetry not in {"general", "symmetric"}:
        raise MatrixMarketError(
            f"Unsupported symmetry {header.symmetry!r} for a symmetric positive "
            f"definite operator.",
            lineno=lineno,
        )
    symmetric = header.symmetry == "symmetric"

    data = _data_lines(numbered)
    lineno, text = _next_data_line(data, lineno, "a size line")
    if header.format == "coordinate":
        size = _parse(COORDINATE_SIZE, text, lineno, "size line")
    else:
        size = _parse(ARRAY_SIZE, text, lineno, "size line")
    if size.rows != size.columns:
        raise MatrixMarketError(
            f"Matrix must be square, got {size.rows}x{size.columns}.", lineno=lineno
        )
    n = size.rows

    if header.format == "coordinate":
        entries, lineno = _read_coordinate(data, n, size.entries, symmetric, lineno)
    else:
        entries, lineno = _read_array(data, n, symmetric, lineno)

    for extra_lineno, _ in data:
        raise MatrixMarketError(
            "Unexpected data after the last entry.", lineno=extra_lineno
        )

    if not symmetric:
        _check_mirrored(entries)

    rows, cols, values = [], [], []
    for (i, j), (value, _) in entries.items():
        rows.append(i)
        cols.append(j)
        values.append(value)
        if symmetric and i != j:
            rows.append(j)
            cols.append(i)
            values.append(value)

    matrix = scipy.sparse.csc_matrix(
        (np.array(values, dtype=np.float64), (rows, cols)), shape=(n, n)
    )
    logger.debug(
        "Parsed a %dx%d Matrix Market operator with %d entries.", n, n, len(values)
    )
    return CscOperator(matrix)


def _read_coordinate(data, n, count, symmetric, lineno):
    entries = {}
    for _ in range(count):
        lineno, text = _next_data_line(data, lineno, "another entry")
        parsed = _parse(COORDINATE_ENTRY, text, lineno, "entry")
        i, j = parsed.row - 1, parsed.column - 1
        if not (0 <= i < n and 0 <= j < n):
            raise MatrixMarketError(
                f"Entry ({parsed.row}, {parsed.column}) outside a {n}x{n} matrix.",
                lineno=lineno,
            )
        if symmetric and i < j:
            raise MatrixMarketError(
                f"Entry ({parsed.row}, {parsed.column}) lies above the diagonal of a "
                f"symmetric matrix.",
                lineno=lineno,
            )
        if (i, j) in entries:
            raise MatrixMarketError(
                f"Duplicate entry ({parsed.row}, {parsed.column}).", lineno=lineno
            )
        entries[(i, j)] = (parsed.value, lineno)
    return entries, lineno


def _read_array(data, n, symmetric, lineno):
    entries = {}
    for j in range(n):
        for i in range(j if symmetric else 0, n):
            lineno, text = _next_data_line(data, lineno, "another value")
            value = _parse(ARRAY_ENTRY, text, lineno, "value").value
            if value != 0.0:
                entries[(i, j)] = (value, lineno)
    return entries, lineno


def _check_mirrored(entries):
    for (i, j), (value, lineno) in sorted(entries.items(), key=lambda e: e[1][1]):
        mirrored, _ = entries.get((j, i), (0.0, None))
        if mirrored != value:
            raise MatrixMarketError(
                f"Matrix is not symmetric: entry ({i + 1}, {j + 1}) is {value!r} but "
                f"({j + 1}, {i + 1}) is {mirrored!r}.",
                lineno=lineno,
            )


def read_matrix_market(path):
    with open(path, "r", encoding="utf8") as fp:
        return parse_matrix_market(fp)


def write_matrix_market(op, path, *, comment=None):
    """
    Writes ``op`` as a symmetric coordinate file holding its lower triangle.
    """
    if not is_symmetric(op):
        raise ValueError(
            "Only symmetric operators can be written in symmetric storage."
        )

    lower = scipy.sparse.tril(op.to_csc(), format="csc")
    scipy.io.mmwrite(
        path,
        lower,
        comment=comment or "",
        field="real",
        precision=17,
        symmetry="symmetric",
    )

    logger.debug("Wrote %r with %d stored entries.", path, lower.nnz)
