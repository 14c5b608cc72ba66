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

from mdspm.bench.runner import (
    FORMATS,
    BenchConfig,
    Cell,
    PublishedTable,
    check_reports,
    load_published,
    monotone_in_m,
    published_names,
    run_cell,
    run_grid,
)
from mdspm.bench.tables import CSV_HEADER, HISTORY_HEADER, emit_table, write_history


__all__ = [
    "CSV_HEADER",
    "FORMATS",
    "HISTORY_HEADER",
    "BenchConfig",
    "Cell",
    "PublishedTable",
    "check_reports",
    "emit_table",
    "load_published",
    "monotone_in_m",
    "published_names",
    "run_cell",
    "run_grid",
    "write_history",
]
