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

import csv
import io
import json

import arrow
import cattr


CSV_HEADER = (
    "problem",
    "method",
    "params",
    "sweeps",
    "converged",
    "final_res_2",
    "final_dx_inf",
    "wall_ms",
)

HISTORY_HEADER = ("sweep", "dx_inf", "res_2")


_cattr = cattr.Converter()
_cattr.register_unstructure_hook(arrow.Arrow, lambda o: o.float_timestamp)


def _problem_key(problem):
    # Reports straight from solve() carry no problem; they sort first.
    return () if problem is None else (problem.sort_key,)


def _problem_label(problem):
    return "" if problem is None else problem.label


def order_reports(reports):
    return sorted(reports, key=lambda r: (_problem_key(r.problem), r.method.sort_key))


def _real(value):
    return f"{value:.6e}"


def _csv(reports):
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for report in reports:
        if report.errored:
            row = ["", "error", "", ""]
        else:
            row = [
                report.sweeps,
                "true" if report.converged else "false",
                _real(report.final_res_2),
                _real(report.final_dx_inf),
            ]
        writer.writerow(
            [_problem_label(report.problem), report.method.label, report.method.params]
            + row
            + [f"{report.wall_ms:.1f}"]
        )
    return out.getvalue()


def _markdown_cell(report):
    if report is None:
        return ""
    elif report.errored:
        return "error"
    elif not report.converged:
        text = f"not converged ({report.sweeps})"
    else:
        text = str(report.sweeps)

    if report.published is not None:
        text += f" (published {report.published})"
    return text


def _markdown(reports):
    methods = sorted({r.method for r in reports}, key=lambda m: m.sort_key)
    problems = sorted({r.problem for r in reports}, key=_problem_key)
    cells = {(r.problem, r.method): r for r in reports}

    lines = [
        "| " + " | ".join(["Problem"] + [m.column for m in methods]) + " |",
        "|" + "|".join(["---"] * (len(methods) + 1)) + "|",
    ]
    for problem in problems:
        row = [_problem_label(problem)] + [
            _markdown_cell(cells.get((problem, method))) for method in methods
        ]
        lines.append("| " + " | ".join(row) + " |")

    notes = []
    for problem in problems:
        provenance = next(
            (r.provenance for r in reports if r.problem == problem and r.provenance),
            None,
        )
        if provenance:
            details = ", ".join(f"{k}: {v}" for k, v in sorted(provenance.items()))
            notes.append(f"- {_problem_label(problem)}: {details}")
    for report in reports:
        if report.errored:
            notes.append(
                f"- {report.method.column} on {_problem_label(report.problem)} failed: "
                f"{report.error}"
            )
    if notes:
        lines.append("")
        lines.extend(notes)

    return "\n".join(lines) + "\n"


def _json(reports):
    data = _cattr.unstructure(list(reports))
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


_RENDERERS = {"csv": _csv, "markdown": _markdown, "json": _json}


def emit_table(reports, format="markdown"):
    """
    Renders reports problem-major, then by method. CSV has one row per report;
    markdown pivots problems into rows and methods into columns.
    """
    if not reports:
        raise ValueError("Cannot render a table without reports.")
    try:
        render = _RENDERERS[format]
    except KeyError:
        raise ValueError(
            f"Unknown format {format!r}, expected one of {sorted(_RENDERERS)}."
        ) from None
    return render(order_reports(reports))


def write_history(report, path):
    with open(path, "w", encoding="utf8", newline="") as fp:
        writer = csv.writer(fp, lineterminator="\n")
        writer.writerow(HISTORY_HEADER)
        for record in report.history:
            writer.writerow([record.sweep, _real(record.dx_inf), _real(record.res_2)])
