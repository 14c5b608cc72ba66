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

import numpy as np
import pytest

from mdspm import cli
from mdspm.cli import main
from mdspm.matrix import read_matrix_market
from mdspm.problems import build_example2


@pytest.fixture(autouse=True)
def _keep_logging(monkeypatch):
    monkeypatch.setattr(cli, "configure_logging", lambda level, log_file=None: None)


def _run(*args):
    return main(["--log-level", "warning", "bench"] + list(args))


def test_help(capsys):
    assert main(["--help"]) == 0
    assert "bench" in capsys.readouterr().out


def test_gauss_seidel_converges(capsys):
    assert _run("--example", "1", "--n", "100", "--method", "gs") == 0

    out = capsys.readouterr().out.splitlines()
    assert out[0] == "| Problem | gs |"
    assert out[2].startswith("| example1(n=100) | ")
    assert out[2].split("|")[2].strip().isdigit()


def test_csv_output_file(tmp_path, capsys):
    output = tmp_path / "out.csv"
    history = tmp_path / "history.csv"

    rv = _run(
        "--example",
        "2",
        "--n",
        "50",
        "--method",
        "mdspm",
        "--m",
        "3",
        "--format",
        "csv",
        "--output",
        str(output),
        "--history",
        str(history),
    )

    assert rv == 0
    assert capsys.readouterr().out == ""
    lines = output.read_text().splitlines()
    assert lines[0].startswith("problem,method,params,sweeps")
    assert lines[1].startswith("example2(n=50),mdspm,m=3,")
    sweeps = int(lines[1].split(",")[3])
    assert len(history.read_text().splitlines()) == sweeps + 1


@pytest.mark.parametrize(
    "args",
    [
        ["--example", "1", "--n", "200", "--method", "mdspm", "--m", "4"],
        [
            "--example",
            "3",
            "--case",
            "3",
            "--grid",
            "8",
            "--method",
            "gap2d",
            "--ij-gap",
            "5",
        ],
        ["--example", "2", "--n", "100", "--method", "1ddspm", "--ij-gap", "7"],
    ],
)
def test_repeated_runs_are_identical(tmp_path, args):
    bodies = []
    for attempt in range(2):
        output = tmp_path / f"run{attempt}.csv"
        assert _run(*args, "--format", "csv", "--output", str(output)) == 0
        rows = list(csv.reader(output.read_text().splitlines()))
        assert rows[0][-1] == "wall_ms"
        bodies.append([row[:-1] for row in rows])

    assert bodies[0] == bodies[1]


def test_reproduce_table1(capsys):
    assert _run("--reproduce", "table1", "--jobs", "2") == 0

    lines = capsys.readouterr().out.splitlines()
    header = [cell.strip() for cell in lines[0].strip("|").split("|")]
    assert header == [
        "Problem",
        "gap2d (ij_gap=2)",
        "gap2d (ij_gap=500)",
        "mdspm (m=2)",
        "mdspm (m=3)",
        "mdspm (m=4)",
        "mdspm (m=5)",
    ]
    row = [cell.strip() for cell in lines[2].strip("|").split("|")]
    assert row[0] == "example1(n=1000)"
    assert len(row) == 7
    assert all("(published " in cell for cell in row[1:])


def test_gap_methods(capsys):
    args = ["--example", "3", "--case", "2", "--grid", "6", "--format", "csv"]

    assert _run(*args, "--method", "1ddspm", "--ij-gap", "6") == 0
    assert "example3(case=2,grid=6),1ddspm,ij_gap=6," in capsys.readouterr().out


@pytest.mark.parametrize(
    "args",
    [
        ["--example", "1", "--method", "mdspm"],
        ["--example", "1", "--method", "gs", "--m", "2"],
        ["--example", "1", "--method", "gs", "--ij-gap", "2"],
        ["--example", "1", "--method", "gap2d"],
        ["--example", "1", "--method", "1ddspm", "--m", "2"],
        ["--example", "1", "--n", "100", "--method", "mdspm", "--m", "101"],
        ["--example", "1", "--n", "100", "--method", "gap2d", "--ij-gap", "100"],
        ["--example", "3", "--n", "100", "--case", "1", "--method", "gs"],
        ["--example", "3", "--method", "gs"],
        ["--example", "1", "--case", "1", "--method", "gs"],
        ["--example", "2", "--grid", "8", "--method", "gs"],
        ["--method", "gs"],
        ["--example", "1"],
        ["--example", "4", "--method", "gs"],
        ["--example", "1", "--method", "gs", "--tol", "0"],
        ["--example", "1", "--method", "gs", "--max-sweeps", "0"],
        ["--example", "1", "--method", "gs", "--jobs", "0"],
        ["--reproduce", "table1", "--m", "2"],
        ["--reproduce", "table1", "--example", "1"],
        ["--reproduce", "table9"],
        ["--bogus"],
    ],
)
def test_usage_errors(args, capsys):
    assert _run(*args) == 1
    assert "Error" in capsys.readouterr().err


def test_matrix_clashes_with_example(tmp_path):
    path = tmp_path / "a.mtx"
    path.write_text("%%MatrixMarket matrix coordinate real symmetric\n1 1 1\n1 1 2\n")
    assert _run("--matrix", str(path), "--example", "1", "--method", "gs") == 1


def test_missing_matrix_file(tmp_path):
    assert _run("--matrix", str(tmp_path / "nope.mtx"), "--method", "gs") == 1


def test_matrix_file(tmp_path, capsys):
    path = tmp_path / "small.mtx"
    path.write_text(
        "%%MatrixMarket matrix coordinate real symmetric\n"
        "2 2 3\n"
        "1 1 4\n"
        "2 1 1\n"
        "2 2 3\n"
    )

    assert _run("--matrix", str(path), "--method", "mdspm", "--m", "2") == 0
    assert "| matrix(small.mtx) | 2 |" in capsys.readouterr().out


def test_run_error_exit_code(tmp_path, capsys):
    path = tmp_path / "nonsymmetric.mtx"
    path.write_text(
        "%%MatrixMarket matrix coordinate real general\n"
        "2 2 2\n"
        "1 1 4\n"
        "2 1 1\n"
    )

    assert _run("--matrix", str(path), "--method", "gs") == 2
    out = capsys.readouterr().out
    assert "| matrix(nonsymmetric.mtx) | error |" in out
    assert "MatrixMarketError: line 4" in out


@pytest.mark.parametrize(
    "method", [["gs"], ["1ddspm", "--ij-gap", "1"], ["gap2d", "--ij-gap", "1"]]
)
def test_indefinite_matrix_is_a_run_error(tmp_path, capsys, method):
    path = tmp_path / "indefinite.mtx"
    path.write_text(
        "%%MatrixMarket matrix coordinate real symmetric\n"
        "3 3 5\n"
        "1 1 4\n"
        "2 1 1\n"
        "2 2 -2\n"
        "3 2 1\n"
        "3 3 4\n"
    )

    assert _run("--matrix", str(path), "--method", *method) == 2
    assert "NotPositiveDefinite" in capsys.readouterr().out


def test_export(tmp_path):
    output = tmp_path / "ex2.mtx"

    assert main(["export", "--example", "2", "--n", "6", str(output)]) == 0

    assert output.read_text().splitlines()[1].lstrip("% ") == "example2(n=6)"
    assert np.array_equal(
        read_matrix_market(str(output)).to_dense(),
        build_example2(6).operator.to_dense(),
    )


def test_export_usage_error(tmp_path):
    assert main(["export", "--example", "3", "--n", "6", str(tmp_path / "x")]) == 1
