import os
import subprocess
import sys

import pytest

from pqweave.cli import SpecParseError, main, parse_spec

from conftest import spec_path
from golden import CASES, golden_path, run_case


@pytest.mark.parametrize("name", sorted(CASES))
def test_golden(name):
    assert run_case(CASES[name]) == golden_path(name).read_bytes()


@pytest.mark.parametrize("name", ["solve_kagome", "classify_square", "motif_kagome"])
def test_threads_do_not_change_output(name):
    one = run_case(CASES[name], threads="1")
    assert run_case(CASES[name], threads="4") == one
    assert run_case(CASES[name], threads="0") == one


def test_parse_spec_full():
    doc = parse_spec("""
        # comment
        N 2
        slope 1 1 0
        slope 2 0 1   # trailing comment
        seq 1 2 +2 -2
        matrix 1 2 rows ++-- -++- --++ +--+
        bounds max_slope=3 max_copies=2 max_multiplier=4
    """)
    assert doc.spec.n_sets == 2
    assert str(doc.matrices[(0, 1)]) == "++--\n-++-\n--++\n+--+"
    assert (doc.bounds.max_slope, doc.bounds.max_copies, doc.bounds.max_multiplier) == (3, 2, 4)


@pytest.mark.parametrize("text", [
    "slope 1 1 0",
    "N 2\nslope 1 1 0\nslope 2 0 1\nseq 1 2 2 2",
    "N 2\nslope 1 1 0\nslope 2 0 1\nseq 1 3 +1 -1",
    "N 2\nslope 1 1 0\nslope 2 0 1\nseq 1 2 +1 -1\nwarp 3",
    "N 2\nslope 1 2 4\nslope 2 0 1\nseq 1 2 +1 -1",
    "N 2\nslope 1 1 0\nslope 2 0 1\nseq 1 2 +1 -1\nmatrix 1 2 sateen",
])
def test_parse_spec_errors(text):
    with pytest.raises((SpecParseError, ValueError)):
        doc = parse_spec(text)
        # some problems only show when the spec is used
        from pqweave.core import require_valid
        require_valid(doc.spec)


def test_parse_error_exit_code(tmp_path, capsys):
    p = tmp_path / "bad.spec"
    p.write_text("N 2\nslope 1 1 0\n")
    assert main(["solve", str(p)]) == 2
    assert "error" in capsys.readouterr().err


def test_invalid_spec_exit_code(tmp_path):
    p = tmp_path / "parallel.spec"
    p.write_text("N 2\nslope 1 1 0\nslope 2 1 0\nseq 1 2 +1 -1\n")
    assert main(["solve", str(p)]) == 2


def test_with_matrices_needs_matrix_lines():
    assert main(["solve", spec_path("square_2_2"), "--with-matrices"]) == 2


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as e:
        main(["solve"])
    assert e.value.code == 2


def test_console_script():
    env = dict(os.environ, WEAVE_THREADS="2")
    out = subprocess.run([sys.executable, "-m", "pqweave.cli", "solve", spec_path("square_2_2")],
                         capture_output=True, text=True, env=env, check=True).stdout
    assert out.splitlines()[-1] == "solution 0: total=4, slopes=(2,1)/(-2,1), copies=(1,1), k12=1"
