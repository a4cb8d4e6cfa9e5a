"""
Golden corpus for the ``weave`` command line.

Each case runs ``main()`` in-process inside a scratch directory and records
the exit code, stdout, stderr and every file the command wrote. The
recordings live in ``tests/golden/<case>.txt``. Regenerate them with::

    python3 tests/golden.py --update
"""

from __future__ import annotations

import contextlib
import io
import os
import shutil
import sys
import tempfile
from pathlib import Path

from pqweave.cli import main

ROOT = Path(__file__).resolve().parent.parent
DEMOS = ROOT / "demos"
GOLDEN = Path(__file__).resolve().parent / "golden"

S = str(DEMOS / "specs")
M = str(DEMOS / "matrices")

CASES: dict[str, list[str]] = {
    "solve_square": ["solve", f"{S}/square_2_2.spec"],
    "solve_square_next": ["solve", f"{S}/square_2_2.spec", "--next", "1"],
    "solve_kagome": ["solve", f"{S}/kagome.spec", "--next", "2"],
    "solve_kagome_mixed": ["solve", f"{S}/kagome_mixed.spec"],
    "solve_basket_matrices": ["solve", f"{S}/basket.spec", "--with-matrices"],
    "solve_tight_bounds": ["solve", f"{S}/square_2_2.spec", "--max-slope", "1",
                           "--max-copies", "1", "--max-multiplier", "1"],
    "solve_missing_file": ["solve", f"{S}/no_such.spec"],
    "matrix_gen_diagonal": ["matrix", "gen", "diagonal", "--p", "3", "--q", "2"],
    "matrix_gen_satin": ["matrix", "gen", "satin", "--p", "6", "--a", "3", "--out", "satin.txt"],
    "matrix_gen_satin_gcd": ["matrix", "gen", "satin", "--p", "3", "--a", "2"],
    "matrix_validate": ["matrix", "validate", f"{M}/satin_5_2.txt"],
    "matrix_validate_broken": ["matrix", "validate", f"{M}/broken.txt"],
    "matrix_rank": ["matrix", "rank", f"{M}/twill.txt"],
    "matrix_equiv_shift": ["matrix", "equiv", f"{M}/twill.txt", f"{M}/twill_moved.txt"],
    "matrix_equiv_twill_basket": ["matrix", "equiv", f"{M}/twill.txt", f"{M}/basket.txt"],
    "motif_twill": ["motif", f"{S}/twill.spec", "--out", "m.txt", "--svg", "m.svg",
                    "--text", "m.lst"],
    "motif_basket": ["motif", f"{S}/basket.spec", "--out", "m.txt", "--svg", "m.svg",
                     "--repeat", "2"],
    "motif_all_over": ["motif", f"{S}/all_over.spec", "--out", "m.txt"],
    "motif_kagome": ["motif", f"{S}/kagome.spec", "--out", "m.txt", "--svg", "m.svg",
                     "--text", "m.lst"],
    "motif_kagome_mixed": ["motif", f"{S}/kagome_mixed.spec", "--text", "m.lst"],
    "motif_bad_matrices": ["motif", f"{S}/square_2_2.spec", "--matrices", f"{M}/satin_5_2.txt"],
    "classify_square": ["classify", "--family", "square", "--max-module", "4",
                        "--solutions", "2", "--out", "out"],
    "classify_kagome": ["classify", "--family", "kagome", "--max-module", "2",
                        "--out", "out"],
}


def run_case(argv: list[str], threads: str | None = None) -> bytes:
    """Run one command; return a byte record of everything it produced."""
    old_env = os.environ.get("WEAVE_THREADS")
    old_cwd = os.getcwd()
    work = tempfile.mkdtemp(prefix="weave-golden-")
    out, err = io.StringIO(), io.StringIO()
    try:
        if threads is None:
            os.environ.pop("WEAVE_THREADS", None)
        else:
            os.environ["WEAVE_THREADS"] = threads
        os.chdir(work)
        with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
            try:
                code = main(argv)
            except SystemExit as e:
                code = e.code
        parts = [f"exit={code}\n".encode(), b"--- stdout\n", out.getvalue().encode(),
                 b"--- stderr\n", err.getvalue().encode()]
        for path in sorted(Path(work).rglob("*")):
            if path.is_file():
                parts += [f"--- file {path.relative_to(work).as_posix()}\n".encode(),
                          path.read_bytes()]
    finally:
        os.chdir(old_cwd)
        shutil.rmtree(work, ignore_errors=True)
        if old_env is None:
            os.environ.pop("WEAVE_THREADS", None)
        else:
            os.environ["WEAVE_THREADS"] = old_env
    # paths into the checkout differ between machines
    return b"".join(parts).replace(str(ROOT).encode(), b"<root>")


def golden_path(name: str) -> Path:
    return GOLDEN / f"{name}.txt"


def update():
    GOLDEN.mkdir(exist_ok=True)
    for name, argv in CASES.items():
        golden_path(name).write_bytes(run_case(argv))
        print("wrote", golden_path(name))


if __name__ == "__main__":
    if sys.argv[1:] != ["--update"]:
        sys.exit("usage: python3 tests/golden.py --update")
    update()
