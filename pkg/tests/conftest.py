import os
import sys

import pytest
from hypothesis import settings

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile("default", deadline=None, max_examples=100)
settings.load_profile("default")

from pqweave.core import WeaveSpec  # noqa: E402
from pqweave.matrix import MatrixSet, gen_block, gen_diagonal  # noqa: E402
from pqweave.motif import build_motif  # noqa: E402
from pqweave.solver import solve_min  # noqa: E402

DEMO_SPECS = os.path.join(os.path.dirname(__file__), os.pardir, "demos", "specs")


def spec_path(name: str) -> str:
    return os.path.join(DEMO_SPECS, name + ".spec")


@pytest.fixture
def square_spec():
    return WeaveSpec.build([(1, 0), (0, 1)], {(0, 1): (2, 2)})


@pytest.fixture
def kagome_spec():
    return WeaveSpec.build([(1, 0), (0, 1), (1, 1)],
                           {(0, 1): (1, 1), (0, 2): (1, 1), (1, 2): (1, 1)})


@pytest.fixture
def twill_matrices():
    return MatrixSet.uniform(2, lambda i, j: gen_diagonal(2, 2, 1))


@pytest.fixture
def basket_matrices():
    return MatrixSet.uniform(2, lambda i, j: gen_block(2))


def minimal_motif(spec, matrices):
    return build_motif(spec, solve_min(spec, matrices=matrices), matrices)


@pytest.fixture
def twill_motif(square_spec, twill_matrices):
    return minimal_motif(square_spec, twill_matrices)


@pytest.fixture
def basket_motif(square_spec, basket_matrices):
    return minimal_motif(square_spec, basket_matrices)


@pytest.fixture
def kagome_motif(kagome_spec):
    S = MatrixSet.uniform(3, lambda i, j: gen_diagonal(1, 1, 1))
    return minimal_motif(kagome_spec, S)


# -- acceptance report -----------------------------------------------------------

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def report():
    """Records one summary line per acceptance criterion."""
    def record(number: int, ok: bool, seconds: float, detail: str):
        ACCEPTANCE_LINES.append(
            f"criterion {number:>2}: {'PASS' if ok else 'FAIL'} ({seconds:.2f}s) {detail}")
        print(ACCEPTANCE_LINES[-1])
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
