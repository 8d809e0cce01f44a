from pathlib import Path

import pytest

from gmkit import Edge, Endpoint, GluingMatrix, GraphManifold, SeifertPiece

FIXTURES = Path(__file__).parent / "fixtures"


def two_piece(matrix, genera=(2, 2), name="X"):
    A = matrix if isinstance(matrix, GluingMatrix) else GluingMatrix.of(matrix)
    pieces = [SeifertPiece("P1", genera[0]), SeifertPiece("P2", genera[1])]
    return GraphManifold.assemble(name, pieces, [Edge("e1", Endpoint("P1", 0), Endpoint("P2", 0), A)])


@pytest.fixture
def worked():
    return two_piece(((1, 1), (1, 0)))


@pytest.fixture
def fixtures_dir():
    return FIXTURES


def pytest_terminal_summary(terminalreporter):
    from acceptance_log import RESULTS

    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(RESULTS):
        status, label = RESULTS[number]
        terminalreporter.write_line(f"criterion {number}: {status}  {label}")
