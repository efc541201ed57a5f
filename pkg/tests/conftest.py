import warnings

import pytest

from zomekit import build_polytope, choose_face, complete_basis, element_first_axis, orthogonal_project
from zomekit.projection import span_rows
from zomekit.wythoff import ExactnessWarning


def element_first(poly, rank, face=None):
    face = choose_face(poly, rank) if face is None else face
    basis = complete_basis(element_first_axis(poly, rank, face), span_rows(poly))
    return orthogonal_project(poly, basis)


@pytest.fixture(scope="session")
def cell120():
    return build_polytope("H4 x o o o")


@pytest.fixture(scope="session")
def cell600():
    return build_polytope("H4 o o o x")


@pytest.fixture(scope="session")
def omni120():
    return build_polytope("H4 x x x x")


@pytest.fixture(scope="session")
def cell120_cell_first(cell120):
    return element_first(cell120, 3)


@pytest.fixture(scope="session")
def cell120_vertex_first(cell120):
    return element_first(cell120, 0)


@pytest.fixture(scope="session")
def cell120_model(cell120_cell_first):
    from zomekit.zome import build_model

    return build_model(cell120_cell_first)


@pytest.fixture(scope="session")
def omni_cell_first(omni120):
    return element_first(omni120, 3, 0)


@pytest.fixture(scope="session")
def omni_model(omni_cell_first):
    from zomekit.zome import build_model

    return build_model(omni_cell_first)


@pytest.fixture
def quiet():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ExactnessWarning)
        yield


# -- acceptance report -------------------------------------------------------
# Acceptance tests record one line each; the lines are echoed in the terminal
# summary so they show up without ``-s``.

_VERDICTS: list[str] = []


@pytest.fixture
def verdict(request):
    def record(label: str, ok: bool, detail: str = "") -> bool:
        line = f"{'PASS' if ok else 'FAIL'}  {label}"
        if detail:
            line += f"  [{detail}]"
        print(line)
        _VERDICTS.append(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if _VERDICTS:
        terminalreporter.section("acceptance criteria")
        for line in _VERDICTS:
            terminalreporter.write_line(line)
