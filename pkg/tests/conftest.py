import pytest

from fubinilab import convspace as cs
from fubinilab import convvect as cv
from fubinilab.scalars import field_new

# criterion number -> (passed, note); filled by test_acceptance
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


@pytest.fixture(scope="session")
def f2():
    return field_new(2)


@pytest.fixture(scope="session")
def f3():
    return field_new(3)


@pytest.fixture(scope="session", params=["limit", "down"])
def axioms(request):
    return request.param


@pytest.fixture(scope="session")
def small_spaces():
    """Every space on at most two points, in both axiom modes."""
    return {ax: list(cs.enumerate_spaces(2, ax)) for ax in cs.AXIOMS}


@pytest.fixture(scope="session")
def small_vects(f2):
    return {ax: list(cv.enumerate_convvects(4, f2, ax)) for ax in cs.AXIOMS}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, note = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:>2}: {'PASS' if ok else 'FAIL'}  {note}")
