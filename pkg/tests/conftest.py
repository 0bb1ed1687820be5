import pytest

from borelnorm.domain import Disk, Ellipse, SmoothedPolygon


@pytest.fixture(scope="session")
def disk():
    return Disk(0j, 1.0)


@pytest.fixture(scope="session")
def ellipse():
    return Ellipse(1.5, 1.0)


@pytest.fixture(scope="session")
def tilted_ellipse():
    return Ellipse(2.0, 1.0, center=0.2 - 0.1j, rotation=0.4)


@pytest.fixture(scope="session")
def polygon():
    # a rounded triangle
    return SmoothedPolygon((1.0 + 0j, -0.5 + 0.9j, -0.5 - 0.9j), 0.2)


# one summary line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[num])
