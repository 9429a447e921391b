import os

import pytest

CRITERIA: dict[tuple[int, str], str] = {}


@pytest.fixture
def criterion():
    """Record a one-line verdict for an acceptance criterion."""

    def record(number, title, measured, expected, passed):
        status = "PASS" if passed else "FAIL"
        CRITERIA[number, title] = f"criterion {number:>2} {status}  {title}: measured={measured} expected={expected}"
        return passed

    return record


@pytest.fixture(scope="session")
def census_cache(tmp_path_factory):
    """Census cache shared across acceptance tests (``CIRCSTAB_CACHE`` to persist)."""
    return os.environ.get("CIRCSTAB_CACHE") or str(tmp_path_factory.mktemp("census-cache"))


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(CRITERIA):
        terminalreporter.write_line(CRITERIA[k])
