import pytest

from tacap import load_bundled
from tacap.data import bundled_text


@pytest.fixture(scope="session")
def coffee():
    return load_bundled()


@pytest.fixture(scope="session")
def coffee_text():
    return bundled_text()


def pytest_terminal_summary(terminalreporter):
    import sys
    module = sys.modules.get("test_acceptance")
    results = getattr(module, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for line in results:
            terminalreporter.write_line(line)
