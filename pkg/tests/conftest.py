import pytest

from hoskip.model import NetworkParams, table3_params


@pytest.fixture(scope="session")
def ref():
    """30 macro/km^2 at 1 W and 70 femto/km^2 at 0.1 W, eta = 4, no noise."""
    return table3_params()


@pytest.fixture(scope="session")
def macro_only():
    return NetworkParams.from_values(30.0, 0.0)


# one summary line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE: dict[int, str] = {}


@pytest.fixture
def record():
    def _record(n, passed, detail):
        ACCEPTANCE[n] = f"criterion {n}: {'PASS' if passed else 'FAIL'}  {detail}"
        print(ACCEPTANCE[n])
        return passed
    return _record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[n])
