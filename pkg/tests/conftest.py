import pytest

from qxpile.dialects import builtin_dialects, builtin_rules

_ACCEPTANCE: list[tuple[str, bool, str]] = []


@pytest.fixture(scope="session")
def dialects():
    return builtin_dialects()


@pytest.fixture(scope="session")
def rules():
    return builtin_rules()


@pytest.fixture
def acceptance_log():
    """Append (criterion, passed, detail) lines printed at the end of the run."""
    return _ACCEPTANCE


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in _ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}")
