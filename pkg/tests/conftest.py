import pytest

_LINES: list[str] = []


def record(ac: str, passed: bool, detail: str) -> str:
    line = f"{ac} {'PASS' if passed else 'FAIL'}  {detail}"
    _LINES.append(line)
    print(line)
    return line


@pytest.fixture
def report():
    return record


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in _LINES:
            terminalreporter.write_line(line)
