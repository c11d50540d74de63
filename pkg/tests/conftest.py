import pytest

_ACCEPTANCE: dict[str, str] = {}


@pytest.fixture(scope="session")
def report():
    """Record one PASS/FAIL line per acceptance criterion."""
    def record(key: str, ok: bool, detail: str) -> bool:
        line = f"{key} {'PASS' if ok else 'FAIL'}  {detail}"
        _ACCEPTANCE[key] = line
        print(line)
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for key in sorted(_ACCEPTANCE):
            terminalreporter.write_line(_ACCEPTANCE[key])
