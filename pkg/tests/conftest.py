import pytest

_ACCEPTANCE = {}


@pytest.fixture
def acceptance():
    """``record(number, ok, detail)``: one line per criterion in the terminal summary."""

    def record(number: int, ok: bool, detail: str = ""):
        _ACCEPTANCE[number] = (bool(ok), detail)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        ok, detail = _ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}")
