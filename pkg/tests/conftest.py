import pytest

_ACCEPTANCE: dict[str, tuple[bool, str]] = {}


@pytest.fixture
def criterion():
    """``criterion(name, ok, detail)`` records one acceptance line."""

    def record(name: str, ok: bool, detail: str) -> bool:
        _ACCEPTANCE[name] = (ok, detail)
        print(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    def order(name: str):
        head = name.split()[0]
        return int(head.rstrip("ab")), head

    for name in sorted(_ACCEPTANCE, key=order):
        ok, detail = _ACCEPTANCE[name]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
