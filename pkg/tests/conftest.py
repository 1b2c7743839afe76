import pytest

from helpers import ACCEPTANCE


@pytest.fixture
def record():
    """Store a verdict line for the acceptance summary."""

    def _record(number: int, part: str, ok: bool, detail: str) -> None:
        ACCEPTANCE.setdefault(number, []).append((part, ok, detail))

    return _record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        parts = ACCEPTANCE[number]
        ok = all(p[1] for p in parts)
        detail = "; ".join(f"{name}: {d}" if name else d for name, _, d in parts)
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}")
