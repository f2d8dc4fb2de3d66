from __future__ import annotations

import pytest

ACCEPTANCE: dict[int, tuple[bool, str]] = {}


@pytest.fixture
def record():
    """Record one acceptance criterion's verdict for the end-of-run summary."""

    def _record(number: int, ok: bool, note: str = "") -> None:
        ACCEPTANCE[number] = (ok, note)
        print(f"criterion {number}: {'PASS' if ok else 'FAIL'} {note}".rstrip())

    return _record


@pytest.fixture(autouse=True)
def _isolated_cache(tmp_path, monkeypatch):
    monkeypatch.setenv("LAMINA_CACHE_DIR", str(tmp_path / "cache"))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, note = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {note}".rstrip())
