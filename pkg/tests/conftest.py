from __future__ import annotations

import pytest

from tsgraph.tscode import build_codebook

_ACCEPTANCE: dict[str, tuple[bool, str]] = {}


@pytest.fixture(scope="session")
def codebooks():
    """Exact codebooks for n = 1..7, built once per session."""
    return {n: build_codebook(n) for n in range(1, 8)}


@pytest.fixture
def record():
    """Store a pass/fail line for the acceptance summary."""

    def _record(label: str, ok: bool, detail: str = "") -> bool:
        _ACCEPTANCE[label] = (bool(ok), detail)
        print(f"{'PASS' if ok else 'FAIL'}  {label}  {detail}")
        return ok

    return _record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(_ACCEPTANCE, key=lambda s: int(s.split()[0].rstrip("."))):
        ok, detail = _ACCEPTANCE[label]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {label}  {detail}")
