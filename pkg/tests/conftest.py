from __future__ import annotations

import pytest

CRITERIA: dict[int, list[tuple[bool, str]]] = {}


def record(number: int, ok: bool, detail: str) -> None:
    CRITERIA.setdefault(number, []).append((ok, detail))
    print(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}")


@pytest.fixture
def criterion():
    return record


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(CRITERIA):
        parts = CRITERIA[n]
        ok = all(p[0] for p in parts)
        detail = "; ".join(d for _, d in parts)
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
