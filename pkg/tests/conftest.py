from __future__ import annotations

import contextlib
import time

import pytest

_LINES: dict[int, str] = {}


@contextlib.contextmanager
def _record(number: int, title: str, detail: dict):
    t0 = time.perf_counter()
    try:
        yield detail
    except BaseException as exc:
        took = time.perf_counter() - t0
        _LINES[number] = f"FAIL criterion {number:2d} {title} ({took:.2f}s) {exc.__class__.__name__}: {exc}"
        print(_LINES[number])
        raise
    took = time.perf_counter() - t0
    extra = " ".join(f"{k}={v}" for k, v in detail.items())
    _LINES[number] = f"PASS criterion {number:2d} {title} ({took:.2f}s) {extra}".rstrip()
    print(_LINES[number])


@pytest.fixture
def criterion():
    """``with criterion(n, title) as info:`` records a pass/fail line."""
    return lambda number, title: _record(number, title, {})


def pytest_terminal_summary(terminalreporter):
    if not _LINES:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_LINES):
        terminalreporter.write_line(_LINES[n])
