from __future__ import annotations

import sys
from functools import lru_cache
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from positroids.core import LeDiagram, all_le_diagrams, young_shapes  # noqa: E402


@lru_cache(maxsize=None)
def cells(n_max: int, n_min: int = 1) -> tuple[LeDiagram, ...]:
    return tuple(d for n in range(n_min, n_max + 1) for k in range(n + 1)
                 for sh in young_shapes(n, k) for d in all_le_diagrams(n, sh))


_RESULTS: dict[int, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    num, title = mark.args
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        _RESULTS[num] = ("PASS" if rep.passed else "FAIL", title)


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_RESULTS):
        status, title = _RESULTS[num]
        terminalreporter.write_line(f"criterion {num:2d}: {status}  {title}")
