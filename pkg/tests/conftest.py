from __future__ import annotations

import json
import time

import pytest

_RESULTS: dict[int, dict] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.fixture
def evidence(request):
    """Dict the acceptance test fills with derived values for the summary."""
    marker = request.node.get_closest_marker("criterion")
    data: dict = {}
    start = time.perf_counter()
    yield data
    if marker is not None:
        num = marker.args[0]
        _RESULTS.setdefault(num, {})["elapsed"] = round(time.perf_counter() - start, 2)
        _RESULTS[num]["evidence"] = data


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or rep.when != "call":
        return
    num, title = marker.args
    entry = _RESULTS.setdefault(num, {})
    entry.update(title=title, passed=rep.passed)


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for num in sorted(_RESULTS):
        e = _RESULTS[num]
        status = "PASS" if e.get("passed") else "FAIL"
        ev = json.dumps({str(k): v for k, v in e.get("evidence", {}).items()}, sort_keys=True, default=str)
        tr.write_line(f"criterion {num:2d} {status}  {e.get('title', '')}  [{e.get('elapsed', '?')}s] {ev}")
