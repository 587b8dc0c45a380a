import os
import sys
from collections import defaultdict

import pytest

sys.path.insert(0, os.path.dirname(__file__))

_results: dict = defaultdict(list)
_labels: dict = {}


def pytest_addoption(parser):
    parser.addoption("--slow", action="store_true", default=False, help="run slow-tier tests")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: slow-tier test, needs --slow")
    config.addinivalue_line("markers", "criterion(n, label): acceptance criterion this test checks")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--slow"):
        return
    skip = pytest.mark.skip(reason="slow tier; run with --slow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    n, label = mark.args
    _labels[n] = label
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        status = "skipped" if rep.skipped else rep.outcome
        _results[n].append((item.name, status, rep.duration))


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in sorted(_results):
        checks = _results[n]
        failed = [name for name, status, _ in checks if status == "failed"]
        skipped = [name for name, status, _ in checks if status == "skipped"]
        if failed:
            verdict = "FAIL"
        elif skipped:
            verdict = "INCOMPLETE"
        else:
            verdict = "PASS"
        secs = sum(d for _, _, d in checks)
        line = f"criterion {n} [{verdict}] {_labels[n]}: {len(checks) - len(failed) - len(skipped)}/{len(checks)} checks passed ({secs:.1f}s)"
        if failed:
            line += "; failing: " + ", ".join(failed)
        if skipped:
            line += "; skipped: " + ", ".join(skipped)
        tr.write_line(line)
