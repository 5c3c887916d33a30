from __future__ import annotations

from collections import OrderedDict
from functools import lru_cache

import pytest

from geostruct.config import preset_config
from geostruct.pipeline import Pipeline

PRESET_RUNS = [(p, e) for p in ("sol3-a", "sol3-b", "sol3-lc") for e in (1, -1)]


@lru_cache(maxsize=None)
def preset_pipeline(preset: str, epsilon: int) -> Pipeline:
    return Pipeline(preset_config(preset, epsilon))


@pytest.fixture(scope="session")
def pipelines():
    return preset_pipeline


def run_id(run) -> str:
    preset, eps = run
    return f"{preset}_eps{'+' if eps > 0 else '-'}1"


# -- acceptance summary ------------------------------------------------------
# Tests tagged with ``@pytest.mark.criterion("label")`` are grouped by label
# and reported as a single PASS/FAIL line at the end of the session.

_criteria: "OrderedDict[str, dict]" = OrderedDict()
_labels: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label): acceptance criterion the test belongs to")


def pytest_collection_modifyitems(session, config, items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark:
            label = mark.args[0]
            _labels[item.nodeid] = label
            _criteria.setdefault(label, {"passed": 0, "failed": [], "total": 0})["total"] += 1


def pytest_runtest_logreport(report):
    label = _labels.get(report.nodeid)
    if label is None:
        return
    bucket = _criteria[label]
    if report.failed:
        if report.nodeid not in bucket["failed"]:
            bucket["failed"].append(report.nodeid)
    elif report.when == "call" and report.passed:
        bucket["passed"] += 1


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for label, b in _criteria.items():
        ran = b["passed"] + len(b["failed"])
        if ran == 0:
            continue
        status = "PASS" if not b["failed"] and b["passed"] == b["total"] else "FAIL"
        tr.write_line(f"{status}  {label}  ({b['passed']}/{b['total']} checks passed)")
        for nodeid in b["failed"]:
            tr.write_line(f"        failed: {nodeid.split('::', 1)[-1]}")
