"""Shared fixtures and the acceptance summary printed at the end of a run."""

from __future__ import annotations

from pathlib import Path

import matplotlib
import pytest

FONT_PATH = Path(matplotlib.get_data_path()) / "fonts" / "ttf" / "DejaVuSans.ttf"

_criteria: dict[int, dict] = {}


@pytest.fixture(scope="session")
def font_path() -> Path:
    assert FONT_PATH.is_file(), FONT_PATH
    return FONT_PATH


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    number, title = marker.args
    entry = _criteria.setdefault(number, {"title": title, "outcomes": []})
    if rep.when == "call" or rep.outcome != "passed":
        entry["outcomes"].append(rep.outcome)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        entry = _criteria[number]
        outcomes = entry["outcomes"]
        if "failed" in outcomes:
            verdict = "FAIL"
        elif outcomes and all(o == "skipped" for o in outcomes):
            verdict = "SKIP"
        else:
            verdict = "PASS"
        terminalreporter.write_line(f"{verdict} criterion {number}: {entry['title']}")
