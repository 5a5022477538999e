from __future__ import annotations

import pytest

from hahnfield import load_field

CRITERIA = {
    1: "worked examples reproduced exactly",
    2: "Hardy axioms on random series",
    3: "asymptotic-integral contract",
    4: "integration round trip",
    5: "pre-logarithm conditions and laws",
    6: "exponential tower round trips",
    7: "germ derivative agreement",
    8: "CLI golden files",
}

_results: dict[int, list[bool]] = {}


@pytest.fixture(scope="session")
def leh3():
    return load_field("leh3", max_terms=32)


@pytest.fixture(scope="session")
def logs():
    return load_field("logs", max_terms=32)


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    if "test_acceptance.py" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    if not name.startswith("test_criterion_"):
        return
    n = int(name.split("_")[2])
    _results.setdefault(n, []).append(report.passed)


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(CRITERIA):
        if n not in _results:
            continue
        ok = all(_results[n])
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {CRITERIA[n]}")
