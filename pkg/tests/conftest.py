"""Reporting for the acceptance criteria.

Acceptance tests record one line per criterion through the ``criterion``
fixture; the lines are printed in the terminal summary together with the
wall-clock check on the whole session.
"""

import time

import pytest

SUITE_LIMIT = 60.0
RESULTS = []


def pytest_sessionstart(session):
    session.config._lode_start = time.perf_counter()


@pytest.fixture
def criterion():
    def record(name, ok, detail):
        line = f"{'PASS' if ok else 'FAIL'} {name}: {detail}"
        RESULTS.append(line)
        print(line)
        return ok

    return record


def _elapsed(config):
    return time.perf_counter() - config._lode_start


def pytest_sessionfinish(session, exitstatus):
    if RESULTS and _elapsed(session.config) >= SUITE_LIMIT and exitstatus == 0:
        session.exitstatus = pytest.ExitCode.TESTS_FAILED


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in RESULTS:
        terminalreporter.write_line(line)
    elapsed = _elapsed(config)
    ok = elapsed < SUITE_LIMIT
    collected = terminalreporter._numcollected
    terminalreporter.write_line(
        f"{'PASS' if ok else 'FAIL'} suite runtime: {elapsed:.1f} s for {collected} tests "
        f"(limit {SUITE_LIMIT:.0f} s)"
    )
