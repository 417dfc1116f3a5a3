import pytest

from darboux_osc.families import FamilyParams, SuperpositionConstants


@pytest.fixture
def trig():
    return FamilyParams.trig(3.5, 2.0)


@pytest.fixture
def hyp():
    return FamilyParams.hyp(1.0, 0.5)


@pytest.fixture
def trig_c():
    return SuperpositionConstants(2 / 7, 7 / 4)


@pytest.fixture
def hyp_c():
    return SuperpositionConstants(2.0, -1.0)


import time

FULL_SUITE_LIMIT = 30.0
_LOG = pytest.StashKey[list]()
_START = pytest.StashKey[float]()


def pytest_configure(config):
    config.stash[_LOG] = []
    config.stash[_START] = time.perf_counter()


@pytest.fixture
def acceptance(request):
    """Record ``(criterion, detail, passed)`` lines for the end-of-run summary."""
    log = request.config.stash[_LOG]

    def record(criterion, detail, passed):
        line = f"{'PASS' if passed else 'FAIL'}  criterion {criterion}: {detail}"
        log.append(line)
        print(line)
        return passed
    return record


def _elapsed(config):
    return time.perf_counter() - config.stash[_START]


def pytest_terminal_summary(terminalreporter, config):
    log = config.stash[_LOG]
    if not log:
        return
    terminalreporter.section("acceptance criteria")
    for line in log:
        terminalreporter.write_line(line)
    elapsed = _elapsed(config)
    ok = elapsed < FULL_SUITE_LIMIT
    terminalreporter.write_line(
        f"{'PASS' if ok else 'FAIL'}  criterion 9: full test run {elapsed:.1f} s < {FULL_SUITE_LIMIT:g} s")


def pytest_sessionfinish(session, exitstatus):
    if session.config.stash[_LOG] and _elapsed(session.config) >= FULL_SUITE_LIMIT:
        session.exitstatus = 1
