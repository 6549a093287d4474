import warnings

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("desk", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("desk")


@pytest.fixture
def quiet():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        yield


# --- one summary line per acceptance criterion ------------------------------------

_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number n")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        if hasattr(rep, "wasxfail"):
            state = "xfail" if rep.skipped else "xpass"
        else:
            state = rep.outcome
        _CRITERIA.setdefault(mark.args[0], []).append((item.name, state))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        states = _CRITERIA[n]
        bad = [name for name, s in states if s in ("failed", "xpass")]
        xf = [name for name, s in states if s == "xfail"]
        if bad:
            line = f"criterion {n}: FAIL ({', '.join(bad)})"
        elif xf:
            line = (f"criterion {n}: PARTIAL ({len(states) - len(xf)} checks pass, "
                    f"{len(xf)} strict xfail: {', '.join(xf)})")
        elif all(s == "passed" for _, s in states):
            line = f"criterion {n}: PASS ({len(states)} check{'s' if len(states) > 1 else ''})"
        else:
            line = f"criterion {n}: SKIPPED"
        tr.write_line(line)
