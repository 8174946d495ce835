import numpy as np
import pytest
from hypothesis import settings

from mobius_rigidity.generate import random_ball, random_point

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_balls(rng, N, n):
    return [random_ball(rng, N) for _ in range(n)]


def random_points(rng, N, n):
    out = []
    while len(out) < n:
        p = random_point(rng, N)
        if p not in out:
            out.append(p)
    return out


_ACCEPT = pytest.StashKey[dict]()


@pytest.fixture
def acceptance(request):
    """Record the measured detail of an acceptance criterion for the summary."""
    details = request.config.stash.setdefault(_ACCEPT, {})

    def record(detail):
        details[request.node.nodeid] = detail
        print(detail)

    return record


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance.py" in report.nodeid:
        _outcomes[report.nodeid] = report.outcome


_outcomes = {}


def pytest_terminal_summary(terminalreporter, config):
    if not _outcomes:
        return
    details = config.stash.get(_ACCEPT, {})
    terminalreporter.write_sep("=", "acceptance criteria")
    for nodeid, outcome in _outcomes.items():
        name = nodeid.split("::")[-1]
        status = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"{status}  {name}: {details.get(nodeid, 'no measurement recorded')}")
