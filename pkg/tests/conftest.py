import pytest
from hypothesis import HealthCheck, settings

from rwmb.generators import (
    gen_category_algebra,
    gen_exterior_super,
    gen_group_functions,
    gen_quantum_line,
    gen_weak_braided,
)
from rwmb.linalg import QQ

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(scope="session")
def z2():
    return gen_group_functions((2,), QQ)


@pytest.fixture(scope="session")
def arrow():
    return gen_category_algebra(field=QQ)


@pytest.fixture(scope="session")
def exterior():
    return gen_exterior_super(QQ)


@pytest.fixture(scope="session")
def qline():
    return gen_quantum_line(7, 3)


@pytest.fixture(scope="session")
def weak():
    return gen_weak_braided(7)


@pytest.fixture(scope="session")
def certified(z2, arrow, exterior):
    return {"z2": z2, "arrow": arrow, "exterior": exterior}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title, limit): acceptance criterion with a time limit")
    config._criteria = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    mark = item.get_closest_marker("criterion")
    rep = outcome.get_result()
    if mark is None or (rep.when != "call" and rep.passed):
        return
    number, title, limit = mark.args
    item.config._criteria[number] = (title, limit, rep.passed, rep.duration)


def pytest_terminal_summary(terminalreporter, config):
    if not config._criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number, (title, limit, ok, secs) in sorted(config._criteria.items()):
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {title}  "
                                    f"({secs:.2f} s, limit {limit} s)")
