import functools

import pytest
from hypothesis import HealthCheck, settings

from cayleyparity.catalogue import odd_order_suite
from cayleyparity.groups import group_builtin

settings.register_profile(
    "repo",
    derandomize=True,
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repo")

SUITE = odd_order_suite(27)
EVEN_CONTROLS = ["cyclic(2)", "cyclic(4)", "direct_product(cyclic(2),cyclic(2))", "semidirect(3,2,2)", "semidirect(5,4,2)"]


@functools.lru_cache(maxsize=None)
def group(descriptor):
    return group_builtin(descriptor)


@functools.lru_cache(maxsize=None)
def pc_system(descriptor):
    from cayleyparity.cayley import pc_eigensystem

    return pc_eigensystem(group(descriptor))


@pytest.fixture(params=SUITE)
def suite_group(request):
    return group(request.param)


# acceptance criteria register here and are echoed after the run
ACCEPTANCE: dict[int, tuple[str, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        status, line = ACCEPTANCE[num]
        terminalreporter.write_line(f"[{status}] criterion {num:>2}: {line}")
