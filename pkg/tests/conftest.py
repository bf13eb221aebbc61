import sys

import pytest

from fflseries import FieldSpec, get_field


def fld(q, n=1):
    return get_field(FieldSpec.from_q(q, n))


@pytest.fixture(params=[2, 3, 4], ids=lambda q: f"q{q}")
def field(request):
    return fld(request.param)


@pytest.fixture
def F2():
    return fld(2)


@pytest.fixture
def F3():
    return fld(3)


@pytest.fixture
def F4():
    return fld(4)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for n in sorted(results):
            terminalreporter.write_line(results[n])
