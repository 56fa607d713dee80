from __future__ import annotations

import pytest

from capcheck.catalogue import builtin_group
from capcheck.group import subgroup


@pytest.fixture(scope="session")
def S3():
    return builtin_group("S3")


@pytest.fixture(scope="session")
def S4():
    return builtin_group("S4")


@pytest.fixture(scope="session")
def A4():
    return builtin_group("A4")


@pytest.fixture(scope="session")
def SL23():
    return builtin_group("SL23")


@pytest.fixture(scope="session")
def Q8():
    return builtin_group("Q8")


@pytest.fixture(scope="session")
def V4_in_S4(S4):
    return subgroup(S4, ["(1 2)(3 4)", "(1 3)(2 4)"])


@pytest.fixture(scope="session")
def order4_in_SL23(SL23):
    x = next(e for e in SL23.elements() if e.order() == 4)
    return subgroup(SL23, [x])


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(RESULTS):
        status, title, detail = RESULTS[number]
        terminalreporter.write_line(f"criterion {number}: {status}  {title}  {detail}".rstrip())
