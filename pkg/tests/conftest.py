import pytest

from treebraid import oracle
from treebraid.fixtures import caterpillar4, fork28, h5, y3

# (criterion, ok, detail) lines filled in by test_acceptance.py
ACCEPTANCE: list = []


@pytest.fixture(scope="session")
def Y3():
    return y3()


@pytest.fixture(scope="session")
def H5():
    return h5()


@pytest.fixture(scope="session")
def CAT4():
    return caterpillar4()


@pytest.fixture(scope="session")
def FORK28():
    return fork28()


@pytest.fixture(scope="session")
def rc_y3(Y3):
    return oracle.reduced(Y3, 3)


@pytest.fixture(scope="session")
def rc_h5(H5):
    return oracle.reduced(H5, 5)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num, ok, detail in sorted(ACCEPTANCE):
        terminalreporter.write_line(f"criterion {num}: {'PASS' if ok else 'FAIL'}  {detail}")
