import pytest

from floorlab.exact_numbers import construct_characteristic_alpha, parse_algebraic


@pytest.fixture(scope="session")
def golden():
    return construct_characteristic_alpha(1, 1, 1, 1)


@pytest.fixture(scope="session")
def silver():
    # 1 + sqrt(2)
    return construct_characteristic_alpha(1, 1, 2, 1)


@pytest.fixture(scope="session")
def sqrt2():
    return parse_algebraic("root([-2,0,1],1,2)")


@pytest.fixture(scope="session")
def cbrt2():
    return parse_algebraic("root([-2,0,0,1],1,2)")


@pytest.fixture(scope="session")
def three_halves():
    return parse_algebraic("3/2")


ACCEPTANCE_LINES: list = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
