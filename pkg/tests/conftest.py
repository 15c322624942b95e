import pytest

from beurling import classical_primes, enumerate_semigroup, modify_system

_ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def classical_1e6():
    return classical_primes(10**6)


@pytest.fixture(scope="session")
def table_1e6(classical_1e6):
    return enumerate_semigroup(classical_1e6, 10**6)


@pytest.fixture(scope="session")
def classical_1e5():
    return classical_primes(10**5)


@pytest.fixture(scope="session")
def table_1e5(classical_1e5):
    return enumerate_semigroup(classical_1e5, 10**5)


@pytest.fixture(scope="session")
def removed2_1e5(classical_1e5):
    return modify_system(classical_1e5, removed=[2])


@pytest.fixture(scope="session")
def added32_1e5(classical_1e5):
    return modify_system(classical_1e5, added=["3/2"])


@pytest.fixture(scope="session")
def report_line():
    def record(criterion, passed, detail):
        line = f"[{'PASS' if passed else 'FAIL'}] {criterion}: {detail}"
        _ACCEPTANCE_LINES.append(line)
        print(line)
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
