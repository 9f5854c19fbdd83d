import pytest

import solmag as sm

# Lines recorded by the acceptance tests; echoed in the terminal summary
# so every criterion shows one pass/fail line even in quiet runs.
_criterion_lines = []


def record_criterion(line):
    _criterion_lines.append(line)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if _criterion_lines:
        terminalreporter.section("acceptance criteria")
        for line in _criterion_lines:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def criterion_log():
    return record_criterion


@pytest.fixture(scope="session")
def entropy_cached():
    """Session-wide entropy cache; several tests share the same grids."""
    cache = {}

    def get(s, n_nu=201, n_xi=64, threads=1):
        key = (float(s), int(n_nu), int(n_xi))
        if key not in cache:
            cache[key] = sm.entropy(s, n_nu=n_nu, n_xi=n_xi, threads=threads)
        return cache[key]

    return get
