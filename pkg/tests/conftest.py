import numpy as np
import pytest

from jamplan.scenario import Scenario, generate_random_scenario


@pytest.fixture
def two_eaves():
    return generate_random_scenario(2, 11)


def make_scenario(user=(0.0, 0.0, 0.0), eaves=((400.0, 0.0, 0.0),), **kw) -> Scenario:
    eaves = np.array(eaves, dtype=float)
    return Scenario(
        user_position=np.array(user, dtype=float),
        eaves_true=eaves,
        eaves_estimated=eaves.copy(),
        **kw,
    )


# acceptance results are collected here and echoed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda l: int(l.split()[1])):
            terminalreporter.write_line(line)
