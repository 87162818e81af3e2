import pytest

from papsim import build_flowsheet, load, solve
from papsim.props import Component, ComponentRegistry


@pytest.fixture(scope="session")
def plant():
    return load("pap_plant")


@pytest.fixture(scope="session")
def flowsheet(plant):
    return build_flowsheet(plant)


@pytest.fixture(scope="session")
def solved(plant, flowsheet):
    return solve(flowsheet, plant.solve_options, plant.registry)


@pytest.fixture(scope="session")
def registry(plant):
    return plant.registry


TOY = ComponentRegistry([Component("A", 10.0, 20.0), Component("B", 20.0, 30.0), Component("C", 30.0, 25.0)])


@pytest.fixture(scope="session")
def toy_registry():
    return TOY


ACCEPTANCE = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[ACCEPTANCE] = []


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
