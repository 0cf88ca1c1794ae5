import numpy as np
import pytest

from periodic_ssq import curve, experiments


def starfish_exact(t, amplitude=0.3, n_arms=5):
    return (1 + amplitude * np.cos(n_arms * t)) * np.exp(1j * t)


@pytest.fixture(scope="session")
def starfish_geom():
    return experiments.starfish()


@pytest.fixture(scope="session")
def starfish400():
    return curve.make_starfish(n=400)


@pytest.fixture(scope="session")
def starfish401():
    return curve.make_starfish(n=401)


@pytest.fixture(scope="session")
def circle200():
    return curve.make_circle(1.0, 200)


_ACCEPTANCE = []


def record_acceptance(line):
    _ACCEPTANCE.append(line)


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
