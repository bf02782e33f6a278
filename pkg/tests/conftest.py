import numpy as np
import pytest

from limitwalk import cycle, pmf

ACCEPTANCE_LINES: list[str] = []


def example1():
    return cycle.CyclePattern([pmf.from_weights(-3, [0.5, 0, 0, 0, 0.5])])


def example2():
    return cycle.CyclePattern([pmf.geometric(0.55), pmf.shifted_poisson(0.5, -3), pmf.discrete_weibull_unit()])


def random_pattern(rng, *, max_n=3, max_width=4, min_drift=0.1, lo=-3, hi=2):
    """Random finite-support pattern with E S_N <= -min_drift."""
    while True:
        n = int(rng.integers(1, max_n + 1))
        laws = []
        for _ in range(n):
            width = int(rng.integers(1, max_width + 1))
            m = int(rng.integers(lo, hi))
            w = rng.random(width) + 0.05
            laws.append(pmf.from_weights(m, w))
        pat = cycle.CyclePattern(laws)
        s = cycle.summarize(pat)
        if s.mean_SN <= -min_drift and s.D >= 1:
            return pat


@pytest.fixture
def ex1():
    return example1()


@pytest.fixture
def ex2():
    return example2()


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
