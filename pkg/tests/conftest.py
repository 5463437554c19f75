import os

# every sampler run in the suite re-checks project(state) == graph after each
# accepted move; SamplerConfig reads this at construction time
os.environ.setdefault("HYPERBAYES_DEBUG", "1")

import random

import pytest

from hyperbayes.hypergraph import Hypergraph, PairwiseGraph

DATA = os.path.join(os.path.dirname(__file__), "data")


def K(n):
    return PairwiseGraph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


@pytest.fixture
def k3():
    return K(3)


@pytest.fixture
def path3():
    return PairwiseGraph(3, [(0, 1), (1, 2)])


@pytest.fixture
def diamond():
    # K4 minus (0, 3)
    return PairwiseGraph(4, [(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)])


@pytest.fixture
def rng():
    return random.Random(1234)


@pytest.fixture
def data_dir():
    return DATA


def random_hypergraph(rnd, n, m, max_size=4, max_mult=2):
    edges = {}
    for _ in range(m):
        k = rnd.randint(2, min(max_size, n))
        e = tuple(sorted(rnd.sample(range(n), k)))
        edges[e] = rnd.randint(1, max_mult)
    return Hypergraph(n, edges)


# -- acceptance summary ----------------------------------------------------------

ACCEPTANCE_LINES: dict[int, str] = {}


def record_criterion(number: int, passed: bool, detail: str) -> bool:
    line = f"criterion {number:2d} {'PASS' if passed else 'FAIL'}: {detail}"
    ACCEPTANCE_LINES[number] = line
    print(line)
    return passed


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[n])
