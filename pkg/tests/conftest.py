import itertools
import os

import numpy as np
import pytest

from core.model import Instance, Sense, BinarySolution
from data import counterexamples

REPO_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), os.pardir)
DATASETS_DIR = os.path.join(REPO_DIR, 'datasets')
FIXTURES_DIR = os.path.join(DATASETS_DIR, 'fixtures')
COUNTEREXAMPLES_DIR = os.path.join(DATASETS_DIR, 'counterexamples')


def binary_points(n):
    return [np.array(bits, dtype=np.float64) for bits in itertools.product((0, 1), repeat=n)]


def feasible_solutions(inst):
    solutions = []
    for x in binary_points(inst.n):
        activity = inst.A @ x
        if (inst.is_cover and np.all(activity >= 1)) or (not inst.is_cover and np.all(activity <= 1)):
            solutions.append(BinarySolution(x))
    return solutions


def random_incidence(rng, m, n, density=0.4):
    A = (rng.random((m, n)) < density).astype(np.int8)
    for i in np.flatnonzero(A.sum(axis=1) == 0):
        A[i, rng.integers(n)] = 1
    return A


def random_instance(rng, m, n, sense=Sense.COVER, nonnegative=False):
    A = random_incidence(rng, m, n)
    if nonnegative:
        c = rng.integers(0, 6, size=n)
        D = rng.integers(0, 6, size=(n, n))
    else:
        c = rng.integers(-5, 6, size=n)
        D = rng.integers(-5, 6, size=(n, n))
    return Instance(A, c, D, sense=sense)


@pytest.fixture
def ce_t1():
    return counterexamples.ce_t1()


@pytest.fixture
def ce_d1():
    return counterexamples.ce_d1()


@pytest.fixture
def ce_d2():
    return counterexamples.ce_d2()


@pytest.fixture
def ce_d3():
    return counterexamples.ce_d3()


@pytest.fixture
def ce_p1():
    return counterexamples.ce_p1()


@pytest.fixture
def rng():
    return np.random.default_rng(2024)
