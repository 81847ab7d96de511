import numpy as np
import pytest
from fractions import Fraction

import qdsym


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(42)


@pytest.fixture(scope="session")
def ex1():
    return qdsym.example1_build(2, Fraction(3, 10))


@pytest.fixture(scope="session")
def ex1_params(ex1):
    return qdsym.matrix_parameters(ex1.F)


@pytest.fixture(scope="session")
def ex2():
    return qdsym.example2_build(0.8j, Fraction(5, 13), Fraction(12, 13), 1j)


@pytest.fixture(scope="session")
def ex2_trace(ex2):
    return qdsym.trace_branches(ex2.F, n_init=1024)


@pytest.fixture(scope="session")
def ex3F():
    return qdsym.example3_build()


def paper_lambda_star(a, be):
    """Closed-form Lambda* of the simply connected scenario."""
    ab, bb = np.conj(a), np.conj(be)
    k = np.sqrt(1 - abs(a) ** -2)
    return np.array([[-bb / ab, k - bb / (ab ** 2 * k)],
                     [0.0, 1 / a - bb / (ab * k ** 2)]])


def paper_R(a, be):
    ab, bb = np.conj(a), np.conj(be)
    k = np.sqrt(1 - abs(a) ** -2)
    return np.array([[1 - bb / ab ** 2, -bb / (k * ab ** 3)],
                     [-bb / (k * ab ** 3), -bb / (k ** 2 * ab ** 4)]])
