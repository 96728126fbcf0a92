import numpy as np
import pytest

from pauli_lab.core.lattice import get_lattice

SEED = 0xC0FFEE


@pytest.fixture
def rng():
    return np.random.default_rng(SEED)


@pytest.fixture(scope="session")
def lattice1():
    return get_lattice(1)


@pytest.fixture(scope="session")
def lattice2():
    return get_lattice(2)


@pytest.fixture(scope="session")
def lattice3():
    return get_lattice(3)
