import numpy as np
import pytest

from limcone import make_schottky, perturb, sym_power_embed

# flagship examples: a Schottky pair in SL(2,R), its symmetric-square
# image in SL(3,R), and a seeded 0.05-perturbation of the latter


@pytest.fixture(scope="session")
def s2():
    return make_schottky([2.0, 2.0], [0.0, np.pi / 2])


@pytest.fixture(scope="session")
def f3(s2):
    return sym_power_embed(s2, 3)


@pytest.fixture(scope="session")
def p3(f3):
    return perturb(f3, 0.05, 1)
