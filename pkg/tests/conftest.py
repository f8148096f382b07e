import numpy as np
import pytest

from qshje import (
    PhysicalConstants,
    Potential1D,
    ReducedAction1D,
    solve_pair,
)

CONSTANTS = PhysicalConstants()


def random_gammas(rng, n=1, lo=-2.0, hi=2.0):
    """Gamma sextuples with every pair safely away from gn*gd = 1."""
    out = []
    while len(out) < n:
        g = rng.uniform(lo, hi, 6)
        if all(abs(1.0 - g[2 * i] * g[2 * i + 1]) > 0.05 for i in range(3)):
            out.append(tuple(g))
    return out if n > 1 else out[0]


@pytest.fixture(scope="session")
def free_pair():
    return solve_pair(Potential1D.zero(), 0.5, (-8.0, 8.0), 0.0, CONSTANTS)


@pytest.fixture(scope="session")
def constant_pair():
    return solve_pair(
        Potential1D.constant(0.25), 0.9, (-8.0, 8.0), 0.0, CONSTANTS
    )


@pytest.fixture(scope="session")
def barrier_pair():
    # classically forbidden everywhere: E below the constant potential
    return solve_pair(
        Potential1D.constant(1.0), 0.4, (-4.0, 4.0), 0.0, CONSTANTS
    )


@pytest.fixture(scope="session")
def harmonic_pair():
    return solve_pair(
        Potential1D.harmonic(1.0), 0.9, (-4.0, 4.0), 0.0, CONSTANTS
    )


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def make_action(pair, gn, gd, axis="x", orientation=1):
    return ReducedAction1D(
        pair=pair, gamma_num=gn, gamma_den=gd, orientation=orientation,
        axis=axis, constants=CONSTANTS,
    )
