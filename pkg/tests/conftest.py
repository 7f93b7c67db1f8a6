import numpy as np
import pytest

from squeezetransfer.qalgebra import Dicke, Fock, StateVector


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_fock_state(rng, n_max, support=None):
    """Random pure state with amplitudes only on n < support."""
    support = n_max + 1 if support is None else support
    amps = np.zeros(n_max + 1, dtype=complex)
    amps[:support] = rng.normal(size=support) + 1j * rng.normal(size=support)
    return StateVector.normalized(Fock(n_max), amps)


def random_spin_state(rng, two_j, parity=None):
    amps = rng.normal(size=two_j + 1) + 1j * rng.normal(size=two_j + 1)
    if parity is not None:
        amps[np.arange(two_j + 1) % 2 != parity] = 0
    return StateVector.normalized(Dicke(two_j), amps)
