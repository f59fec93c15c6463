import math

import hypothesis.strategies as st
import numpy as np
import pytest

from py_tripartite.catalog import CorrectionTable, Scenario, scenario_registry
from py_tripartite.measurement import BlochAngles, CosenderBasis, bloch_state
from py_tripartite.models import StateType
from py_tripartite.qcore import StateVector, make_state

ENTANGLED_TYPES = [
    StateType.TYPE_2B, StateType.TYPE_3A, StateType.TYPE_3B_I, StateType.TYPE_3B_II, StateType.TYPE_3B_III,
    StateType.TYPE_4A, StateType.TYPE_4B_I, StateType.TYPE_4B_II, StateType.TYPE_4C, StateType.TYPE_5,
    StateType.W_STD,
]
ROLES = ['A,B,C', 'A,C,B', 'B,A,C', 'B,C,A', 'C,A,B', 'C,B,A']

bases = st.builds(CosenderBasis, st.floats(0, math.pi), st.floats(0, 2 * math.pi))
infos = st.builds(
    lambda u, phi: bloch_state(BlochAngles(math.acos(u), phi)), st.floats(-1, 1), st.floats(0, 2 * math.pi)
)
scenarios = st.builds(Scenario, st.sampled_from(ENTANGLED_TYPES), st.sampled_from(ROLES))
tables = st.integers(0, 4 ** 8 - 1).map(CorrectionTable.decode)


def states(n_qubits: int) -> st.SearchStrategy:
    """
    Normalized states with arbitrary complex amplitudes.
    """
    size = 2 ** n_qubits
    parts = st.lists(st.floats(-1, 1), min_size=2 * size, max_size=2 * size)

    def build(values) -> StateVector:
        amps = np.array(values[:size]) + 1j * np.array(values[size:])
        return make_state(n_qubits, amps / np.linalg.norm(amps))

    return parts.filter(lambda values: np.linalg.norm(values) > 0.1).map(build)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240607)


@pytest.fixture(scope='session')
def registry():
    return scenario_registry()


def random_basis(rng: np.random.Generator) -> CosenderBasis:
    return CosenderBasis(rng.uniform(0, math.pi), rng.uniform(0, 2 * math.pi))


def random_info(rng: np.random.Generator):
    return bloch_state(BlochAngles(math.acos(1 - 2 * rng.random()), rng.uniform(0, 2 * math.pi)))
