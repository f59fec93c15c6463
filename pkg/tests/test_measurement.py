import math

import numpy as np
import pytest
from hypothesis import given

from py_tripartite.measurement import (
    BlochAngles, CosenderBasis, bell_state, bloch_state, cosender_state, cosender_states, pauli_eigenstates
)
from py_tripartite.qcore import inner

from tests.conftest import bases


def _gram(states):
    return np.array([[inner(a, b) for b in states] for a in states])


def test_bell_basis_is_orthonormal():
    np.testing.assert_allclose(_gram([bell_state(j) for j in range(1, 5)]), np.eye(4), atol=1e-15)


def test_bell_state_labels():
    np.testing.assert_allclose(bell_state(2).amps, np.array([1, 0, 0, -1]) / math.sqrt(2))
    np.testing.assert_allclose(bell_state(4).amps, np.array([0, 1, -1, 0]) / math.sqrt(2))


def test_bell_state_rejects_unknown_outcome():
    with pytest.raises(ValueError):
        bell_state(5)


@given(basis=bases)
def test_cosender_basis_is_orthonormal(basis):
    np.testing.assert_allclose(_gram(cosender_states(basis)), np.eye(2), atol=1e-14)


@given(basis=bases)
def test_cosender_basis_has_period_pi(basis):
    shifted = cosender_states(CosenderBasis(basis.nu + math.pi, basis.kappa))
    for a, b in zip(cosender_states(basis), shifted):
        assert abs(inner(a, b)) == pytest.approx(1.0, abs=1e-12)


def test_cosender_basis_at_quarter_turn():
    mu_plus, mu_minus = cosender_states(CosenderBasis(math.pi / 4))
    np.testing.assert_allclose(mu_plus.amps, np.array([1, 1]) / math.sqrt(2))
    np.testing.assert_allclose(mu_minus.amps, np.array([1, -1]) / math.sqrt(2))


def test_cosender_basis_phase():
    mu_plus = cosender_state(CosenderBasis(math.pi / 4, math.pi / 2), 1)
    np.testing.assert_allclose(mu_plus.amps, np.array([1, 1j]) / math.sqrt(2), atol=1e-15)


def test_bloch_state_poles():
    np.testing.assert_allclose(bloch_state(BlochAngles(0.0)).amps, [1, 0])
    np.testing.assert_allclose(bloch_state(BlochAngles(math.pi)).amps, [0, 1], atol=1e-15)


def test_pauli_eigenstates_form_a_two_design(rng):
    states = pauli_eigenstates()
    assert len(states) == 6
    for _ in range(10):
        m = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        average = np.mean([abs(np.vdot(s.amps, m @ s.amps)) ** 2 for s in states])
        haar = (abs(np.trace(m)) ** 2 + np.sum(np.abs(m) ** 2)) / 6
        assert average == pytest.approx(haar, rel=1e-12)


def test_pauli_eigenstate_moments():
    states = pauli_eigenstates()
    assert np.mean([abs(s.amps[0]) ** 4 for s in states]) == pytest.approx(1 / 3)
    assert np.mean([abs(s.amps[0] * s.amps[1]) ** 2 for s in states]) == pytest.approx(1 / 6)
