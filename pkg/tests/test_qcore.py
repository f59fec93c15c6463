import math

import hypothesis.strategies as st
import numpy as np
import pytest
from hypothesis import given

from py_tripartite import exceptions
from py_tripartite.measurement import bell_state
from py_tripartite.qcore import (
    I, SIGMA_X, SIGMA_Y, SIGMA_Z, OneQubitOperator, apply_single, basis_state, inner, make_state, norm2,
    permute_qubits, project_pair, project_single, tensor
)

from tests.conftest import states


def test_make_state_checks_length():
    with pytest.raises(exceptions.DimensionMismatch):
        make_state(2, (1, 0, 0))


def test_make_state_checks_qubit_count():
    with pytest.raises(exceptions.DimensionMismatch):
        make_state(5, np.zeros(32))


def test_make_state_rejects_nan():
    with pytest.raises(exceptions.NonFiniteAmplitude):
        make_state(1, (float('nan'), 0))


def test_normalized_flag():
    assert make_state(1, (1 / math.sqrt(2), 1j / math.sqrt(2))).normalized
    assert not make_state(1, (1, 1)).normalized


@pytest.mark.parametrize('op', [I, SIGMA_X, SIGMA_Y, SIGMA_Z])
def test_paulis_are_unitary_involutions(op):
    assert op.is_unitary()
    np.testing.assert_array_equal((op @ op).matrix, np.eye(2))


def test_operator_shape_is_checked():
    with pytest.raises(exceptions.DimensionMismatch):
        OneQubitOperator(np.eye(3))


def test_tensor_is_big_endian():
    s = tensor(basis_state(1, 1), basis_state(2, 0))
    assert s.nonzero() == {4: 1}


def test_tensor_limit():
    with pytest.raises(exceptions.DimensionMismatch):
        tensor(basis_state(2, 0), basis_state(3, 0))


def test_apply_single_targets_one_factor():
    s = basis_state(3, 0)
    assert apply_single(SIGMA_X, 0, s).nonzero() == {4: 1}
    assert apply_single(SIGMA_X, 2, s).nonzero() == {1: 1}
    assert apply_single(SIGMA_Y, 1, s).nonzero() == {2: 1j}


def test_apply_single_bad_target():
    with pytest.raises(exceptions.QubitIndexError):
        apply_single(SIGMA_Z, 3, basis_state(3, 0))


def test_permute_qubits():
    assert permute_qubits(basis_state(3, 4), (2, 1, 0)).nonzero() == {1: 1}
    assert permute_qubits(basis_state(3, 6), (0, 2, 1)).nonzero() == {5: 1}


def test_permute_qubits_rejects_non_permutation():
    with pytest.raises(exceptions.QubitIndexError):
        permute_qubits(basis_state(3, 0), (0, 0, 1))


def test_project_pair_recovers_bell_partner():
    s = tensor(bell_state(1), basis_state(1, 1))
    residual = project_pair(bell_state(1), (0, 1), s)
    assert residual.n_qubits == 1
    np.testing.assert_allclose(residual.amps, [0, 1], atol=1e-15)


def test_project_pair_orthogonal_bell_gives_zero():
    s = tensor(bell_state(1), basis_state(1, 0))
    assert norm2(project_pair(bell_state(4), (0, 1), s)) == pytest.approx(0, abs=1e-30)


def test_project_pair_keeps_remaining_order():
    # |q0 q1 q2 q3⟩ = |0 1 0 1⟩; projecting q0, q2 on |00⟩ leaves |q1 q3⟩ = |11⟩.
    residual = project_pair(basis_state(2, 0), (0, 2), basis_state(4, 0b0101))
    assert residual.nonzero() == {3: 1}


def test_project_pair_errors():
    s = basis_state(3, 0)
    with pytest.raises(exceptions.QubitIndexError):
        project_pair(bell_state(1), (1, 1), s)

    with pytest.raises(exceptions.NotNormalized):
        project_pair(make_state(2, (1, 1, 0, 0)), (0, 1), s)

    with pytest.raises(exceptions.DimensionMismatch):
        project_pair(bell_state(1), (0, 1), basis_state(2, 0))


def test_project_single():
    s = make_state(2, (0, 0.6, 0, 0.8))
    residual = project_single(basis_state(1, 1), 1, s)
    np.testing.assert_allclose(residual.amps, [0.6, 0.8])


def test_inner_is_conjugate_linear_in_first_argument():
    a = make_state(1, (1j, 0))
    assert inner(a, basis_state(1, 0)) == pytest.approx(-1j)
    assert inner(basis_state(1, 0), a) == pytest.approx(1j)


def test_inner_dimension_mismatch():
    with pytest.raises(exceptions.DimensionMismatch):
        inner(basis_state(1, 0), basis_state(2, 0))


@given(s=states(3), op=st.sampled_from([I, SIGMA_X, SIGMA_Y, SIGMA_Z]), target=st.integers(0, 2))
def test_paulis_preserve_the_norm(s, op, target):
    assert norm2(apply_single(op, target, s)) == pytest.approx(norm2(s), abs=1e-12)


@given(bra=states(2), x=states(2), y=states(1))
def test_pair_projection_of_a_product(bra, x, y):
    residual = project_pair(bra, (0, 1), tensor(x, y))
    np.testing.assert_allclose(residual.amps, inner(bra, x) * y.amps, atol=1e-12)
