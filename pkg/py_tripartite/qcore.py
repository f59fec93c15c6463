import logging
from typing import Iterable, Sequence, Tuple, Union

import numpy as np
from pretty_utils.type_functions.classes import AutoRepr

from py_tripartite import exceptions
from py_tripartite.models import Pauli, Tolerance

logger = logging.getLogger(__name__)

MAX_QUBITS = 4


class StateVector(AutoRepr):
    """
    An instance of a pure state vector.

    Attributes:
        n_qubits (int): the number of qubits.
        amps (np.ndarray): a read-only complex array of 2 ** n_qubits amplitudes, big-endian (qubit 0 is the most
            significant bit).
        normalized (bool): whether the squared norm lies within 1e-12 of 1.

    """

    def __init__(self, n_qubits: int, amps: np.ndarray) -> None:
        """
        Initialize the class. Use 'make_state' to get a validated instance.

        Args:
            n_qubits (int): the number of qubits.
            amps (np.ndarray): the amplitudes.

        """
        self.n_qubits: int = n_qubits
        self.amps: np.ndarray = amps
        self.amps.setflags(write=False)
        self.normalized: bool = abs(float(np.vdot(amps, amps).real) - 1.0) < Tolerance.NORMALIZED

    def __len__(self) -> int:
        return self.amps.shape[0]

    def tensor(self) -> np.ndarray:
        """
        Get the amplitudes reshaped to one axis per qubit.
        """
        return self.amps.reshape((2,) * self.n_qubits)

    def nonzero(self, tol: float = 1e-15) -> dict:
        """
        Get the nonzero amplitudes.

        Args:
            tol (float): amplitudes with a smaller modulus are skipped. (1e-15)

        Returns:
            dict: index -> amplitude.

        """
        return {int(i): complex(self.amps[i]) for i in np.flatnonzero(np.abs(self.amps) > tol)}


class OneQubitOperator(AutoRepr):
    """
    A 2x2 complex matrix acting on one qubit.

    Attributes:
        name (str): a display name.
        matrix (np.ndarray): the read-only matrix.

    """

    def __init__(self, matrix: Union[np.ndarray, Sequence[Sequence[complex]]], name: str = 'U') -> None:
        matrix = np.array(matrix, dtype=complex)
        if matrix.shape != (2, 2):
            raise exceptions.DimensionMismatch(f'A one-qubit operator must be 2x2, got {matrix.shape}')

        if not np.all(np.isfinite(matrix)):
            raise exceptions.NonFiniteAmplitude('The operator has non-finite entries')

        matrix.setflags(write=False)
        self.name: str = name
        self.matrix: np.ndarray = matrix

    def __matmul__(self, other: 'OneQubitOperator') -> 'OneQubitOperator':
        return OneQubitOperator(self.matrix @ other.matrix, name=f'{self.name}·{other.name}')

    def scaled(self, factor: complex) -> 'OneQubitOperator':
        return OneQubitOperator(factor * self.matrix, name=f'({factor:.3g}){self.name}')

    def is_unitary(self, tol: float = 1e-15) -> bool:
        return bool(np.allclose(self.matrix @ self.matrix.conj().T, np.eye(2), rtol=0.0, atol=tol))


I = OneQubitOperator([[1, 0], [0, 1]], name='I')
SIGMA_X = OneQubitOperator([[0, 1], [1, 0]], name='σx')
SIGMA_Y = OneQubitOperator([[0, -1j], [1j, 0]], name='σy')
SIGMA_Z = OneQubitOperator([[1, 0], [0, -1]], name='σz')

_PAULIS = {Pauli.I: I, Pauli.X: SIGMA_X, Pauli.Y: SIGMA_Y, Pauli.Z: SIGMA_Z}


def pauli_operator(p: Union[Pauli, str, int]) -> OneQubitOperator:
    """
    Get the named operator constant of a Pauli.

    Args:
        p (Union[Pauli, str, int]): the Pauli or its label.

    Returns:
        OneQubitOperator: I, σx, σy or σz.

    """
    return _PAULIS[Pauli.parse(p)]


def make_state(n: int, amps: Iterable[complex]) -> StateVector:
    """
    Build a state vector from amplitudes.

    Args:
        n (int): the number of qubits, 1 to 4.
        amps (Iterable[complex]): 2 ** n amplitudes, big-endian.

    Returns:
        StateVector: the state; 'normalized' is set iff the squared norm is within 1e-12 of 1.

    Raises:
        DimensionMismatch: the qubit count is out of range or the length is not 2 ** n.
        NonFiniteAmplitude: an amplitude is NaN or infinite.

    """
    if not 1 <= n <= MAX_QUBITS:
        raise exceptions.DimensionMismatch(f'Supported qubit counts are 1..{MAX_QUBITS}, got {n}')

    amps = np.array(list(amps) if not isinstance(amps, np.ndarray) else amps, dtype=complex).reshape(-1)
    if amps.shape[0] != 2 ** n:
        raise exceptions.DimensionMismatch(f'{n} qubits need {2 ** n} amplitudes, got {amps.shape[0]}')

    if not np.all(np.isfinite(amps)):
        raise exceptions.NonFiniteAmplitude('Amplitudes must be finite')

    return StateVector(n, amps)


def basis_state(n: int, index: int) -> StateVector:
    """
    Get the computational basis state |index⟩ on n qubits.
    """
    if not 0 <= index < 2 ** n:
        raise exceptions.QubitIndexError(f'Basis index {index} is out of range for {n} qubits')

    amps = np.zeros(2 ** n, dtype=complex)
    amps[index] = 1.0
    return make_state(n, amps)


def _check_qubit(s: StateVector, q: int) -> None:
    if not 0 <= q < s.n_qubits:
        raise exceptions.QubitIndexError(f'Qubit {q} is out of range for {s.n_qubits} qubits')


def tensor(a: StateVector, b: StateVector) -> StateVector:
    """
    Get the tensor product a ⊗ b, with the qubits of a first.

    Raises:
        DimensionMismatch: the product would exceed four qubits.

    """
    if a.n_qubits + b.n_qubits > MAX_QUBITS:
        raise exceptions.DimensionMismatch(
            f'{a.n_qubits} + {b.n_qubits} qubits exceed the limit of {MAX_QUBITS}'
        )

    return make_state(a.n_qubits + b.n_qubits, np.kron(a.amps, b.amps))


def apply_single(op: OneQubitOperator, target: int, s: StateVector) -> StateVector:
    """
    Apply a one-qubit operator to one tensor factor.

    Args:
        op (OneQubitOperator): the operator.
        target (int): the qubit index.
        s (StateVector): the state.

    Returns:
        StateVector: the transformed state.

    Raises:
        QubitIndexError: the target is out of range.

    """
    _check_qubit(s, target)
    psi = np.tensordot(op.matrix, s.tensor(), axes=([1], [target]))
    return make_state(s.n_qubits, np.moveaxis(psi, 0, target).reshape(-1))


def permute_qubits(s: StateVector, order: Sequence[int]) -> StateVector:
    """
    Reorder the tensor factors: qubit i of the result is qubit order[i] of the input.

    Raises:
        QubitIndexError: order is not a permutation of the qubit indices.

    """
    if sorted(order) != list(range(s.n_qubits)):
        raise exceptions.QubitIndexError(f'{tuple(order)} is not a permutation of {s.n_qubits} qubits')

    return make_state(s.n_qubits, np.transpose(s.tensor(), tuple(order)).reshape(-1))


def project_pair(bra: StateVector, targets: Tuple[int, int], s: StateVector) -> StateVector:
    """
    Contract ⟨bra| against two factors of a state.

    Args:
        bra (StateVector): a normalized two-qubit state; its first qubit meets targets[0].
        targets (Tuple[int, int]): the two qubit indices.
        s (StateVector): a state of at least three qubits.

    Returns:
        StateVector: the unnormalized residual on the remaining qubits, in their original order. Its squared norm is
        the branch probability.

    Raises:
        DimensionMismatch: the bra is not a two-qubit state or s has fewer than three qubits.
        NotNormalized: the bra is not normalized.
        QubitIndexError: the targets collide or are out of range.

    """
    q1, q2 = targets
    if bra.n_qubits != 2:
        raise exceptions.DimensionMismatch('A pair projection needs a two-qubit bra')

    if s.n_qubits < 3:
        raise exceptions.DimensionMismatch('A pair projection needs at least three qubits')

    if not bra.normalized:
        raise exceptions.NotNormalized('The projection bra must be normalized')

    _check_qubit(s, q1)
    _check_qubit(s, q2)
    if q1 == q2:
        raise exceptions.QubitIndexError(f'Projection targets collide: {q1}')

    residual = np.tensordot(np.conj(bra.tensor()), s.tensor(), axes=([0, 1], [q1, q2]))
    return make_state(s.n_qubits - 2, residual.reshape(-1))


def project_single(bra: StateVector, target: int, s: StateVector) -> StateVector:
    """
    Contract ⟨bra| against one factor of a state; see 'project_pair'.

    Raises:
        DimensionMismatch: the bra is not a one-qubit state or s has fewer than two qubits.
        NotNormalized: the bra is not normalized.
        QubitIndexError: the target is out of range.

    """
    if bra.n_qubits != 1:
        raise exceptions.DimensionMismatch('A single projection needs a one-qubit bra')

    if s.n_qubits < 2:
        raise exceptions.DimensionMismatch('A single projection needs at least two qubits')

    if not bra.normalized:
        raise exceptions.NotNormalized('The projection bra must be normalized')

    _check_qubit(s, target)
    residual = np.tensordot(np.conj(bra.amps), s.tensor(), axes=([0], [target]))
    return make_state(s.n_qubits - 1, residual.reshape(-1))


def inner(a: StateVector, b: StateVector) -> complex:
    """
    Get ⟨a|b⟩, conjugate-linear in a.

    Raises:
        DimensionMismatch: the states differ in dimension.

    """
    if a.n_qubits != b.n_qubits:
        raise exceptions.DimensionMismatch(f'Cannot take ⟨{a.n_qubits} qubits|{b.n_qubits} qubits⟩')

    return complex(np.vdot(a.amps, b.amps))


def norm2(s: StateVector) -> float:
    return inner(s, s).real
