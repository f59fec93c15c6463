import logging
from dataclasses import dataclass
from typing import List, Sequence, Union

import numpy as np

from py_tripartite import exceptions
from py_tripartite.catalog import CorrectionTable, Scenario
from py_tripartite.measurement import CosenderBasis, bell_state, cosender_states
from py_tripartite.models import BellOutcome, CosenderOutcome, Pauli, Tolerance
from py_tripartite.qcore import (
    StateVector, apply_single, basis_state, inner, norm2, project_pair, project_single, tensor
)

logger = logging.getLogger(__name__)

INFO_QUBIT = 0

BasisSpec = Union[CosenderBasis, Sequence[CosenderBasis]]


@dataclass(frozen=True)
class OutcomeRecord:
    """
    One measurement branch.

    Attributes:
        j (BellOutcome): the sender's outcome.
        k (CosenderOutcome): the co-sender's outcome.
        pauli (Pauli): the receiver's correction.
        tau_unnormalized (StateVector): the corrected, unnormalized receiver state.
        probability (float): the branch probability, the squared norm of tau_unnormalized.
        branch_fidelity (float): |⟨ψ|τ⟩|² for the normalized receiver state; 0 for a zero-probability branch.

    """
    j: BellOutcome
    k: CosenderOutcome
    pauli: Pauli
    tau_unnormalized: StateVector
    probability: float
    branch_fidelity: float

    @property
    def weighted_fidelity(self) -> float:
        return self.probability * self.branch_fidelity


def basis_for(basis: BasisSpec, j: int) -> CosenderBasis:
    """
    Get the co-sender basis used after the sender's outcome j.

    Args:
        basis (BasisSpec): one shared basis, or four bases indexed by j.
        j (int): the sender's outcome.

    Returns:
        CosenderBasis: the basis.

    Raises:
        ValueError: a per-j list does not hold four bases.

    """
    if isinstance(basis, CosenderBasis):
        return basis

    if len(basis) != 4:
        raise ValueError(f'Per-outcome bases need 4 entries, got {len(basis)}')

    return basis[j - 1]


def assemble(info: StateVector, s: Scenario) -> StateVector:
    """
    Attach the information qubit to the shared state.

    Args:
        info (StateVector): the normalized information state.
        s (Scenario): the scenario.

    Returns:
        StateVector: info ⊗ shared; qubit 0 is the information qubit, qubits 1-3 belong to A, B, C.

    Raises:
        NotNormalized: the information state is not normalized.

    """
    if info.n_qubits != 1:
        raise exceptions.DimensionMismatch('The information state is a single qubit')

    if not info.normalized:
        raise exceptions.NotNormalized('The information state must be normalized')

    return tensor(info, s.vector())


def run_branch(
        info: StateVector, s: Scenario, basis: BasisSpec, table: CorrectionTable, j: int, k: int
) -> OutcomeRecord:
    """
    Run one branch (j, k) of the protocol.

    Args:
        info (StateVector): the information state.
        s (Scenario): the scenario.
        basis (BasisSpec): the co-sender basis, shared or per j.
        table (CorrectionTable): the receiver's protocol.
        j (int): the sender's outcome, 1..4.
        k (int): the co-sender's outcome, 1..2.

    Returns:
        OutcomeRecord: the branch.

    """
    j, k = BellOutcome(j), CosenderOutcome(k)
    composite = assemble(info, s)
    sender, cosender, receiver = s.roles.indices

    residual = project_pair(bell_state(j), (INFO_QUBIT, sender), composite)
    remaining = [q for q in (1, 2, 3) if q != sender]
    residual = project_single(cosender_states(basis_for(basis, j))[k - 1], remaining.index(cosender), residual)
    tau = apply_single(table.operator(j, k), 0, residual)

    probability = norm2(tau)
    overlap = abs(inner(info, tau)) ** 2
    fidelity = overlap / probability if probability > Tolerance.ZERO_PROBABILITY else 0.0
    return OutcomeRecord(
        j=j, k=k, pauli=table.pauli(j, k), tau_unnormalized=tau, probability=probability,
        branch_fidelity=min(fidelity, 1.0)
    )


def run_protocol(info: StateVector, s: Scenario, basis: BasisSpec, table: CorrectionTable) -> List[OutcomeRecord]:
    """
    Run all eight branches, ordered by j, then k.
    """
    return [run_branch(info, s, basis, table, j, k) for j in BellOutcome for k in CosenderOutcome]


def pointwise_fidelity(info: StateVector, s: Scenario, basis: BasisSpec, table: CorrectionTable) -> float:
    """
    Get Σ_{j,k} |⟨ψ|τ̃_jk⟩|² for one information state.
    """
    return sum(abs(inner(info, record.tau_unnormalized)) ** 2 for record in run_protocol(info, s, basis, table))


def branch_operators(s: Scenario, basis: BasisSpec, table: CorrectionTable) -> np.ndarray:
    """
    Get the corrected branch maps K_jk with τ̃_jk = K_jk ψ.

    The branch states are linear in the information state, so the columns of K_jk are the branch states of |0⟩ and |1⟩.

    Returns:
        np.ndarray: shape (8, 2, 2), branches ordered by j, then k.

    """
    columns = [run_protocol(basis_state(1, i), s, basis, table) for i in (0, 1)]
    return np.array([
        np.stack([columns[0][n].tau_unnormalized.amps, columns[1][n].tau_unnormalized.amps], axis=1)
        for n in range(8)
    ])


def fidelity_kernel(kraus: np.ndarray, psi: np.ndarray) -> np.ndarray:
    """
    Evaluate Σ_n |ψ† K_n ψ|² for many information states at once.

    Args:
        kraus (np.ndarray): branch maps, shape (m, 2, 2).
        psi (np.ndarray): information states, shape (N, 2).

    Returns:
        np.ndarray: shape (N,).

    """
    overlaps = np.einsum('ni,mij,nj->nm', psi.conj(), kraus, psi)
    return np.sum(np.abs(overlaps) ** 2, axis=1)
