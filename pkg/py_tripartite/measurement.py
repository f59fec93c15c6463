import math
from dataclasses import dataclass
from typing import List, Tuple, Union

import numpy as np

from py_tripartite.models import BellOutcome, CosenderOutcome
from py_tripartite.qcore import StateVector, make_state


@dataclass(frozen=True)
class CosenderBasis:
    """
    The co-sender's measurement basis.

    Attributes:
        nu (float): the angle ν in radians.
        kappa (float): the relative phase κ in radians.

    """
    nu: float
    kappa: float = 0.0


@dataclass(frozen=True)
class BlochAngles:
    """
    Bloch-sphere angles of an information state.

    Attributes:
        theta (float): the polar angle θ in [0, π].
        phi (float): the azimuth φ in [0, 2π).

    """
    theta: float
    phi: float = 0.0


def bell_state(j: Union[BellOutcome, int]) -> StateVector:
    """
    Get a Bell state: j=1 Φ+, j=2 Φ-, j=3 Ψ+, j=4 Ψ-.

    Args:
        j (Union[BellOutcome, int]): the sender's outcome label.

    Returns:
        StateVector: the two-qubit Bell state.

    Raises:
        ValueError: j is not in 1..4.

    """
    j = BellOutcome(j)
    r = 1 / math.sqrt(2)
    amps = {
        BellOutcome.PHI_PLUS: (r, 0, 0, r),
        BellOutcome.PHI_MINUS: (r, 0, 0, -r),
        BellOutcome.PSI_PLUS: (0, r, r, 0),
        BellOutcome.PSI_MINUS: (0, r, -r, 0),
    }[j]
    return make_state(2, amps)


def cosender_states(b: CosenderBasis) -> Tuple[StateVector, StateVector]:
    """
    Get the co-sender's basis vectors.

    |μ+⟩ = sinν|0⟩ + e^{iκ}cosν|1⟩ (outcome k=1), |μ-⟩ = cosν|0⟩ - e^{iκ}sinν|1⟩ (outcome k=2).

    Args:
        b (CosenderBasis): the basis angles.

    Returns:
        Tuple[StateVector, StateVector]: |μ+⟩ and |μ-⟩.

    """
    phase = np.exp(1j * b.kappa)
    mu_plus = make_state(1, (math.sin(b.nu), phase * math.cos(b.nu)))
    mu_minus = make_state(1, (math.cos(b.nu), -phase * math.sin(b.nu)))
    return mu_plus, mu_minus


def cosender_state(b: CosenderBasis, k: Union[CosenderOutcome, int]) -> StateVector:
    return cosender_states(b)[CosenderOutcome(k) - 1]


def bloch_state(a: BlochAngles) -> StateVector:
    """
    Get cos(θ/2)|0⟩ + e^{iφ}sin(θ/2)|1⟩.
    """
    return make_state(1, (math.cos(a.theta / 2), np.exp(1j * a.phi) * math.sin(a.theta / 2)))


def pauli_eigenstates() -> List[StateVector]:
    """
    Get the six Pauli eigenstates |0⟩, |1⟩, |±⟩, |±i⟩.

    Their uniform average reproduces the Bloch-sphere average of any quadratic functional of the state.
    """
    half = math.pi / 2
    angles = [
        BlochAngles(0.0, 0.0), BlochAngles(math.pi, 0.0),
        BlochAngles(half, 0.0), BlochAngles(half, math.pi),
        BlochAngles(half, half), BlochAngles(half, 3 * half),
    ]
    return [bloch_state(a) for a in angles]
