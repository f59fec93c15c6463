import itertools
import logging
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from py_tripartite import exceptions
from py_tripartite.models import Deviation, Party, Pauli, ProtocolFamily, ProtocolName, StateType
from py_tripartite.qcore import (
    SIGMA_X, OneQubitOperator, StateVector, apply_single, make_state, pauli_operator, permute_qubits
)

logger = logging.getLogger(__name__)

# Basis kets in |x_A x_B x_C⟩ order; every state carries equal weights.
STATE_TERMS: Dict[StateType, Tuple[str, ...]] = {
    StateType.TYPE_2A_I: ('000', '100', '101'),
    StateType.TYPE_2A_II: ('000', '100', '110'),
    StateType.TYPE_2B: ('000', '111'),
    StateType.TYPE_3A: ('000', '101', '110'),
    StateType.TYPE_3B_I: ('000', '110', '111'),
    StateType.TYPE_3B_II: ('000', '100', '111'),
    StateType.TYPE_3B_III: ('000', '101', '111'),
    StateType.TYPE_4A: ('000', '100', '101', '110'),
    StateType.TYPE_4B_I: ('000', '100', '110', '111'),
    StateType.TYPE_4B_II: ('000', '100', '101', '111'),
    StateType.TYPE_4C: ('000', '101', '110', '111'),
    # Printed with a 1/√4 prefactor over five terms; normalized here.
    StateType.TYPE_5: ('000', '100', '101', '110', '111'),
    StateType.W_STD: ('001', '010', '100'),
}

# Target -> (qubits flipped by σx on 3bI, then factor order for permute_qubits).
EXTENDED_GHZ_MAPS: Dict[StateType, Tuple[Tuple[int, ...], Tuple[int, ...]]] = {
    StateType.TYPE_3B_II: ((0, 1, 2), (2, 1, 0)),
    StateType.TYPE_3B_III: ((), (0, 2, 1)),
}

# The extended GHZ representative used in the text, (|000⟩+|011⟩+|111⟩)/√3, is 3bI with parties A and C exchanged.
PRINTED_EXTENDED_GHZ_ORDER = (2, 1, 0)
PRINTED_TO_3BI = {Party.A: Party.C, Party.B: Party.B, Party.C: Party.A}


def parse_state_type(tag: Union[StateType, str]) -> StateType:
    """
    Convert a tag to a StateType.

    Raises:
        UnknownStateType: the tag is not in the catalog.

    """
    if isinstance(tag, StateType):
        return tag

    text = str(tag).strip()
    for state_type in StateType:
        if text.lower() == state_type.value.lower():
            return state_type

    raise exceptions.UnknownStateType(f'Unknown state type: {tag!r}')


def canonical_state(t: Union[StateType, str]) -> StateVector:
    """
    Get the canonical normalized three-qubit state of a catalog tag.

    Args:
        t (Union[StateType, str]): the tag, e.g. '2b', '3bI', 'W-std'.

    Returns:
        StateVector: the state with equal amplitudes 1/√(number of terms).

    Raises:
        UnknownStateType: the tag is not in the catalog.

    """
    terms = STATE_TERMS[parse_state_type(t)]
    amps = np.zeros(8, dtype=complex)
    weight = 1 / math.sqrt(len(terms))
    for ket in terms:
        amps[int(ket, 2)] = weight

    return make_state(3, amps)


def extended_ghz_image(target: Union[StateType, str]) -> StateVector:
    """
    Reproduce an extended GHZ variant from 3bI through its recorded basis flips and party permutation.

    Raises:
        UnknownStateType: the target is not 3bII or 3bIII.

    """
    target = parse_state_type(target)
    if target not in EXTENDED_GHZ_MAPS:
        raise exceptions.UnknownStateType(f'{target.value} is not reached from 3bI by a recorded map')

    flips, order = EXTENDED_GHZ_MAPS[target]
    s = canonical_state(StateType.TYPE_3B_I)
    for q in flips:
        s = apply_single(SIGMA_X, q, s)

    return permute_qubits(s, order)


def printed_extended_ghz() -> StateVector:
    return permute_qubits(canonical_state(StateType.TYPE_3B_I), PRINTED_EXTENDED_GHZ_ORDER)


@dataclass(frozen=True)
class RoleAssignment:
    """
    Who sends, who co-sends and who receives.

    Attributes:
        sender (Party): performs the Bell measurement together with the information qubit.
        cosender (Party): measures in the (ν, κ) basis.
        receiver (Party): applies the correction.

    """
    sender: Party
    cosender: Party
    receiver: Party

    def __post_init__(self) -> None:
        try:
            parties = tuple(Party(p) for p in (self.sender, self.cosender, self.receiver))

        except ValueError as e:
            raise exceptions.InvalidRoles(str(e))

        if len(set(parties)) != 3:
            raise exceptions.InvalidRoles(f'Roles must be a permutation of A, B, C, got {"".join(parties)}')

        object.__setattr__(self, 'sender', parties[0])
        object.__setattr__(self, 'cosender', parties[1])
        object.__setattr__(self, 'receiver', parties[2])

    @classmethod
    def parse(cls, text: str) -> 'RoleAssignment':
        """
        Parse roles written as 'A,B,C' (sender, co-sender, receiver).

        Raises:
            InvalidRoles: the text does not name three distinct parties.

        """
        parts = [p.strip().upper() for p in re.split(r'[,\s>-]+', text.strip()) if p.strip()]
        if len(parts) != 3:
            raise exceptions.InvalidRoles(f'Expected three parties, got {text!r}')

        return cls(*parts)

    def swapped(self) -> 'RoleAssignment':
        return RoleAssignment(self.sender, self.receiver, self.cosender)

    def translated(self, mapping: Dict[Party, Party]) -> 'RoleAssignment':
        return RoleAssignment(mapping[self.sender], mapping[self.cosender], mapping[self.receiver])

    @property
    def indices(self) -> Tuple[int, int, int]:
        return self.sender.index, self.cosender.index, self.receiver.index

    def __str__(self) -> str:
        return f'{self.sender.value},{self.cosender.value},{self.receiver.value}'

    def describe(self) -> str:
        return (
            f'{self.sender.name_in_text}(sender) → {self.cosender.name_in_text}(co-sender) → '
            f'{self.receiver.name_in_text}(receiver)'
        )


def all_role_assignments() -> List[RoleAssignment]:
    return [RoleAssignment(*p) for p in itertools.permutations(Party)]


@dataclass(frozen=True)
class Scenario:
    """
    A shared state plus a role assignment.

    Attributes:
        state (Union[StateType, StateVector]): a catalog tag, or an explicit normalized three-qubit state.
        roles (RoleAssignment): the roles.

    """
    state: Union[StateType, StateVector]
    roles: RoleAssignment

    def __post_init__(self) -> None:
        if isinstance(self.state, StateVector):
            if self.state.n_qubits != 3:
                raise exceptions.DimensionMismatch('A shared state has three qubits')

            if not self.state.normalized:
                raise exceptions.NotNormalized('The shared state must be normalized')

        else:
            object.__setattr__(self, 'state', parse_state_type(self.state))

        if isinstance(self.roles, str):
            object.__setattr__(self, 'roles', RoleAssignment.parse(self.roles))

    def vector(self) -> StateVector:
        if isinstance(self.state, StateVector):
            return self.state

        return canonical_state(self.state)

    @property
    def label(self) -> str:
        return self.state.value if isinstance(self.state, StateType) else 'custom'

    def __str__(self) -> str:
        return f'{self.label}[{self.roles}]'


@dataclass(frozen=True)
class CorrectionTable:
    """
    The receiver's protocol: a Pauli for every pair of outcomes (j, k).

    Attributes:
        cells (Tuple[Tuple[Pauli, ...], Tuple[Pauli, ...]]): rows k=1, 2; columns j=1..4.
        phases (Optional[Tuple[float, ...]]): optional global phase per cell, row-major. Phases never change a
            fidelity and are ignored by the encoding and by equality.

    """
    cells: Tuple[Tuple[Pauli, ...], Tuple[Pauli, ...]]
    phases: Optional[Tuple[float, ...]] = field(default=None, compare=False)

    def __post_init__(self) -> None:
        try:
            rows = tuple(tuple(Pauli.parse(c) for c in row) for row in self.cells)

        except (TypeError, ValueError) as e:
            raise exceptions.InvalidTable(str(e))

        if len(rows) != 2 or any(len(row) != 4 for row in rows):
            raise exceptions.InvalidTable('A correction table has 2 rows (k) of 4 cells (j)')

        object.__setattr__(self, 'cells', rows)
        if self.phases is not None:
            if len(self.phases) != 8:
                raise exceptions.InvalidTable('Phases are given for all 8 cells')

            object.__setattr__(self, 'phases', tuple(float(p) for p in self.phases))

    def pauli(self, j: int, k: int) -> Pauli:
        return self.cells[k - 1][j - 1]

    def operator(self, j: int, k: int) -> OneQubitOperator:
        op = pauli_operator(self.pauli(j, k))
        if self.phases:
            return op.scaled(np.exp(1j * self.phases[4 * (k - 1) + (j - 1)]))

        return op

    def flat(self) -> Tuple[Pauli, ...]:
        return self.cells[0] + self.cells[1]

    def encode(self) -> int:
        """
        Encode as 8 base-4 digits, row-major, the cell (j=1, k=1) most significant.
        """
        code = 0
        for p in self.flat():
            code = code * 4 + int(p)

        return code

    @classmethod
    def decode(cls, code: int) -> 'CorrectionTable':
        if not 0 <= code < 4 ** 8:
            raise exceptions.InvalidTable(f'Table code {code} is out of range')

        digits = [(code // 4 ** (7 - i)) % 4 for i in range(8)]
        return cls((tuple(digits[:4]), tuple(digits[4:])))

    @classmethod
    def parse(cls, text: str) -> 'CorrectionTable':
        """
        Parse a protocol name ('GHZ', 'W-I', 'W-II'), an integer code, or 8 row-major labels such as
        'I,Z,X,Y;Z,I,Y,X'.

        Raises:
            InvalidTable: the text is none of these.

        """
        text = text.strip()
        try:
            return named_protocol(text)

        except exceptions.UnknownProtocol:
            pass

        if text.isdigit():
            return cls.decode(int(text))

        labels = [p for p in re.split(r'[\s,;|]+', text) if p]
        if len(labels) != 8:
            raise exceptions.InvalidTable(f'Expected a protocol name, a code or 8 labels, got {text!r}')

        return cls((tuple(labels[:4]), tuple(labels[4:])))

    def with_phases(self, phases: Sequence[float]) -> 'CorrectionTable':
        return CorrectionTable(self.cells, tuple(phases))

    def rows_equal(self) -> bool:
        return self.cells[0] == self.cells[1]

    def __str__(self) -> str:
        return ' | '.join(' '.join(p.label for p in row) for row in self.cells)


_NAMED_PROTOCOLS = {
    ProtocolName.GHZ: (('I', 'Z', 'X', 'Y'), ('Z', 'I', 'Y', 'X')),
    ProtocolName.W_I: (('I', 'Z', 'X', 'Y'), ('I', 'Z', 'X', 'Y')),
    ProtocolName.W_II: (('X', 'Y', 'I', 'Z'), ('X', 'Y', 'I', 'Z')),
}


def parse_protocol_name(name: Union[ProtocolName, str]) -> ProtocolName:
    if isinstance(name, ProtocolName):
        return name

    normalized = str(name).strip().upper().replace('_', '-').replace(' ', '-')
    for protocol in ProtocolName:
        if normalized == protocol.value.upper():
            return protocol

    raise exceptions.UnknownProtocol(f'Unknown protocol: {name!r}')


def named_protocol(name: Union[ProtocolName, str]) -> CorrectionTable:
    """
    Get one of the three printed tables: 'GHZ', 'W-I' or 'W-II'.

    Raises:
        UnknownProtocol: the name is not one of them.

    """
    return CorrectionTable(_NAMED_PROTOCOLS[parse_protocol_name(name)])


Form = Tuple[Fraction, Fraction, Fraction, Fraction]


def _form(a: str, b: str = '0', c: str = '0', d: str = '0') -> Form:
    return Fraction(a), Fraction(b), Fraction(c), Fraction(d)


@dataclass(frozen=True)
class ReferenceResult:
    """
    One printed result.

    Attributes:
        key (str): a stable row identifier.
        group (str): the state family the row belongs to.
        scenario (Scenario): the catalog scenario that reproduces the row.
        printed_roles (str): the role assignment as written in the text.
        protocol (ProtocolName): the printed table that reproduces the row.
        protocol_family (ProtocolFamily): the printed family.
        form (Form): exact coefficients (a, b, c, d).
        best_condition (Optional[Tuple[float, float]]): canonical (ν*, κ*) when the fidelity depends on the angles.
        symmetric (bool): the row stands for both orderings of co-sender and receiver.
        protocol_phrase (Optional[str]): the wording when the text names an unlisted protocol.
        protocol_resolved_by_search (bool): the protocol was pinned down by computation, not read off a table.
        deviations (Tuple[str, ...]): deviation flags of the row.
        baseline (bool): a symmetric-state baseline rather than a row of the summary table.

    """
    key: str
    group: str
    scenario: Scenario
    printed_roles: str
    protocol: ProtocolName
    protocol_family: ProtocolFamily
    form: Form
    best_condition: Optional[Tuple[float, float]] = None
    symmetric: bool = False
    protocol_phrase: Optional[str] = None
    protocol_resolved_by_search: bool = False
    deviations: Tuple[str, ...] = ()
    baseline: bool = False

    @property
    def table(self) -> CorrectionTable:
        return named_protocol(self.protocol)

    @property
    def float_form(self) -> Tuple[float, float, float, float]:
        return tuple(float(x) for x in self.form)

    @property
    def printed_f_max(self) -> float:
        a, b, c, d = self.float_form
        return a + math.sqrt(b * b + c * c + d * d)


_QUARTER = (math.pi / 4, 0.0)
_EIGHTH = (math.pi / 8, 0.0)


def _row(
        key: str, group: str, state: StateType, roles: str, printed_roles: str, protocol: ProtocolName,
        form: Form, best: Optional[Tuple[float, float]] = None, **kwargs
) -> ReferenceResult:
    family = ProtocolFamily.W if named_protocol(protocol).rows_equal() else ProtocolFamily.GHZ
    deviations = list(kwargs.pop('deviations', ()))
    if not kwargs.get('baseline'):
        deviations.append(Deviation.HEADER_SWAP)

    if state == StateType.TYPE_5:
        deviations.append(Deviation.TYPE5_NORMALIZATION)

    if kwargs.get('protocol_resolved_by_search'):
        deviations.append(Deviation.PROTOCOL_RESOLVED)

    return ReferenceResult(
        key=key, group=group, scenario=Scenario(state, RoleAssignment.parse(roles)), printed_roles=printed_roles,
        protocol=protocol, protocol_family=family, form=form, best_condition=best, deviations=tuple(deviations),
        **kwargs
    )


@lru_cache(maxsize=None)
def scenario_registry() -> Tuple[ReferenceResult, ...]:
    """
    Get every printed result: the GHZ and W baselines followed by the rows of the summary table.

    Returns:
        Tuple[ReferenceResult, ...]: the registry in a fixed order.

    """
    ghz, w_i, w_ii = ProtocolName.GHZ, ProtocolName.W_I, ProtocolName.W_II
    ext, relabel = StateType.TYPE_3B_I, (Deviation.PARTY_RELABEL,)
    rows = [
        _row('ghz-baseline', 'GHZ', StateType.TYPE_2B, 'A,B,C', 'Alice(sender) → Bob(co-sender) → Cindy(receiver)',
             ghz, _form('2/3', '0', '1/3'), _QUARTER, baseline=True),
        _row('w-baseline', 'W', StateType.W_STD, 'A,B,C', 'Alice(sender) → Bob(co-sender) → Cindy(receiver)',
             w_ii, _form('7/9'), baseline=True, deviations=(Deviation.BASELINE_RESOLVED,)),

        _row('ext-ghz/A-B-C', 'extended GHZ', ext, 'C,B,A', 'Alice(sender) → Bob ↔ Cindy',
             ghz, _form('5/9', '0', '2/9'), _QUARTER, symmetric=True, deviations=relabel),
        _row('ext-ghz/B-A-C', 'extended GHZ', ext, 'B,C,A', 'Bob(sender) → Alice(co-sender) → Cindy(receiver)',
             w_i, _form('8/9'), deviations=relabel),
        _row('ext-ghz/B-C-A', 'extended GHZ', ext, 'B,A,C', 'Bob(sender) → Cindy(co-sender) → Alice(receiver)',
             ghz, _form('5/9', '0', '2/9'), _QUARTER, deviations=relabel),

        _row('4a/A-B-C', 'type 4a', StateType.TYPE_4A, 'A,B,C', 'Alice(sender) → Bob ↔ Cindy',
             w_i, _form('2/3'), symmetric=True),
        _row('4a/B-A-C', 'type 4a', StateType.TYPE_4A, 'B,A,C', 'Bob(sender) → Alice(co-sender) → Cindy(receiver)',
             w_ii, _form('2/3'), protocol_phrase='second W', protocol_resolved_by_search=True),
        _row('4a/B-C-A', 'type 4a', StateType.TYPE_4A, 'B,C,A', 'Bob(sender) → Cindy(co-sender) → Alice(receiver)',
             w_i, _form('2/3')),

        _row('4b/A-B-C', 'type 4b', StateType.TYPE_4B_I, 'A,B,C',
             'Alice(sender) → Bob(co-sender) ↔ Cindy(receiver)', ghz, _form('1/2', '0', '1/6'), _QUARTER),
        _row('4b/A-C-B', 'type 4b', StateType.TYPE_4B_I, 'A,C,B',
             'Alice(sender) → Cindy(co-sender) → Bob(receiver)', w_i, _form('3/4')),
        _row('4b/B-A-C', 'type 4b', StateType.TYPE_4B_I, 'B,A,C', 'Bob(sender) → Alice → Cindy',
             ghz, _form('7/12', '1/6', '1/6'), _EIGHTH),
        _row('4b/B-C-A', 'type 4b', StateType.TYPE_4B_I, 'B,C,A',
             'Bob(sender) → Cindy(co-sender) → Alice(receiver)', w_i, _form('3/4')),
        _row('4b/C-A-B', 'type 4b', StateType.TYPE_4B_I, 'C,A,B',
             'Cindy(sender) → Alice(co-sender) → Bob(receiver)', ghz, _form('7/12', '1/6', '1/6'), _EIGHTH),
        _row('4b/C-B-A', 'type 4b', StateType.TYPE_4B_I, 'C,B,A',
             'Cindy(sender) → Bob(co-sender) → Alice(receiver)', ghz, _form('1/2', '0', '1/6'), _QUARTER),

        _row('4c/A-B-C', 'type 4c', StateType.TYPE_4C, 'A,B,C', 'Alice(sender) → Bob ↔ Cindy',
             w_i, _form('3/4'), symmetric=True),
        _row('4c/B-A-C', 'type 4c', StateType.TYPE_4C, 'B,A,C', 'Bob(sender) → Alice(co-sender) → Cindy(receiver)',
             ghz, _form('1/2', '0', '1/6'), _QUARTER, protocol_phrase='second GHZ',
             protocol_resolved_by_search=True),
        _row('4c/B-C-A', 'type 4c', StateType.TYPE_4C, 'B,C,A', 'Bob(sender) → Cindy(co-sender) → Alice(receiver)',
             w_i, _form('3/4')),

        _row('5/A-B-C', 'type 5', StateType.TYPE_5, 'A,B,C', 'Alice(sender) → Bob ↔ Cindy',
             w_i, _form('2/3'), symmetric=True),
        _row('5/B-A-C', 'type 5', StateType.TYPE_5, 'B,A,C', 'Bob(sender) → Alice(co-sender) → Cindy(receiver)',
             ghz, _form('8/15', '2/15', '2/15'), _EIGHTH),
        _row('5/B-C-A', 'type 5', StateType.TYPE_5, 'B,C,A', 'Bob(sender) → Cindy(co-sender) → Alice(receiver)',
             w_i, _form('2/3')),
    ]
    logger.debug('registry holds %d rows', len(rows))
    return tuple(rows)


def registry_entry(key: str) -> ReferenceResult:
    """
    Get a registry row by key.

    Raises:
        KeyError: no row has the key.

    """
    for ref in scenario_registry():
        if ref.key == key:
            return ref

    raise KeyError(key)


def table_rows() -> List[ReferenceResult]:
    return [ref for ref in scenario_registry() if not ref.baseline]
