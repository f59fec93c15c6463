import math
from fractions import Fraction

import numpy as np
import pytest

from py_tripartite import exceptions
from py_tripartite.catalog import (
    STATE_TERMS, CorrectionTable, RoleAssignment, Scenario, all_role_assignments, canonical_state,
    extended_ghz_image, named_protocol, printed_extended_ghz, registry_entry, table_rows
)
from py_tripartite.models import Deviation, Party, Pauli, ProtocolFamily, ProtocolName, StateType
from py_tripartite.qcore import SIGMA_X, apply_single, make_state


@pytest.mark.parametrize('tag', list(StateType))
def test_canonical_states_are_normalized(tag):
    s = canonical_state(tag)
    assert s.n_qubits == 3
    assert s.normalized
    assert len(s.nonzero()) == len(STATE_TERMS[tag])


def test_w_state_amplitudes():
    amps = {i: a.real for i, a in canonical_state('W-std').nonzero().items()}
    assert amps == pytest.approx({1: 3 ** -0.5, 2: 3 ** -0.5, 4: 3 ** -0.5})


def test_type5_is_normalized_over_five_terms():
    amps = canonical_state('5').nonzero()
    assert sorted(amps) == [0, 4, 5, 6, 7]
    assert all(abs(a) == pytest.approx(1 / math.sqrt(5)) for a in amps.values())


def test_unknown_state_type():
    with pytest.raises(exceptions.UnknownStateType):
        canonical_state('1')


def test_tags_are_case_insensitive():
    np.testing.assert_array_equal(canonical_state('3BI').amps, canonical_state(StateType.TYPE_3B_I).amps)


@pytest.mark.parametrize('target', ['3bII', '3bIII'])
def test_extended_ghz_variants_follow_from_3bi(target):
    np.testing.assert_allclose(extended_ghz_image(target).amps, canonical_state(target).amps, atol=1e-15)


def test_extended_ghz_image_rejects_other_targets():
    with pytest.raises(exceptions.UnknownStateType):
        extended_ghz_image('4a')


def test_printed_extended_ghz_representative():
    assert sorted(printed_extended_ghz().nonzero()) == [0b000, 0b011, 0b111]


def test_flip_on_a_maps_tri_bell_to_w():
    image = apply_single(SIGMA_X, 0, canonical_state('3a'))
    np.testing.assert_allclose(image.amps, canonical_state('W-std').amps, atol=1e-15)


def test_roles_parse():
    roles = RoleAssignment.parse('B, C, A')
    assert (roles.sender, roles.cosender, roles.receiver) == (Party.B, Party.C, Party.A)
    assert roles.indices == (2, 3, 1)
    assert str(roles) == 'B,C,A'
    assert str(roles.swapped()) == 'B,A,C'


@pytest.mark.parametrize('text', ['A,A,C', 'A,B', 'A,B,D'])
def test_invalid_roles(text):
    with pytest.raises(exceptions.InvalidRoles):
        RoleAssignment.parse(text)


def test_all_role_assignments():
    roles = all_role_assignments()
    assert len({str(r) for r in roles}) == 6


def test_scenario_accepts_role_text():
    s = Scenario('4bI', 'B,A,C')
    assert s.state == StateType.TYPE_4B_I
    assert str(s) == '4bI[B,A,C]'


def test_scenario_rejects_unnormalized_vector():
    with pytest.raises(exceptions.NotNormalized):
        Scenario(make_state(3, np.ones(8)), 'A,B,C')


def test_pauli_parse():
    assert Pauli.parse('σx') == Pauli.X
    assert Pauli.parse('sigma_y') == Pauli.Y
    assert Pauli.parse('Z') == Pauli.Z
    assert Pauli.parse('id') == Pauli.I
    with pytest.raises(ValueError):
        Pauli.parse('q')


def test_table_encoding():
    ghz = named_protocol('GHZ')
    assert ghz.encode() == 14025
    assert CorrectionTable.decode(14025) == ghz
    assert CorrectionTable.decode(0).flat() == (Pauli.I,) * 8
    assert CorrectionTable.decode(4 ** 8 - 1).flat() == (Pauli.Z,) * 8


@pytest.mark.parametrize('name', list(ProtocolName))
def test_named_tables_decode_back(name):
    t = named_protocol(name)
    assert CorrectionTable.decode(t.encode()) == t


def test_decode_range():
    with pytest.raises(exceptions.InvalidTable):
        CorrectionTable.decode(4 ** 8)


def test_table_parse():
    assert CorrectionTable.parse('I,Z,X,Y;Z,I,Y,X') == named_protocol('GHZ')
    assert CorrectionTable.parse('w-ii') == named_protocol(ProtocolName.W_II)
    assert CorrectionTable.parse('0') == CorrectionTable.decode(0)
    with pytest.raises(exceptions.InvalidTable):
        CorrectionTable.parse('I Z X')


def test_table_cells():
    ghz = named_protocol('GHZ')
    assert ghz.pauli(1, 1) == Pauli.I
    assert ghz.pauli(3, 2) == Pauli.Y
    assert not ghz.rows_equal()
    assert named_protocol('W-I').rows_equal()


def test_phases_do_not_change_identity():
    ghz = named_protocol('GHZ')
    phased = ghz.with_phases([0.1 * i for i in range(8)])
    assert phased == ghz
    assert phased.encode() == ghz.encode()
    np.testing.assert_allclose(phased.operator(2, 1).matrix, np.exp(0.1j) * np.diag([1, -1]))


def test_unknown_protocol_name():
    with pytest.raises(exceptions.UnknownProtocol):
        named_protocol('W-III')


def test_registry_shape(registry):
    assert len(registry) == 20
    assert len(table_rows()) == 18
    assert len({ref.key for ref in registry}) == 20


def test_registry_flags(registry):
    for ref in registry:
        assert (Deviation.HEADER_SWAP in ref.deviations) != ref.baseline
        assert (Deviation.TYPE5_NORMALIZATION in ref.deviations) == (ref.scenario.state == StateType.TYPE_5)


def test_registry_resolved_protocols():
    second_w = registry_entry('4a/B-A-C')
    assert second_w.protocol == ProtocolName.W_II
    assert second_w.protocol_phrase == 'second W'
    assert Deviation.PROTOCOL_RESOLVED in second_w.deviations

    second_ghz = registry_entry('4c/B-A-C')
    assert second_ghz.protocol == ProtocolName.GHZ
    assert second_ghz.protocol_family == ProtocolFamily.GHZ


def test_registry_printed_f_max():
    assert registry_entry('5/B-A-C').printed_f_max == pytest.approx(8 / 15 + 2 * math.sqrt(2) / 15)
    assert registry_entry('ghz-baseline').form == (Fraction(2, 3), 0, Fraction(1, 3), 0)


def test_registry_entry_unknown_key():
    with pytest.raises(KeyError):
        registry_entry('6/A-B-C')
