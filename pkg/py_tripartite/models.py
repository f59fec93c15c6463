import enum
from typing import Union


class Party(str, enum.Enum):
    """
    A party sharing the three-qubit state.

    The value is the party letter; the composite index is the qubit position in the four-qubit composite
    (the information qubit takes index 0).
    """
    A = 'A'
    B = 'B'
    C = 'C'

    @property
    def index(self) -> int:
        return 'ABC'.index(self.value) + 1

    @property
    def name_in_text(self) -> str:
        return {'A': 'Alice', 'B': 'Bob', 'C': 'Cindy'}[self.value]


class Pauli(enum.IntEnum):
    I = 0
    X = 1
    Y = 2
    Z = 3

    @property
    def label(self) -> str:
        return ('I', 'σx', 'σy', 'σz')[self.value]

    @classmethod
    def parse(cls, text: Union[str, int, 'Pauli']) -> 'Pauli':
        """
        Convert a label to a Pauli.

        Args:
            text (Union[str, int, Pauli]): one of 'I', 'X', 'Y', 'Z', 'σx', 'sx', 'x', ... or a digit 0-3.

        Returns:
            Pauli: the Pauli.

        Raises:
            ValueError: the label is not recognized.

        """
        if isinstance(text, Pauli):
            return text

        if isinstance(text, int):
            return cls(text)

        label = text.strip().lower().replace('σ', '').replace('sigma', '').replace('s', '').replace('_', '')
        aliases = {'i': cls.I, 'id': cls.I, 'x': cls.X, 'y': cls.Y, 'z': cls.Z}
        if label not in aliases:
            raise ValueError(f'Unknown Pauli label: {text!r}')

        return aliases[label]


class BellOutcome(enum.IntEnum):
    PHI_PLUS = 1
    PHI_MINUS = 2
    PSI_PLUS = 3
    PSI_MINUS = 4

    @property
    def label(self) -> str:
        return ('Φ+', 'Φ-', 'Ψ+', 'Ψ-')[self.value - 1]


class CosenderOutcome(enum.IntEnum):
    MU_PLUS = 1
    MU_MINUS = 2


class StateType(str, enum.Enum):
    TYPE_2A_I = '2aI'
    TYPE_2A_II = '2aII'
    TYPE_2B = '2b'
    TYPE_3A = '3a'
    TYPE_3B_I = '3bI'
    TYPE_3B_II = '3bII'
    TYPE_3B_III = '3bIII'
    TYPE_4A = '4a'
    TYPE_4B_I = '4bI'
    TYPE_4B_II = '4bII'
    TYPE_4C = '4c'
    TYPE_5 = '5'
    W_STD = 'W-std'


class ProtocolName(str, enum.Enum):
    GHZ = 'GHZ'
    W_I = 'W-I'
    W_II = 'W-II'


class ProtocolFamily(str, enum.Enum):
    GHZ = 'GHZ'
    W = 'W'
    OTHER = 'other'


class StateClass(str, enum.Enum):
    GHZ = 'GHZ-type'
    W = 'W-type'


class ReportFormat(str, enum.Enum):
    JSON = 'json'
    CSV = 'csv'
    MARKDOWN = 'markdown'


class Tolerance:
    NORMALIZED = 1e-12
    IDENTITY = 1e-12
    FORMULA = 1e-10
    VALIDATION = 1e-9
    TIE = 1e-9
    DEGENERATE = 1e-10
    ZERO_PROBABILITY = 1e-24
    MONTE_CARLO_SIGMAS = 5.0


class Defaults:
    THETA_NODES = 6
    PHI_NODES = 12
    MIN_THETA_NODES = 4
    MIN_PHI_NODES = 8
    MONTE_CARLO_SAMPLES = 100_000
    MIN_MONTE_CARLO_SAMPLES = 1000
    MONTE_CARLO_CHUNK = 25_000
    SEED = 0
    GRID_SIZE = 720
    ORACLE_POINTS = 4
    SCHEMA_VERSION = '1.0'


class Deviation:
    TYPE5_NORMALIZATION = 'type5-normalization'
    HEADER_SWAP = 'table-header-swap'
    PROTOCOL_RESOLVED = 'protocol-resolved-by-search'
    PARTY_RELABEL = 'extended-ghz-party-relabel'
    BASELINE_RESOLVED = 'baseline-resolved-by-oracle'
    EXCEEDS_PRINTED = 'search-exceeds-printed'
    FORM_MISMATCH = 'form-mismatch'
    CONDITION_MISMATCH = 'condition-mismatch'
    SYMMETRY_MISMATCH = 'symmetric-party-mismatch'
    MONTE_CARLO_OUTLIER = 'monte-carlo-outlier'
    ORACLE_OPEN = 'oracle-disagreement'
