import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from py_tripartite import exceptions
from py_tripartite.catalog import CorrectionTable, Scenario
from py_tripartite.measurement import CosenderBasis, pauli_eigenstates
from py_tripartite.models import Defaults, Pauli, Tolerance
from py_tripartite.protocol import BasisSpec, branch_operators, fidelity_kernel, pointwise_fidelity
from py_tripartite.qcore import pauli_operator
from py_tripartite.utils import canonical_angle, snap

logger = logging.getLogger(__name__)

FORM_POINTS: Tuple[Tuple[float, float], ...] = (
    (0.0, 0.0), (math.pi / 2, 0.0), (math.pi / 4, 0.0), (math.pi / 4, math.pi / 2)
)
VALIDATION_POINTS: Tuple[Tuple[float, float], ...] = (
    (0.1, 0.2), (0.37, 1.9), (1.1, 3.3), (2.0, 5.1), (2.9, 0.7), (0.77, 4.4), (1.5, 2.6), (2.45, 6.0)
)

IDENTITY_TABLE = CorrectionTable((('I',) * 4, ('I',) * 4))


@dataclass(frozen=True)
class FidelityForm:
    """
    Coefficients of F(ν, κ) = a + b·cos2ν + c·cosκ·sin2ν + d·sinκ·sin2ν.
    """
    a: float
    b: float
    c: float
    d: float

    def __call__(self, nu, kappa):
        return (
            self.a + self.b * np.cos(2 * nu) + self.c * np.cos(kappa) * np.sin(2 * nu)
            + self.d * np.sin(kappa) * np.sin(2 * nu)
        )

    def evaluate(self, nu: float, kappa: float) -> float:
        return float(self(nu, kappa))

    def __add__(self, other: 'FidelityForm') -> 'FidelityForm':
        return FidelityForm(self.a + other.a, self.b + other.b, self.c + other.c, self.d + other.d)

    def as_tuple(self) -> Tuple[float, float, float, float]:
        return self.a, self.b, self.c, self.d

    @property
    def amplitude(self) -> float:
        return math.sqrt(self.b ** 2 + self.c ** 2 + self.d ** 2)

    def max_delta(self, other) -> float:
        other = other.as_tuple() if isinstance(other, FidelityForm) else tuple(float(x) for x in other)
        return max(abs(x - y) for x, y in zip(self.as_tuple(), other))


@dataclass(frozen=True)
class BestCondition:
    """
    The analytic maximum of a FidelityForm.

    Attributes:
        nu_star (float): ν* in [0, π); the maximum repeats at ν* + mπ.
        kappa_star (float): κ* in [0, 2π); the maximum repeats at κ* + 2nπ.
        f_max (float): a + √(b² + c² + d²).
        angle_independent (bool): the fidelity does not depend on the angles; (ν*, κ*) is then (π/4, 0).

    """
    nu_star: float
    kappa_star: float
    f_max: float
    angle_independent: bool


def _check_nodes(n_theta: int, n_phi: int) -> None:
    if n_theta < Defaults.MIN_THETA_NODES or n_phi < Defaults.MIN_PHI_NODES:
        raise exceptions.InsufficientNodes(
            f'Quadrature needs at least {Defaults.MIN_THETA_NODES} θ and {Defaults.MIN_PHI_NODES} φ nodes, '
            f'got {n_theta} and {n_phi}'
        )


def bloch_columns(theta: np.ndarray, phi: np.ndarray) -> np.ndarray:
    """
    Get information states cos(θ/2)|0⟩ + e^{iφ}sin(θ/2)|1⟩ as rows of an (N, 2) array.
    """
    return np.stack([np.cos(theta / 2) + 0j, np.exp(1j * phi) * np.sin(theta / 2)], axis=1)


def sphere_nodes(n_theta: int = Defaults.THETA_NODES, n_phi: int = Defaults.PHI_NODES) -> Tuple[np.ndarray, np.ndarray]:
    """
    Get product quadrature nodes on the Bloch sphere: Gauss-Legendre in cosθ, uniform in φ.

    Returns:
        Tuple[np.ndarray, np.ndarray]: states (N, 2) and weights (N,) that sum to 1.

    Raises:
        InsufficientNodes: fewer nodes than the integrand needs.

    """
    _check_nodes(n_theta, n_phi)
    u, w = np.polynomial.legendre.leggauss(n_theta)
    phi = 2 * math.pi * np.arange(n_phi) / n_phi
    uu, pp = np.meshgrid(u, phi, indexing='ij')
    weights = np.repeat(w / 2, n_phi) / n_phi
    return bloch_columns(np.arccos(uu.reshape(-1)), pp.reshape(-1)), weights


def average_quadrature(
        s: Scenario, table: CorrectionTable, basis: BasisSpec, n_theta: int = Defaults.THETA_NODES,
        n_phi: int = Defaults.PHI_NODES
) -> float:
    """
    Average the fidelity over the Bloch sphere by product quadrature.

    The integrand has harmonic degree at most 2 in φ and is a polynomial of degree 2 in cosθ once φ is integrated,
    so the minimum node counts already integrate it exactly.

    Args:
        s (Scenario): the scenario.
        table (CorrectionTable): the receiver's protocol.
        basis (BasisSpec): the co-sender basis.
        n_theta (int): Gauss-Legendre nodes in cosθ, at least 4. (6)
        n_phi (int): uniform nodes in φ, at least 8. (12)

    Returns:
        float: the average fidelity.

    Raises:
        InsufficientNodes: the node counts are below the minimum.

    """
    psi, weights = sphere_nodes(n_theta, n_phi)
    return float(weights @ fidelity_kernel(branch_operators(s, basis, table), psi))


def average_two_design(s: Scenario, table: CorrectionTable, basis: BasisSpec) -> float:
    """
    Average the fidelity over the six Pauli eigenstates.

    The fidelity is quadratic in the information state's density operator, so this spherical 2-design reproduces the
    Bloch-sphere average exactly.
    """
    states = pauli_eigenstates()
    return sum(pointwise_fidelity(psi, s, basis, table) for psi in states) / len(states)


def average_monte_carlo(
        s: Scenario, table: CorrectionTable, basis: BasisSpec, n: int = Defaults.MONTE_CARLO_SAMPLES,
        seed: int = Defaults.SEED
) -> Tuple[float, float]:
    """
    Estimate the average fidelity from Haar-random information states.

    Samples are drawn in chunks from substreams spawned off the seed, so the result depends only on (n, seed).

    Args:
        s (Scenario): the scenario.
        table (CorrectionTable): the receiver's protocol.
        basis (BasisSpec): the co-sender basis.
        n (int): the number of samples, at least 1000. (100000)
        seed (int): the seed. (0)

    Returns:
        Tuple[float, float]: the mean and its standard error.

    Raises:
        InsufficientSamples: n is below 1000.

    """
    if n < Defaults.MIN_MONTE_CARLO_SAMPLES:
        raise exceptions.InsufficientSamples(
            f'Monte Carlo needs at least {Defaults.MIN_MONTE_CARLO_SAMPLES} samples, got {n}'
        )

    kraus = branch_operators(s, basis, table)
    sizes = [Defaults.MONTE_CARLO_CHUNK] * (n // Defaults.MONTE_CARLO_CHUNK)
    if n % Defaults.MONTE_CARLO_CHUNK:
        sizes.append(n % Defaults.MONTE_CARLO_CHUNK)

    values = []
    for size, child in zip(sizes, np.random.SeedSequence(seed).spawn(len(sizes))):
        rng = np.random.default_rng(child)
        theta = np.arccos(1 - 2 * rng.random(size))
        phi = 2 * math.pi * rng.random(size)
        values.append(fidelity_kernel(kraus, bloch_columns(theta, phi)))

    values = np.concatenate(values)
    return float(values.mean()), float(values.std(ddof=1) / math.sqrt(n))


def fit_form(values: np.ndarray) -> np.ndarray:
    """
    Solve (a, b, c, d) from values at FORM_POINTS: a+b, a-b, a+c, a+d. The leading axis indexes the points.
    """
    f1, f2, f3, f4 = values
    a = (f1 + f2) / 2
    return np.stack([a, (f1 - f2) / 2, f3 - a, f4 - a])


def _evaluate_coefficients(coefficients: np.ndarray, nu: float, kappa: float) -> np.ndarray:
    a, b, c, d = coefficients
    return a + b * math.cos(2 * nu) + (c * math.cos(kappa) + d * math.sin(kappa)) * math.sin(2 * nu)


def _validate(coefficients: np.ndarray, validation: List[np.ndarray], context: str) -> None:
    residual = max(
        float(np.max(np.abs(_evaluate_coefficients(coefficients, nu, kappa) - value)))
        for (nu, kappa), value in zip(VALIDATION_POINTS, validation)
    )
    if residual > Tolerance.VALIDATION:
        raise exceptions.ValidationResidualExceeded(residual, Tolerance.VALIDATION, context)


def extract_form(s: Scenario, table: CorrectionTable) -> FidelityForm:
    """
    Extract the analytic form of the average fidelity from exact quadrature at four angle pairs.

    Args:
        s (Scenario): the scenario.
        table (CorrectionTable): the receiver's protocol; one basis is shared by all outcomes j.

    Returns:
        FidelityForm: the coefficients.

    Raises:
        ValidationResidualExceeded: the form misses one of eight further evaluations by more than 1e-9.

    """
    def average(nu: float, kappa: float) -> float:
        return average_quadrature(s, table, CosenderBasis(nu, kappa))

    coefficients = fit_form(np.array([average(nu, kappa) for nu, kappa in FORM_POINTS]))
    _validate(coefficients, [np.array(average(nu, kappa)) for nu, kappa in VALIDATION_POINTS], f'{s} {table}')
    return FidelityForm(*(float(x) for x in coefficients))


def _cell_averages(s: Scenario, nu: float, kappa: float, psi: np.ndarray, weights: np.ndarray) -> np.ndarray:
    raw = branch_operators(s, CosenderBasis(nu, kappa), IDENTITY_TABLE)
    # Branches come ordered by j then k; cells are row-major by k then j.
    raw = raw.reshape(4, 2, 2, 2).transpose(1, 0, 2, 3).reshape(8, 2, 2)
    paulis = np.array([pauli_operator(p).matrix for p in Pauli])
    corrected = np.einsum('pab,cbd->cpad', paulis, raw)
    overlaps = np.einsum('ni,cpij,nj->cpn', psi.conj(), corrected, psi)
    return np.abs(overlaps) ** 2 @ weights


def extract_cell_forms(s: Scenario) -> np.ndarray:
    """
    Extract the form contributed by every cell of a correction table, for every Pauli in that cell.

    The average fidelity of a table is the sum of its eight cell forms.

    Returns:
        np.ndarray: shape (8, 4, 4): cell (row-major, k then j), Pauli (I, σx, σy, σz), coefficient (a, b, c, d).

    Raises:
        ValidationResidualExceeded: a cell misses the four-term model.

    """
    psi, weights = sphere_nodes()
    coefficients = fit_form(np.array([_cell_averages(s, nu, kappa, psi, weights) for nu, kappa in FORM_POINTS]))
    _validate(
        coefficients, [_cell_averages(s, nu, kappa, psi, weights) for nu, kappa in VALIDATION_POINTS], f'{s} cells'
    )
    return np.moveaxis(coefficients, 0, -1)


def table_form(cell_forms: np.ndarray, table: CorrectionTable) -> FidelityForm:
    """
    Sum the cell forms selected by a table.
    """
    digits = [int(p) for p in table.flat()]
    return FidelityForm(*(float(x) for x in cell_forms[np.arange(8), digits].sum(axis=0)))


def extract_column_forms(s: Scenario, table: CorrectionTable) -> List[FidelityForm]:
    """
    Split the form of a table into the shares of the sender's outcomes j = 1..4.
    """
    cell_forms = extract_cell_forms(s)
    forms = []
    for j in range(1, 5):
        cells = [4 * (k - 1) + (j - 1) for k in (1, 2)]
        total = sum(cell_forms[c, int(table.pauli(j, k))] for c, k in zip(cells, (1, 2)))
        forms.append(FidelityForm(*(float(x) for x in total)))

    return forms


def best_condition(f: FidelityForm) -> BestCondition:
    """
    Maximize a form in closed form.

    κ* = atan2(d, c) and 2ν* = atan2(√(c² + d²), b), canonicalized to ν* ∈ [0, π), κ* ∈ [0, 2π).

    Args:
        f (FidelityForm): the form.

    Returns:
        BestCondition: the maximizing angles and the maximum.

    """
    b, c, d = snap(f.b), snap(f.c), snap(f.d)
    amplitude = math.sqrt(b * b + c * c + d * d)
    if amplitude < Tolerance.DEGENERATE:
        return BestCondition(nu_star=math.pi / 4, kappa_star=0.0, f_max=f.a + amplitude, angle_independent=True)

    kappa = canonical_angle(math.atan2(d, c), 2 * math.pi)
    nu = canonical_angle(math.atan2(math.hypot(c, d), b) / 2, math.pi)
    return BestCondition(nu_star=nu, kappa_star=kappa, f_max=f.a + amplitude, angle_independent=False)


def grid_maximum(f: FidelityForm, size: int = Defaults.GRID_SIZE) -> Tuple[float, float, float]:
    """
    Scan a form on a size x size grid over [0, π) x [0, 2π).

    Returns:
        Tuple[float, float, float]: the largest value and its (ν, κ).

    """
    nu = math.pi * np.arange(size) / size
    kappa = 2 * math.pi * np.arange(size) / size
    values = f(nu[:, None], kappa[None, :])
    i, m = np.unravel_index(int(np.argmax(values)), values.shape)
    return float(values[i, m]), float(nu[i]), float(kappa[m])


def crossover_threshold(ghz: FidelityForm, w: FidelityForm) -> float:
    """
    Get the value of sin2ν above which the first form beats the second at κ = 0.

    Both forms must be free of cos2ν and sinκ terms.

    Raises:
        ValueError: the forms do not cross in this way.

    """
    if any(abs(x) > Tolerance.FORMULA for x in (ghz.b, ghz.d, w.b, w.d)):
        raise ValueError('The crossover is defined for forms a + c·cosκ·sin2ν only')

    slope = ghz.c - w.c
    if abs(slope) < Tolerance.FORMULA:
        raise ValueError('The forms do not cross')

    return (w.a - ghz.a) / slope


def check_oracles(
        s: Scenario, table: CorrectionTable, basis: CosenderBasis, form: Optional[FidelityForm] = None,
        tol: float = Tolerance.FORMULA
) -> Tuple[float, float, float]:
    """
    Compare quadrature, the 2-design and the analytic form at one basis.

    Returns:
        Tuple[float, float, float]: the three values.

    Raises:
        OracleDisagreement: two of them differ by more than tol.

    """
    form = form or extract_form(s, table)
    quadrature = average_quadrature(s, table, basis)
    two_design = average_two_design(s, table, basis)
    analytic = form.evaluate(basis.nu, basis.kappa)
    if abs(quadrature - two_design) > tol:
        raise exceptions.OracleDisagreement('2-design', quadrature, two_design)

    if abs(quadrature - analytic) > tol:
        raise exceptions.OracleDisagreement('form', quadrature, analytic)

    return quadrature, two_design, analytic
