import logging
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from pretty_utils.type_functions.classes import AutoRepr

from py_tripartite import exceptions
from py_tripartite.catalog import (
    CorrectionTable, ReferenceResult, RoleAssignment, Scenario, all_role_assignments, named_protocol
)
from py_tripartite.fidelity import (
    BestCondition, FidelityForm, best_condition, extract_cell_forms, extract_column_forms, extract_form,
    grid_maximum
)
from py_tripartite.measurement import CosenderBasis
from py_tripartite.models import Defaults, ProtocolFamily, ProtocolName, StateClass, StateType, Tolerance
from py_tripartite.utils import circular_distance

logger = logging.getLogger(__name__)

N_TABLES = 4 ** 8

# The concluding two-class table covers the genuinely tripartite catalog states.
CLASSIFIED_TYPES: Tuple[StateType, ...] = (
    StateType.TYPE_2B, StateType.TYPE_3A, StateType.TYPE_3B_I, StateType.TYPE_3B_II, StateType.TYPE_3B_III,
    StateType.TYPE_4A, StateType.TYPE_4B_I, StateType.TYPE_4B_II, StateType.TYPE_4C, StateType.TYPE_5,
)


def protocol_family(t: CorrectionTable) -> ProtocolFamily:
    """
    W if the receiver's correction ignores the co-sender's outcome (identical rows), otherwise GHZ.
    """
    return ProtocolFamily.W if t.rows_equal() else ProtocolFamily.GHZ


@dataclass(frozen=True)
class Maximizer:
    table: CorrectionTable
    form: FidelityForm
    condition: BestCondition

    @property
    def code(self) -> int:
        return self.table.encode()


class SearchReport(AutoRepr):
    """
    An instance of a protocol search result.

    Attributes:
        scenario (Scenario): the scenario.
        maximizers (Tuple[Maximizer, ...]): every table within 1e-9 of the best, sorted by table code.
        f_max_global (float): the best fidelity over tables and angles.
        family (ProtocolFamily): the family shared by all maximizers, or 'other' if they disagree.
        n_tables (int): the number of tables searched.

    """

    def __init__(
            self, scenario: Scenario, maximizers: Tuple[Maximizer, ...], f_max_global: float,
            family: ProtocolFamily, n_tables: int
    ) -> None:
        self.scenario: Scenario = scenario
        self.maximizers: Tuple[Maximizer, ...] = maximizers
        self.f_max_global: float = f_max_global
        self.family: ProtocolFamily = family
        self.n_tables: int = n_tables

    def codes(self) -> List[int]:
        return [m.code for m in self.maximizers]

    def contains(self, table: CorrectionTable) -> bool:
        return table.encode() in self.codes()

    @property
    def best(self) -> Maximizer:
        return self.maximizers[0]


def _digits(codes: np.ndarray) -> np.ndarray:
    return (codes[:, None] // 4 ** np.arange(7, -1, -1)) % 4


def search_tables(s: Scenario, candidates: Optional[Sequence[CorrectionTable]] = None) -> SearchReport:
    """
    Find the correction tables with the highest best-condition fidelity.

    Each cell of a table contributes its own form, so the forms of all tables are sums over one (8, 4, 4) array of
    validated cell forms.

    Args:
        s (Scenario): the scenario.
        candidates (Optional[Sequence[CorrectionTable]]): tables to search; all 4^8 tables if None.

    Returns:
        SearchReport: the maximizers and their family.

    Raises:
        ValidationResidualExceeded: a cell form fails validation.

    """
    cell_forms = extract_cell_forms(s)
    if candidates is None:
        codes = np.arange(N_TABLES)

    else:
        codes = np.array(sorted({t.encode() for t in candidates}), dtype=np.int64)

    coefficients = cell_forms[np.arange(8), _digits(codes)].sum(axis=1)
    f_max = coefficients[:, 0] + np.sqrt(np.sum(coefficients[:, 1:] ** 2, axis=1))
    f_max_global = float(f_max.max())

    maximizers = []
    for i in np.flatnonzero(f_max >= f_max_global - Tolerance.TIE):
        form = FidelityForm(*(float(x) for x in coefficients[i]))
        maximizers.append(Maximizer(CorrectionTable.decode(int(codes[i])), form, best_condition(form)))

    families = {protocol_family(m.table) for m in maximizers}
    family = families.pop() if len(families) == 1 else ProtocolFamily.OTHER
    logger.debug('%s: %d tables, f_max %.12f, %d maximizers', s, len(codes), f_max_global, len(maximizers))
    return SearchReport(
        scenario=s, maximizers=tuple(maximizers), f_max_global=f_max_global, family=family, n_tables=len(codes)
    )


def search_named(s: Scenario) -> SearchReport:
    """
    Search the three printed tables only.
    """
    return search_tables(s, [named_protocol(name) for name in ProtocolName])


def optimize_angles(s: Scenario, t: CorrectionTable, grid_size: int = Defaults.GRID_SIZE) -> BestCondition:
    """
    Get the best co-sender basis for a fixed table, cross-checked on a grid.

    The form is invariant under (ν, κ) -> (π - ν, κ + π), so the grid may land on either image of the maximum.

    Args:
        s (Scenario): the scenario.
        t (CorrectionTable): the receiver's protocol.
        grid_size (int): grid points per angle. (720)

    Returns:
        BestCondition: the analytic optimum.

    Raises:
        ValidationResidualExceeded: the form fails validation.
        OracleDisagreement: the grid contradicts the analytic optimum.

    """
    form = extract_form(s, t)
    condition = best_condition(form)
    grid_max, nu, kappa = grid_maximum(form, grid_size)
    if grid_max > condition.f_max + Tolerance.TIE:
        raise exceptions.OracleDisagreement('grid maximum', condition.f_max, grid_max)

    if not condition.angle_independent:
        nu_step, kappa_step = math.pi / grid_size, 2 * math.pi / grid_size
        check_kappa = math.hypot(form.c, form.d) > Tolerance.TIE
        images = ((condition.nu_star, condition.kappa_star), (-condition.nu_star, condition.kappa_star + math.pi))
        if not any(
                circular_distance(nu, image_nu, math.pi) <= nu_step * 1.001
                and (not check_kappa or circular_distance(kappa, image_kappa, 2 * math.pi) <= kappa_step * 1.001)
                for image_nu, image_kappa in images
        ):
            raise exceptions.OracleDisagreement('grid argmax ν', condition.nu_star, nu)

    return condition


@dataclass(frozen=True)
class RegistryComparison:
    """
    Exhaustive search against a printed result.

    Attributes:
        key (str): the registry key.
        printed_f_max (float): the best fidelity of the printed protocol.
        search_f_max (float): the best fidelity over all tables.
        exceeds_printed (bool): some table beats the printed protocol by more than 1e-9.
        report (SearchReport): the search.

    """
    key: str
    printed_f_max: float
    search_f_max: float
    exceeds_printed: bool
    report: SearchReport


def compare_with_registry(ref: ReferenceResult) -> RegistryComparison:
    """
    Search a registry scenario and compare with its printed protocol.

    Raises:
        OracleDisagreement: the search falls below the printed protocol, which a complete search cannot do.

    """
    report = search_tables(ref.scenario)
    if report.f_max_global < ref.printed_f_max - Tolerance.TIE:
        raise exceptions.OracleDisagreement(f'search of {ref.key}', ref.printed_f_max, report.f_max_global)

    exceeds = report.f_max_global > ref.printed_f_max + Tolerance.TIE
    if exceeds:
        logger.info('%s: search reaches %.12f above the printed %.12f', ref.key, report.f_max_global, ref.printed_f_max)

    return RegistryComparison(
        key=ref.key, printed_f_max=ref.printed_f_max, search_f_max=report.f_max_global, exceeds_printed=exceeds,
        report=report
    )


def best_over_roles(tag: StateType) -> Tuple[float, RoleAssignment]:
    """
    Get the best exhaustive-search fidelity of a state over all six role assignments.
    """
    results = [(search_tables(Scenario(tag, roles)).f_max_global, roles) for roles in all_role_assignments()]
    return max(results, key=lambda item: item[0])


def state_class(tag: StateType) -> StateClass:
    """
    Classify a state: GHZ-type iff some role assignment teleports perfectly, W-type otherwise.
    """
    f_max, roles = best_over_roles(tag)
    logger.debug('%s: best %.12f with roles %s', tag.value, f_max, roles)
    return StateClass.GHZ if f_max >= 1 - Tolerance.TIE else StateClass.W


def classification_table() -> Dict[StateClass, List[StateType]]:
    """
    Split the catalog states into the two classes.

    Returns:
        Dict[StateClass, List[StateType]]: both classes, states in catalog order.

    """
    table = {StateClass.GHZ: [], StateClass.W: []}
    for tag in CLASSIFIED_TYPES:
        table[state_class(tag)].append(tag)

    return table


@dataclass(frozen=True)
class PerOutcomeOptimum:
    """
    The co-sender basis optimized separately for each of the sender's outcomes.

    Attributes:
        conditions (Tuple[BestCondition, ...]): the optimum of each outcome's share, j = 1..4.
        f_max (float): the sum of the four shares' maxima.
        shared (BestCondition): the optimum with one basis for all outcomes.

    """
    conditions: Tuple[BestCondition, ...]
    f_max: float
    shared: BestCondition

    @property
    def bases(self) -> Tuple[CosenderBasis, ...]:
        return tuple(CosenderBasis(c.nu_star, c.kappa_star) for c in self.conditions)

    @property
    def gain(self) -> float:
        return self.f_max - self.shared.f_max


def optimize_per_j(s: Scenario, table: CorrectionTable) -> PerOutcomeOptimum:
    """
    Let the co-sender choose the basis after hearing the sender's outcome j.

    Args:
        s (Scenario): the scenario.
        table (CorrectionTable): the receiver's protocol.

    Returns:
        PerOutcomeOptimum: per-outcome optima; never below the shared optimum.

    """
    columns = extract_column_forms(s, table)
    conditions = tuple(best_condition(form) for form in columns)
    total = columns[0] + columns[1] + columns[2] + columns[3]
    return PerOutcomeOptimum(
        conditions=conditions, f_max=sum(c.f_max for c in conditions), shared=best_condition(total)
    )
