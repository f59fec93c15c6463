import argparse
import logging
import math
import sys
from pathlib import Path
from typing import List, Optional, Sequence

import numpy as np

from py_tripartite import exceptions
from py_tripartite.catalog import CorrectionTable, ReferenceResult, Scenario, parse_state_type, scenario_registry
from py_tripartite.fidelity import (
    BestCondition, average_monte_carlo, average_quadrature, average_two_design, best_condition, check_oracles,
    extract_form
)
from py_tripartite.measurement import BlochAngles, CosenderBasis, bloch_state
from py_tripartite.models import Defaults, Deviation, ReportFormat, Tolerance
from py_tripartite.protocol import run_protocol
from py_tripartite.report import ReportDocument, condition_record, form_record, render
from py_tripartite.search import (
    CLASSIFIED_TYPES, compare_with_registry, optimize_angles, optimize_per_j, protocol_family, search_named,
    search_tables, state_class
)
from py_tripartite.utils import circular_distance, parse_angle

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_USAGE = 2

USAGE_ERRORS = (
    exceptions.CatalogException, exceptions.QuantumStateException, exceptions.InsufficientNodes,
    exceptions.InsufficientSamples, exceptions.UnsupportedFormat, ValueError,
)


def _table_inputs(table: CorrectionTable, text: str) -> dict:
    return {'protocol': text, 'table': str(table), 'table_code': table.encode()}


def cmd_run(args: argparse.Namespace) -> ReportDocument:
    s = Scenario(parse_state_type(args.state), args.roles)
    table = CorrectionTable.parse(args.protocol)
    nu, kappa = parse_angle(args.nu, args.degrees), parse_angle(args.kappa, args.degrees)
    theta, phi = parse_angle(args.theta, args.degrees), parse_angle(args.phi, args.degrees)
    basis = CosenderBasis(nu, kappa)
    info = bloch_state(BlochAngles(theta, phi))

    records = run_protocol(info, s, basis, table)
    rows = [
        {
            'j': int(r.j), 'k': int(r.k), 'bell': r.j.label, 'pauli': r.pauli.label, 'probability': r.probability,
            'branch_fidelity': r.branch_fidelity, 'weighted_fidelity': r.weighted_fidelity,
            'tau_unnormalized': [{'re': float(z.real), 'im': float(z.imag)} for z in r.tau_unnormalized.amps],
        }
        for r in records
    ]

    flags = []
    form = extract_form(s, table)
    quadrature = average_quadrature(s, table, basis)
    two_design = average_two_design(s, table, basis)
    analytic = form.evaluate(nu, kappa)
    mean, stderr = average_monte_carlo(s, table, basis, n=args.mc_samples, seed=args.seed)
    if abs(quadrature - two_design) > Tolerance.FORMULA or abs(quadrature - analytic) > Tolerance.FORMULA:
        flags.append(Deviation.ORACLE_OPEN)

    if abs(mean - quadrature) > Tolerance.MONTE_CARLO_SIGMAS * stderr + Tolerance.IDENTITY:
        flags.append(Deviation.MONTE_CARLO_OUTLIER)

    summary = {
        'average': quadrature,
        'two_design': two_design,
        'form': form_record(form),
        'form_value': analytic,
        'monte_carlo': {'mean': mean, 'stderr': stderr},
        'probability_total': sum(r.probability for r in records),
        'pointwise_fidelity': sum(r.weighted_fidelity for r in records),
        'family': protocol_family(table).value,
    }
    inputs = {
        'state': s.label, 'roles': str(s.roles), **_table_inputs(table, args.protocol), 'nu': nu, 'kappa': kappa,
        'theta': theta, 'phi': phi, 'seed': args.seed, 'mc_samples': args.mc_samples,
    }
    return ReportDocument('run', inputs, rows, summary, flags)


def _oracle_bases(condition: BestCondition, seed: int) -> List[CosenderBasis]:
    rng = np.random.default_rng(seed)
    bases = [CosenderBasis(condition.nu_star, condition.kappa_star)]
    for _ in range(Defaults.ORACLE_POINTS):
        bases.append(CosenderBasis(rng.uniform(0, math.pi), rng.uniform(0, 2 * math.pi)))

    return bases


def _table_row(
        ref: ReferenceResult, seed: int = Defaults.SEED, mc_samples: int = Defaults.MONTE_CARLO_SAMPLES
) -> dict:
    form = extract_form(ref.scenario, ref.table)
    condition = best_condition(form)
    deltas = [computed - printed for computed, printed in zip(form.as_tuple(), ref.float_form)]
    deviations = list(ref.deviations)
    if max(abs(d) for d in deltas) > Tolerance.VALIDATION:
        deviations.append(Deviation.FORM_MISMATCH)

    if ref.best_condition is not None:
        nu, kappa = ref.best_condition
        if (
                condition.angle_independent
                or circular_distance(condition.nu_star, nu, math.pi) > Tolerance.FORMULA
                or circular_distance(condition.kappa_star, kappa, 2 * math.pi) > Tolerance.FORMULA
        ):
            deviations.append(Deviation.CONDITION_MISMATCH)

    swap_delta = None
    if ref.symmetric:
        swapped = extract_form(Scenario(ref.scenario.state, ref.scenario.roles.swapped()), ref.table)
        swap_delta = form.max_delta(swapped)
        if swap_delta > Tolerance.VALIDATION:
            deviations.append(Deviation.SYMMETRY_MISMATCH)

    try:
        for basis in _oracle_bases(condition, seed):
            check_oracles(ref.scenario, ref.table, basis, form)

    except exceptions.OracleDisagreement as e:
        logger.debug('%s: %s', ref.key, e)
        deviations.append(Deviation.ORACLE_OPEN)

    basis = CosenderBasis(condition.nu_star, condition.kappa_star)
    mean, stderr = average_monte_carlo(ref.scenario, ref.table, basis, n=mc_samples, seed=seed)
    if abs(mean - condition.f_max) > Tolerance.MONTE_CARLO_SIGMAS * stderr + Tolerance.IDENTITY:
        deviations.append(Deviation.MONTE_CARLO_OUTLIER)

    comparison = compare_with_registry(ref)
    if comparison.exceeds_printed:
        deviations.append(Deviation.EXCEEDS_PRINTED)

    return {
        'key': ref.key,
        'group': ref.group,
        'state': ref.scenario.label,
        'roles': str(ref.scenario.roles),
        'printed_roles': ref.printed_roles,
        'protocol': ref.protocol.value,
        'protocol_family': ref.protocol_family.value,
        'protocol_phrase': ref.protocol_phrase,
        'symmetric': ref.symmetric,
        'form': form_record(form),
        'printed_form': form_record(ref.float_form),
        'form_delta': dict(zip('abcd', deltas)),
        'swap_delta': swap_delta,
        'best_condition': condition_record(condition),
        'printed_condition': list(ref.best_condition) if ref.best_condition else None,
        'monte_carlo': {'mean': mean, 'stderr': stderr},
        'search': {
            'f_max': comparison.search_f_max,
            'family': comparison.report.family.value,
            'maximizers': len(comparison.report.maximizers),
        },
        'deviations': deviations,
    }


TABLE_FAILURES = (
    Deviation.FORM_MISMATCH, Deviation.CONDITION_MISMATCH, Deviation.SYMMETRY_MISMATCH, Deviation.ORACLE_OPEN,
    Deviation.MONTE_CARLO_OUTLIER,
)


def cmd_table(args: argparse.Namespace) -> ReportDocument:
    rows = [_table_row(ref, args.seed, args.mc_samples) for ref in scenario_registry()]
    flags = [f'{row["key"]}: {d}' for row in rows for d in row['deviations'] if d in TABLE_FAILURES]
    summary = {
        'rows': len(rows),
        'exceeds_printed': [row['key'] for row in rows if Deviation.EXCEEDS_PRINTED in row['deviations']],
    }
    return ReportDocument('table', {'seed': args.seed, 'mc_samples': args.mc_samples}, rows, summary, flags)


def cmd_search(args: argparse.Namespace) -> ReportDocument:
    tag = parse_state_type(args.state)
    s = Scenario(tag, args.roles)
    report = search_named(s) if args.named_only else search_tables(s)
    rows = [
        {
            'code': m.code, 'table': str(m.table), 'family': protocol_family(m.table).value,
            'form': form_record(m.form), 'best_condition': condition_record(m.condition),
        }
        for m in report.maximizers
    ]
    summary = {
        'f_max_global': report.f_max_global,
        'family': report.family.value,
        'n_tables': report.n_tables,
        'n_maximizers': len(report.maximizers),
    }
    if tag in CLASSIFIED_TYPES:
        summary['state_class'] = state_class(tag).value

    inputs = {'state': s.label, 'roles': str(s.roles), 'named_only': args.named_only}
    return ReportDocument('search', inputs, rows, summary)


def cmd_optimize(args: argparse.Namespace) -> ReportDocument:
    s = Scenario(parse_state_type(args.state), args.roles)
    table = CorrectionTable.parse(args.protocol)
    condition = optimize_angles(s, table, grid_size=args.grid)
    form = extract_form(s, table)
    rows = [{
        'state': s.label, 'roles': str(s.roles), 'table': str(table), 'family': protocol_family(table).value,
        'form': form_record(form), 'best_condition': condition_record(condition),
    }]
    summary = {'f_max': condition.f_max}
    if args.per_j:
        optimum = optimize_per_j(s, table)
        summary['per_outcome'] = {
            'conditions': [condition_record(c) for c in optimum.conditions],
            'f_max': optimum.f_max,
            'gain': optimum.gain,
        }

    inputs = {
        'state': s.label, 'roles': str(s.roles), **_table_inputs(table, args.protocol), 'grid': args.grid,
        'per_j': args.per_j,
    }
    return ReportDocument('optimize', inputs, rows, summary)


def _add_scenario(parser: argparse.ArgumentParser, protocol: bool = True) -> None:
    parser.add_argument('--state', required=True, help="catalog tag, e.g. '2b', '3bI', '4bI', '5', 'W-std'")
    parser.add_argument('--roles', default='A,B,C', help='sender,co-sender,receiver (default: A,B,C)')
    if protocol:
        parser.add_argument(
            '--protocol', default='GHZ', help="'GHZ', 'W-I', 'W-II', a table code or 8 Pauli labels"
        )


def _add_output(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('--format', default=ReportFormat.JSON.value, choices=[f.value for f in ReportFormat])
    parser.add_argument('--out', default=None, help='output file (default: standard output)')
    parser.add_argument('--verbose', action='store_true', help='log at DEBUG level to standard error')


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='py-tripartite', description='Three-party teleportation fidelities, protocols and optimal bases.'
    )
    commands = parser.add_subparsers(dest='command', required=True)

    run = commands.add_parser('run', help='run one configuration through all eight branches')
    _add_scenario(run)
    run.add_argument('--nu', default='0.7853981633974483', help='co-sender angle ν (radians)')
    run.add_argument('--kappa', default='0', help='co-sender phase κ (radians)')
    run.add_argument('--theta', default='0', help='information state polar angle θ (radians)')
    run.add_argument('--phi', default='0', help='information state azimuth φ (radians)')
    run.add_argument('--degrees', action='store_true', help='read all angles in degrees')
    run.add_argument('--seed', type=int, default=Defaults.SEED)
    run.add_argument('--mc-samples', type=int, default=Defaults.MONTE_CARLO_SAMPLES)
    _add_output(run)
    run.set_defaults(handler=cmd_run)

    table = commands.add_parser('table', help='reproduce every registered result')
    table.add_argument('--seed', type=int, default=Defaults.SEED)
    table.add_argument('--mc-samples', type=int, default=Defaults.MONTE_CARLO_SAMPLES)
    _add_output(table)
    table.set_defaults(handler=cmd_table)

    search = commands.add_parser('search', help='search all correction tables of a scenario')
    _add_scenario(search, protocol=False)
    search.add_argument('--named-only', action='store_true', help='search the three printed tables only')
    _add_output(search)
    search.set_defaults(handler=cmd_search)

    optimize = commands.add_parser('optimize', help='find the best co-sender basis for a table')
    _add_scenario(optimize)
    optimize.add_argument('--grid', type=int, default=Defaults.GRID_SIZE, help='grid points per angle')
    optimize.add_argument('--per-j', action='store_true', help='also optimize the basis per sender outcome')
    _add_output(optimize)
    optimize.set_defaults(handler=cmd_optimize)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format='%(asctime)s [%(levelname)s] [%(name)s] %(message)s', stream=sys.stderr
    )
    try:
        doc = args.handler(args)
        text = render(doc, args.format)

    except USAGE_ERRORS as e:
        print(f'py-tripartite {args.command}: error: {e}', file=sys.stderr)
        return EXIT_USAGE

    except exceptions.FidelityException as e:
        print(f'py-tripartite {args.command}: validation failed: {e}', file=sys.stderr)
        return EXIT_VALIDATION

    if args.out:
        Path(args.out).write_text(text, encoding='utf-8')

    else:
        sys.stdout.write(text)

    for flag in doc.flags:
        logger.warning(flag)

    return EXIT_OK if doc.ok else EXIT_VALIDATION
