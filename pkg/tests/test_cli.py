import csv
import io
import json
import math

import pytest

from py_tripartite import cli, fidelity
from py_tripartite.cli import EXIT_OK, EXIT_USAGE, EXIT_VALIDATION, main


def _run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_run_ghz_baseline(capsys):
    code, out, _ = _run(
        capsys, 'run', '--state', '2b', '--roles', 'A,B,C', '--protocol', 'GHZ', '--nu', '0.7853981633974483',
        '--kappa', '0', '--mc-samples', '2000'
    )
    assert code == EXIT_OK
    doc = json.loads(out)
    assert doc['command'] == 'run'
    assert len(doc['rows']) == 8
    assert doc['summary']['average'] == pytest.approx(1.0, abs=1e-12)
    assert doc['summary']['probability_total'] == pytest.approx(1.0, abs=1e-12)
    assert len(doc['rows'][0]['tau_unnormalized']) == 2
    assert sum(z['re'] ** 2 + z['im'] ** 2 for z in doc['rows'][0]['tau_unnormalized']) == pytest.approx(1 / 8)
    assert doc['inputs']['seed'] == 0
    assert doc['flags'] == []


def test_run_type_4b_at_its_optimum(capsys):
    code, out, _ = _run(
        capsys, 'run', '--state', '4bI', '--roles', 'B,A,C', '--protocol', 'GHZ', '--nu', '0.39269908169872414',
        '--kappa', '0', '--mc-samples', '5000'
    )
    assert code == EXIT_OK
    summary = json.loads(out)['summary']
    assert summary['average'] == pytest.approx(7 / 12 + math.sqrt(2) / 6, abs=1e-10)
    assert summary['form']['a'] == {'numerator': 7, 'denominator': 12, 'float': pytest.approx(7 / 12)}


def test_run_accepts_degrees_and_labels(capsys):
    code, out, _ = _run(
        capsys, 'run', '--state', '2b', '--protocol', 'I,Z,X,Y;Z,I,Y,X', '--nu', '45', '--degrees',
        '--theta', '90', '--mc-samples', '1000'
    )
    assert code == EXIT_OK
    doc = json.loads(out)
    assert doc['inputs']['table_code'] == 14025
    assert doc['summary']['average'] == pytest.approx(1.0, abs=1e-12)


def test_run_invalid_roles_is_a_usage_error(capsys):
    code, _, err = _run(capsys, 'run', '--state', '2b', '--roles', 'A,A,C')
    assert code == EXIT_USAGE
    assert 'error' in err


def test_run_unknown_state_is_a_usage_error(capsys):
    code, _, _ = _run(capsys, 'run', '--state', '6', '--mc-samples', '1000')
    assert code == EXIT_USAGE


def test_run_too_few_samples_is_a_usage_error(capsys):
    code, _, _ = _run(capsys, 'run', '--state', '2b', '--mc-samples', '10')
    assert code == EXIT_USAGE


def test_missing_state_exits_through_argparse(capsys):
    with pytest.raises(SystemExit) as e:
        main(['search'])

    assert e.value.code == 2


def test_table_reproduces_the_registry(capsys):
    code, out, _ = _run(capsys, 'table', '--format', 'json')
    assert code == EXIT_OK
    doc = json.loads(out)
    assert doc['flags'] == []
    assert len(doc['rows']) == 20
    rows = {row['key']: row for row in doc['rows']}
    assert rows['ext-ghz/A-B-C']['form']['c'] == {'numerator': 2, 'denominator': 9, 'float': pytest.approx(2 / 9)}
    assert rows['ext-ghz/B-A-C']['form']['a']['numerator'] == 8
    assert rows['4c/A-B-C']['form']['a']['denominator'] == 4
    assert rows['4b/B-A-C']['best_condition']['nu_text'] == 'π/8'
    assert 'search-exceeds-printed' in rows['ext-ghz/B-A-C']['deviations']
    assert 'search-exceeds-printed' not in rows['4b/B-A-C']['deviations']
    assert 'ext-ghz/B-A-C' in doc['summary']['exceeds_printed']


def test_table_is_byte_deterministic(capsys, tmp_path):
    first, second = tmp_path / 'first.json', tmp_path / 'second.json'
    assert main(['table', '--out', str(first)]) == EXIT_OK
    assert main(['table', '--out', str(second)]) == EXIT_OK
    assert first.read_bytes() == second.read_bytes()
    assert capsys.readouterr().out == ''


def test_table_csv_matches_json(capsys):
    _, json_out, _ = _run(capsys, 'table', '--format', 'json')
    _, csv_out, _ = _run(capsys, 'table', '--format', 'csv')
    records = json.loads(json_out)['rows']
    rows = list(csv.DictReader(io.StringIO(csv_out)))
    assert [row['key'] for row in rows] == [record['key'] for record in records]
    for row, record in zip(rows, records):
        for name in 'abcd':
            assert float(row[f'form.{name}.float']) == record['form'][name]['float']


def test_table_markdown(capsys):
    code, out, _ = _run(capsys, 'table', '--format', 'markdown')
    assert code == EXIT_OK
    assert out.startswith('# table')
    assert '| state | role | protocol | fidelity | condition |' in out
    assert '7/12' in out


def test_search_ghz_state(capsys):
    code, out, _ = _run(capsys, 'search', '--state', '2b', '--roles', 'A,B,C')
    assert code == EXIT_OK
    summary = json.loads(out)['summary']
    assert summary['f_max_global'] == pytest.approx(1.0, abs=1e-9)
    assert summary['family'] == 'GHZ'
    assert summary['state_class'] == 'GHZ-type'


def test_search_tri_bell_state(capsys):
    code, out, _ = _run(capsys, 'search', '--state', '3a', '--roles', 'B,C,A')
    assert code == EXIT_OK
    summary = json.loads(out)['summary']
    assert summary['state_class'] == 'W-type'
    assert summary['f_max_global'] == pytest.approx(8 / 9, abs=1e-9)


def test_search_named_only(capsys):
    code, out, _ = _run(capsys, 'search', '--state', 'W-std', '--named-only')
    assert code == EXIT_OK
    doc = json.loads(out)
    assert doc['summary']['n_tables'] == 3
    assert doc['summary']['family'] == 'W'
    assert 'state_class' not in doc['summary']


def test_optimize_type5(capsys):
    code, out, _ = _run(capsys, 'optimize', '--state', '5', '--roles', 'B,A,C', '--protocol', 'GHZ')
    assert code == EXIT_OK
    condition = json.loads(out)['rows'][0]['best_condition']
    assert condition['nu_star'] == pytest.approx(math.pi / 8, abs=1e-10)
    assert condition['kappa_star'] == 0.0
    assert condition['nu_text'] == 'π/8'


def test_optimize_per_outcome(capsys):
    code, out, _ = _run(capsys, 'optimize', '--state', '5', '--roles', 'B,A,C', '--per-j')
    assert code == EXIT_OK
    per_outcome = json.loads(out)['summary']['per_outcome']
    assert len(per_outcome['conditions']) == 4
    assert per_outcome['gain'] >= -1e-12


def test_table_checks_symmetric_rows(capsys):
    code, out, _ = _run(capsys, 'table', '--mc-samples', '1000')
    assert code == EXIT_OK
    doc = json.loads(out)
    assert doc['inputs'] == {'seed': 0, 'mc_samples': 1000}
    for row in doc['rows']:
        if row['symmetric']:
            assert row['swap_delta'] == pytest.approx(0.0, abs=1e-9)

        else:
            assert row['swap_delta'] is None


def test_table_fails_when_an_oracle_disagrees(monkeypatch, capsys):
    monkeypatch.setattr(fidelity, 'average_two_design', lambda *args, **kwargs: 0.123)
    code, out, _ = _run(capsys, 'table', '--mc-samples', '1000')
    assert code == EXIT_VALIDATION
    flags = json.loads(out)['flags']
    assert len(flags) == 20
    assert all(flag.endswith('oracle-disagreement') for flag in flags)


def test_table_fails_on_a_monte_carlo_outlier(monkeypatch, capsys):
    monkeypatch.setattr(cli, 'average_monte_carlo', lambda *args, **kwargs: (0.0, 1e-6))
    code, out, _ = _run(capsys, 'table')
    assert code == EXIT_VALIDATION
    flags = json.loads(out)['flags']
    assert len(flags) == 20
    assert all(flag.endswith('monte-carlo-outlier') for flag in flags)
