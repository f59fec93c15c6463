import csv
import io
import json
from typing import Any, Dict, List, Optional, Union

from Crypto.Hash import SHA256
from pretty_utils.type_functions.classes import AutoRepr

from py_tripartite import exceptions
from py_tripartite.fidelity import BestCondition, FidelityForm
from py_tripartite.models import Defaults, ReportFormat, Tolerance
from py_tripartite.utils import angle_text, format_float, fraction_text, render_rational


class ReportDocument(AutoRepr):
    """
    An instance of a command result.

    Attributes:
        schema_version (str): the document schema.
        command (str): the command that produced the document.
        inputs (dict): every parameter of the command, defaults included.
        rows (List[dict]): one record per scenario or branch.
        summary (dict): document-level results.
        flags (List[str]): failure flags; a document without flags means exit status 0.
        digest (Optional[str]): SHA-256 of the canonical JSON of everything else.

    """

    def __init__(
            self, command: str, inputs: dict, rows: Optional[List[dict]] = None, summary: Optional[dict] = None,
            flags: Optional[List[str]] = None, schema_version: str = Defaults.SCHEMA_VERSION,
            digest: Optional[str] = None
    ) -> None:
        self.schema_version: str = schema_version
        self.command: str = command
        self.inputs: dict = inputs
        self.rows: List[dict] = rows or []
        self.summary: dict = summary or {}
        self.flags: List[str] = flags or []
        self.digest: Optional[str] = digest

    def payload(self) -> dict:
        return {
            'schema_version': self.schema_version,
            'command': self.command,
            'inputs': self.inputs,
            'rows': self.rows,
            'summary': self.summary,
            'flags': self.flags,
        }

    def compute_digest(self) -> str:
        return SHA256.new(canonical_json(self.payload()).encode('utf-8')).hexdigest()

    def seal(self) -> 'ReportDocument':
        self.digest = self.compute_digest()
        return self

    def verify(self) -> bool:
        return self.digest == self.compute_digest()

    def as_dict(self) -> dict:
        return {**self.payload(), 'digest': self.digest}

    @property
    def ok(self) -> bool:
        return not self.flags


def canonical_json(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, ensure_ascii=False, separators=(',', ':'), allow_nan=False)


def form_record(form: Union[FidelityForm, tuple]) -> Dict[str, dict]:
    """
    Render form coefficients as rationals with their floats.
    """
    values = form.as_tuple() if isinstance(form, FidelityForm) else tuple(float(x) for x in form)
    return {name: render_rational(value) for name, value in zip('abcd', values)}


def condition_record(condition: BestCondition) -> dict:
    return {
        'nu_star': condition.nu_star,
        'kappa_star': condition.kappa_star,
        'nu_text': angle_text(condition.nu_star),
        'kappa_text': angle_text(condition.kappa_star),
        'f_max': condition.f_max,
        'angle_independent': condition.angle_independent,
    }


def flatten(record: dict, prefix: str = '') -> Dict[str, Any]:
    """
    Flatten nested records to dotted column names; lists of scalars are joined with ';'.
    """
    flat = {}
    for key, value in record.items():
        name = f'{prefix}{key}'
        if isinstance(value, dict):
            flat.update(flatten(value, f'{name}.'))

        elif isinstance(value, list) and value and all(isinstance(v, dict) for v in value):
            for i, item in enumerate(value):
                flat.update(flatten(item, f'{name}.{i}.'))

        elif isinstance(value, list):
            flat[name] = ';'.join(str(v) for v in value)

        else:
            flat[name] = value

    return flat


def _cell(value: Any, rational: bool = False) -> str:
    if value is None:
        return ''

    if isinstance(value, bool):
        return 'true' if value else 'false'

    if isinstance(value, float):
        return fraction_text(value) if rational else format_float(value)

    return str(value)


def _columns(rows: List[Dict[str, Any]]) -> List[str]:
    columns = []
    for row in rows:
        for key in row:
            if key not in columns:
                columns.append(key)

    return columns


def render_csv(doc: ReportDocument) -> str:
    rows = [flatten(row) for row in doc.rows]
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    columns = _columns(rows)
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(row.get(column)) for column in columns])

    return buffer.getvalue()


FORM_TERMS = ('', 'cos2ν', 'cosκ·sin2ν', 'sinκ·sin2ν')


def form_text(record: Dict[str, dict]) -> str:
    """
    Write a form record as 'a + b·cos2ν + c·cosκ·sin2ν + d·sinκ·sin2ν', dropping zero terms.
    """
    text = ''
    for name, term in zip('abcd', FORM_TERMS):
        value = record[name]['float']
        if abs(value) < Tolerance.FORMULA:
            continue

        part = fraction_text(abs(value)) + (f'·{term}' if term else '')
        if text:
            text += f' - {part}' if value < 0 else f' + {part}'

        else:
            text = f'-{part}' if value < 0 else part

    return text or '0'


def condition_text(record: Optional[dict]) -> str:
    if record is None or record['angle_independent']:
        return 'any ν, κ'

    return f'ν = {record["nu_text"]}, κ = {record["kappa_text"]}'


def _scenario_view(row: dict) -> Dict[str, str]:
    return {
        'state': row['state'],
        'role': row['printed_roles'],
        'protocol': row['protocol'],
        'fidelity': form_text(row['form']),
        'condition': condition_text(row['best_condition']),
    }


MARKDOWN_VIEWS = {'table': _scenario_view}


def render_markdown(doc: ReportDocument) -> str:
    view = MARKDOWN_VIEWS.get(doc.command)
    if view:
        rows = [view(row) for row in doc.rows]
        columns = _columns(rows)

    else:
        rows = [flatten(row) for row in doc.rows]
        columns = [c for c in _columns(rows) if not c.endswith(('.numerator', '.denominator'))]

    lines = [f'# {doc.command}', '']
    if columns:
        lines.append('| ' + ' | '.join(columns) + ' |')
        lines.append('|' + '---|' * len(columns))
        for row in rows:
            lines.append('| ' + ' | '.join(_cell(row.get(c), rational=True) for c in columns) + ' |')

        lines.append('')

    for key, value in flatten(doc.summary).items():
        lines.append(f'- {key}: {_cell(value, rational=True)}')

    lines.append(f'- flags: {", ".join(doc.flags) if doc.flags else "none"}')
    lines.append(f'- digest: {doc.digest}')
    return '\n'.join(lines) + '\n'


def render(doc: ReportDocument, fmt: Union[ReportFormat, str]) -> str:
    """
    Render a document.

    Args:
        doc (ReportDocument): the document; it is sealed first if it has no digest.
        fmt (Union[ReportFormat, str]): 'json', 'csv' or 'markdown'.

    Returns:
        str: the rendering, newline-terminated.

    Raises:
        UnsupportedFormat: the format is unknown.

    """
    try:
        fmt = ReportFormat(fmt)

    except ValueError:
        raise exceptions.UnsupportedFormat(f'Unsupported report format: {fmt!r}')

    if doc.digest is None:
        doc.seal()

    if fmt == ReportFormat.JSON:
        return json.dumps(doc.as_dict(), sort_keys=True, ensure_ascii=False, indent=2, allow_nan=False) + '\n'

    if fmt == ReportFormat.CSV:
        return render_csv(doc)

    return render_markdown(doc)


def load_json(text: str) -> ReportDocument:
    """
    Read a JSON rendering back into a document.

    Raises:
        ReportException: the text is not a report document.

    """
    try:
        data = json.loads(text)
        return ReportDocument(
            command=data['command'], inputs=data['inputs'], rows=data['rows'], summary=data['summary'],
            flags=data['flags'], schema_version=data['schema_version'], digest=data.get('digest')
        )

    except (ValueError, KeyError, TypeError) as e:
        raise exceptions.ReportException(f'Not a report document: {e}')
