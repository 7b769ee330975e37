"""
A collection of functions for writing code files and reports
"""
import csv
import datetime as dt
import functools
import json
import fastjsonschema
import h5py
import pystache
from .reader import validate_code
from ...config import __version__, settings, REPORT_SCHEMA_PATH

SUMMARY_TEMPLATE = ('nlturbo {{version}} - {{command}}\n'
                    '{{#points}}\n'
                    'rate {{rate}} | {{channel_text}} | capacity {{capacity_text}} | gap {{gap_text}} | '
                    'BER {{ber_text}} | FER {{fer_text}} | {{blocks}} blocks ({{stop_reason}})'
                    '{{#wall_time}} | {{wall_time}} s{{/wall_time}}\n'
                    '{{/points}}')


@functools.lru_cache(maxsize=None)
def _report_validator():
    with open(REPORT_SCHEMA_PATH) as schema_file:
        return fastjsonschema.compile(json.load(schema_file))


def validate_report(report):
    """Validates a report against the report schema

    :param report: report
    :type report: Dict
    :raises: fastjsonschema.JsonSchemaException
    """
    _report_validator()(report)


def code_file_data(trellis, name='', declared=None):
    """Creates the code file representation of a trellis

    :param trellis: trellis
    :type trellis: TableTrellis
    :param name: name of the code
    :type name: str
    :param declared: self-declared properties checked by the audit command
    :type declared: Union[Dict, None]
    :return: code file data
    :rtype: Dict
    """
    data = {'name': name, 'version': __version__, 'states': trellis.num_states, 'k': trellis.k, 'n': trellis.n,
            'next_state': trellis.next_state.tolist(), 'labels': trellis.octal()}
    if declared:
        data['declared'] = declared
    return data


def write_code_file(filename, trellis, name='', declared=None):
    """Writes a trellis code file with one matrix row per line

    :param filename: path of the code file
    :type filename: str
    :param trellis: trellis
    :type trellis: TableTrellis
    :param name: name of the code
    :type name: str
    :param declared: self-declared properties checked by the audit command
    :type declared: Union[Dict, None]
    """
    data = code_file_data(trellis, name, declared)
    lines = ['{']
    for key in ('name', 'version', 'states', 'k', 'n'):
        lines.append(f'    {json.dumps(key)}: {json.dumps(data[key])},')
    for key in ('next_state', 'labels'):
        rows = ',\n'.join(f'        {json.dumps(row)}' for row in data[key])
        lines.append(f'    {json.dumps(key)}: [\n{rows}\n    ],')
    if 'declared' in data:
        lines.append(f'    "declared": {json.dumps(data["declared"], sort_keys=True)},')
    lines[-1] = lines[-1].rstrip(',')
    lines.append('}')

    with open(filename, 'w', encoding='utf-8', newline='\n') as code_file:
        code_file.write('\n'.join(lines) + '\n')


def code_spec_data(spec, trellis_path, name='', rate=None):
    """Creates the turbo code file representation of a code whose constituent trellis is stored in
    a separate file

    :param spec: code
    :type spec: CodeSpec
    :param trellis_path: path of the trellis file relative to the turbo code file
    :type trellis_path: str
    :param name: name of the code
    :type name: str
    :param rate: declared rate text e.g. '1/10'
    :type rate: Union[str, None]
    :return: code file data
    :rtype: Dict
    """
    interleaver = spec.interleaver
    data = {'name': name, 'version': __version__, 'trellis': trellis_path, 'K': spec.info_bits,
            'interleaver': {'N': interleaver.length, 'S': interleaver.requested_spread,
                            'seed': 0 if interleaver.seed is None else interleaver.seed},
            'period': spec.puncture1.period, 'puncture1': spec.puncture1.octal(),
            'puncture2': spec.puncture2.octal(), 'systematic': spec.include_systematic}
    if rate is not None:
        data['rate'] = rate
    return data


def write_code_spec(filename, spec, trellis_path, name='', rate=None):
    """Validates and writes a turbo code file

    :param filename: path of the turbo code file
    :type filename: str
    :param spec: code
    :type spec: CodeSpec
    :param trellis_path: path of the trellis file relative to the turbo code file
    :type trellis_path: str
    :param name: name of the code
    :type name: str
    :param rate: declared rate text e.g. '1/10'
    :type rate: Union[str, None]
    :raises: fastjsonschema.JsonSchemaException
    """
    data = code_spec_data(spec, trellis_path, name, rate)
    validate_code(data)
    lines = [f'    {json.dumps(key)}: {json.dumps(value)}' for key, value in data.items()]
    with open(filename, 'w', encoding='utf-8', newline='\n') as code_file:
        code_file.write('{\n' + ',\n'.join(lines) + '\n}\n')


def write_report_json(filename, report):
    """Validates and writes a report as JSON. Keys are sorted so reruns produce identical files.

    :param filename: path of the report file
    :type filename: str
    :param report: report
    :type report: Dict
    :raises: fastjsonschema.JsonSchemaException
    """
    validate_report(report)
    with open(filename, 'w', encoding='utf-8', newline='\n') as report_file:
        json.dump(report, report_file, indent=2, sort_keys=True)
        report_file.write('\n')


def write_sweep_csv(stream, rows, columns):
    """Writes sweep rows as CSV

    :param stream: writable text stream
    :type stream: TextIO
    :param rows: rows as dictionaries
    :type rows: Iterable[Dict]
    :param columns: column names in output order
    :type columns: List[str]
    """
    writer = csv.DictWriter(stream, fieldnames=columns, extrasaction='ignore', lineterminator='\n')
    writer.writeheader()
    for row in rows:
        writer.writerow(row)


def write_results_hdf(filename, report, interleavers=None):
    """Writes a results archive holding the report, the settings in use and every interleaver
    permutation so simulations can be reproduced exactly

    :param filename: path of the hdf file
    :type filename: str
    :param report: report
    :type report: Dict
    :param interleavers: interleavers keyed by name
    :type interleavers: Union[Dict[str, Interleaver], None]
    """
    with h5py.File(filename, 'w') as hdf_file:
        hdf_file.attrs['version'] = __version__
        hdf_file.attrs['date_created'] = dt.datetime.now().strftime("%Y-%m-%d %H:%M:%S")
        hdf_file.attrs['report'] = json.dumps(report, sort_keys=True)

        if settings.local:
            setting_group = hdf_file.create_group('settings')
            for key, value in settings.local.items():
                setting_group.attrs[key] = value

        if interleavers:
            group = hdf_file.create_group('interleavers', track_order=True)
            for key, interleaver in interleavers.items():
                dataset = group.create_dataset(key, data=interleaver.permutation)
                dataset.attrs['spread'] = interleaver.spread
                dataset.attrs['requested_spread'] = interleaver.requested_spread
                if interleaver.seed is not None:
                    dataset.attrs['seed'] = interleaver.seed


def _format_interval(interval):
    return f'{interval["value"]:.3e} [{interval["low"]:.3e}, {interval["high"]:.3e}]'


def render_summary(report):
    """Renders a human readable summary of a simulation report

    :param report: report
    :type report: Dict
    :return: summary text
    :rtype: str
    """
    points = []
    for point in report.get('points', []):
        users = point.get('users')
        view = dict(point)
        view['channel_text'] = f'{point["channel"]["kind"]}({", ".join(str(p) for p in point["channel"]["params"])})'
        if users:
            view['rate'] = ' + '.join(user['rate'] for user in users)
            view['capacity_text'] = ' + '.join(f'{user["capacity"]:.4f}' for user in users)
            view['gap_text'] = ' + '.join(f'{user["gap"]:.4f}' for user in users)
            view['ber_text'] = ' + '.join(_format_interval(user['ber']) for user in users)
            view['fer_text'] = ' + '.join(_format_interval(user['fer']) for user in users)
        else:
            view['capacity_text'] = f'{point["capacity"]:.4f}'
            view['gap_text'] = f'{point["gap"]:.4f}'
            view['ber_text'] = _format_interval(point['ber'])
            view['fer_text'] = _format_interval(point['fer'])
        points.append(view)

    return pystache.render(SUMMARY_TEMPLATE, {'version': report['version'], 'command': report['command'],
                                              'points': points})
