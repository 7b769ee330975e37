"""
A collection of functions for reading code definition files and result archives
"""
from collections import namedtuple
from fractions import Fraction
import functools
import json
import os
import re
import fastjsonschema
import h5py
import numpy as np
from ..coding.interleaver import make_interleaver
from ..coding.trellis import TrellisTopology, TableTrellis, StateSubTable, octal_to_int
from ..coding.turbo import CodeSpec, PuncturePattern
from ...config import CODE_SCHEMA_PATH

CodeDefinition = namedtuple('CodeDefinition', ['name', 'trellis', 'declared'])
SpecDefinition = namedtuple('SpecDefinition', ['name', 'spec', 'declared_rate', 'declared', 'config'])


class CodeFileError(ValueError):
    """Error in a code definition file. The line number is 0 when the error cannot be placed on a
    line.

    :param message: description of the error
    :type message: str
    :param filename: path of the file
    :type filename: str
    :param line: line number (1-based)
    :type line: int
    """
    def __init__(self, message, filename='', line=0):
        self.filename = filename
        self.line = line
        location = f'{filename}:{line}' if line else filename
        super().__init__(f'{location}: {message}' if location else message)


@functools.lru_cache(maxsize=None)
def _code_validator():
    with open(CODE_SCHEMA_PATH) as schema_file:
        return fastjsonschema.compile(json.load(schema_file))


def validate_code(data):
    """Validates a code definition against the code schema

    :param data: code definition
    :type data: Dict
    :raises: fastjsonschema.JsonSchemaException
    """
    _code_validator()(data)


def required(json_data, key, parent_key):
    data = json_data.get(key, None)
    if data is None:
        raise KeyError(f'{parent_key} object must have a "{key}" attribute.')

    return data


class _Locator:
    """Finds the line numbers of values in the source text of a code file"""
    def __init__(self, text):
        self.text = text

    def line(self, position):
        return self.text.count('\n', 0, max(position, 0)) + 1 if position >= 0 else 0

    def key(self, key, start=0):
        return self.text.find(f'"{key}"', start)

    def values(self, key, tokens, start=0):
        """Returns the line of each token (in order) that follows the given key"""
        position = self.key(key, start)
        lines = []
        for token in tokens:
            position = self.text.find(token, position + 1) if position >= 0 else -1
            lines.append(self.line(position))
        return lines


def _load(filename):
    try:
        with open(filename, encoding='utf-8') as code_file:
            text = code_file.read()
    except OSError as error:
        raise CodeFileError(f'file could not be read ({error.strerror}).', filename) from error

    try:
        data = json.loads(text)
    except json.JSONDecodeError as error:
        raise CodeFileError(f'invalid JSON ({error.msg}).', filename, error.lineno) from error

    try:
        validate_code(data)
    except fastjsonschema.JsonSchemaException as error:
        raise CodeFileError(f'does not match the code schema ({error.message}).', filename) from error

    return data, _Locator(text)


def _parse_trellis(data, filename, locator, start=0):
    states = required(data, 'states', 'trellis')
    k = required(data, 'k', 'trellis')
    n = required(data, 'n', 'trellis')
    next_state = required(data, 'next_state', 'trellis')
    labels = required(data, 'labels', 'trellis')

    if len(next_state) != states or any(len(row) != 1 << k for row in next_state):
        raise CodeFileError(f'next_state should be a {states} x {1 << k} matrix.', filename,
                            locator.line(locator.key('next_state', start)))
    if len(labels) != states or any(len(row) != 1 << k for row in labels):
        raise CodeFileError(f'labels should be a {states} x {1 << k} matrix.', filename,
                            locator.line(locator.key('labels', start)))

    try:
        topology = TrellisTopology(next_state, k)
    except ValueError as error:
        raise CodeFileError(str(error), filename, locator.line(locator.key('next_state', start))) from error

    flat = [label for row in labels for label in row]
    lines = locator.values('labels', [f'"{label}"' for label in flat], start)
    subtables = []
    for state, row in enumerate(labels):
        try:
            subtables.append(StateSubTable.fromOctal(row, n))
        except ValueError as error:
            bad = _first_bad_label(row, n)
            line = lines[state * (1 << k) + bad]
            raise CodeFileError(f'state {state}: {error}', filename, line) from error

    return TableTrellis(topology, subtables)


def _first_bad_label(row, n):
    for index, label in enumerate(row):
        try:
            octal_to_int(label, n)
        except ValueError:
            return index
    return 0


def _name(data, filename):
    return data.get('name', os.path.splitext(os.path.basename(filename))[0])


def read_code_file(filename):
    """Reads a constituent trellis definition file

    :param filename: path of the code file
    :type filename: str
    :return: name, trellis and self-declared properties
    :rtype: CodeDefinition
    :raises: CodeFileError
    """
    data, locator = _load(filename)
    if 'trellis' in data:
        raise CodeFileError('file describes a turbo code, not a trellis.', filename)

    return _code_definition(data, filename, locator)


def _code_definition(data, filename, locator):
    trellis = _parse_trellis(data, filename, locator)
    return CodeDefinition(_name(data, filename), trellis, data.get('declared', {}))


def _resolve_trellis(value, filename, locator, key):
    if isinstance(value, str):
        path = os.path.join(os.path.dirname(filename), value)
        return read_code_file(path)
    return CodeDefinition(value.get('name', key), _parse_trellis(value, filename, locator, locator.key(key)),
                          value.get('declared', {}))


def read_code_spec(filename):
    """Reads a turbo code definition file. The constituent trellis may be inline or the path of a
    trellis file relative to the spec file.

    :param filename: path of the code file
    :type filename: str
    :return: name, code, declared rate, declared trellis properties and the raw definition
    :rtype: SpecDefinition
    :raises: CodeFileError
    """
    data, locator = _load(filename)
    if 'trellis' not in data:
        raise CodeFileError('file describes a trellis, not a turbo code.', filename)

    return _spec_definition(data, filename, locator)


def read_definition(filename):
    """Reads either kind of code file

    :param filename: path of the code file
    :type filename: str
    :return: trellis definition or turbo code definition
    :rtype: Union[CodeDefinition, SpecDefinition]
    :raises: CodeFileError
    """
    data, locator = _load(filename)
    if 'trellis' in data:
        return _spec_definition(data, filename, locator)
    return _code_definition(data, filename, locator)


def _spec_definition(data, filename, locator):
    first = _resolve_trellis(data['trellis'], filename, locator, 'trellis')
    second = _resolve_trellis(data['trellis2'], filename, locator, 'trellis2') if 'trellis2' in data else first

    info_bits = required(data, 'K', 'code')
    interleaver_data = required(data, 'interleaver', 'code')
    period = data.get('period', first.trellis.n)
    try:
        puncture1 = PuncturePattern.fromOctal(required(data, 'puncture1', 'code'), period)
        puncture2 = PuncturePattern.fromOctal(required(data, 'puncture2', 'code'), period)
    except ValueError as error:
        raise CodeFileError(str(error), filename, locator.line(locator.key('puncture1'))) from error

    if interleaver_data['N'] * first.trellis.k != info_bits:
        raise CodeFileError(f'interleaver length {interleaver_data["N"]} does not match K/k.', filename,
                            locator.line(locator.key('interleaver')))

    interleaver = make_interleaver(interleaver_data['N'], interleaver_data.get('S'), interleaver_data['seed'])
    try:
        spec = CodeSpec(first.trellis, interleaver, puncture1, puncture2, required(data, 'systematic', 'code'),
                        info_bits, second.trellis)
    except ValueError as error:
        raise CodeFileError(str(error), filename) from error

    declared_rate = parse_fraction(data['rate']) if 'rate' in data else None
    return SpecDefinition(_name(data, filename), spec, declared_rate, first.declared, data)


def read_results_hdf(filename):
    """Reads the report and interleaver permutations from a results archive

    :param filename: path of the hdf file
    :type filename: str
    :return: report and permutations keyed by name
    :rtype: Tuple[Dict, Dict[str, numpy.ndarray]]
    """
    with h5py.File(filename, 'r') as hdf_file:
        report = json.loads(hdf_file.attrs['report'])
        permutations = {}
        group = hdf_file.get('interleavers')
        if group is not None:
            for key in group.keys():
                permutations[key] = np.array(group[key])

    return report, permutations


def parse_fraction(text):
    """Parses a rate written as 'a/b'

    :param text: rate text
    :type text: str
    :return: rate
    :rtype: fractions.Fraction
    :raises: ValueError
    """
    if not re.fullmatch(r'\s*\d+\s*/\s*\d+\s*', text):
        raise ValueError(f'"{text}" is not a fraction of the form a/b.')
    return Fraction(text.replace(' ', ''))
