from fractions import Fraction
import io
import json
import os
import shutil
import tempfile
import unittest
import fastjsonschema
import h5py
import numpy as np
from nlturbo.config import __version__, settings
from nlturbo.core.coding import TABLE_I, TABLE_II, default_topology, linear_trellis, load_table_i, make_interleaver
from nlturbo.core.io import (CodeFileError, code_file_data, code_spec_data, parse_fraction, read_code_file,
                             read_code_spec, read_definition, read_results_hdf, render_summary, validate_code,
                             validate_report, write_code_file, write_code_spec, write_report_json, write_results_hdf,
                             write_sweep_csv)
from tests.helpers import CODES_PATH

SMALL_SPEC = {'trellis': 'table1.json', 'K': 200, 'interleaver': {'N': 100, 'S': 7, 'seed': 1},
              'puncture1': '277', 'puncture2': '367', 'systematic': True, 'rate': '1/3'}


def interval(value):
    return {'value': value, 'low': value / 2, 'high': min(1.0, value * 2)}


class TestCodeFiles(unittest.TestCase):
    def setUp(self):
        self.test_dir = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.test_dir)

    def writeText(self, name, text):
        filename = os.path.join(self.test_dir, name)
        with open(filename, 'w') as code_file:
            code_file.write(text)
        return filename

    def writeJson(self, name, data):
        return self.writeText(name, json.dumps(data, indent=4))

    def testShippedTrellisFiles(self):
        definition = read_code_file(CODES_PATH / 'table1.json')
        self.assertEqual(definition.name, 'table1')
        self.assertListEqual(definition.trellis.octal(), [list(row) for row in TABLE_I])
        self.assertDictEqual(definition.declared, {'branch_distance': 2, 'merge_distance': 0, 'metric': 'z',
                                                   'ones': 349})

        definition = read_code_file(str(CODES_PATH / 'linear.json'))
        self.assertListEqual(definition.trellis.octal(), linear_trellis(default_topology()).octal())
        self.assertEqual(definition.declared['ones'], 64)

        definition = read_code_file(CODES_PATH / 'linear6.json')
        masks = (0o66, 0o55, 0o73, 0o47, 0o35, 0o61)
        self.assertListEqual(definition.trellis.octal(), linear_trellis(default_topology(), masks).octal())
        self.assertEqual(definition.trellis.onesCount(), definition.declared['ones'])

    def testShippedSpecFiles(self):
        rates = {row.rate: row for row in TABLE_II}
        names = sorted(name for name in os.listdir(CODES_PATH) if name.startswith('table1_r'))
        self.assertEqual(len(names), 8)
        for name in names:
            with open(CODES_PATH / name) as code_file:
                data = json.load(code_file)
            validate_code(data)
            row = rates[parse_fraction(data['rate'])]
            self.assertEqual(data['puncture1'], row.puncture1)
            self.assertEqual(data['puncture2'], row.puncture2)
            self.assertEqual(data['K'], 20000)
            self.assertEqual(data['interleaver']['N'] * 2, data['K'])

        with open(CODES_PATH / 'linear_r1_3.json') as code_file:
            validate_code(json.load(code_file))

    def testReadSpec(self):
        write_code_file(os.path.join(self.test_dir, 'table1.json'), load_table_i(), 'table1', {'ones': 349})
        filename = self.writeJson('small.json', SMALL_SPEC)

        definition = read_code_spec(filename)
        self.assertEqual(definition.name, 'small')
        self.assertEqual(definition.declared_rate, Fraction(1, 3))
        self.assertDictEqual(definition.declared, {'ones': 349})
        self.assertDictEqual(definition.config, SMALL_SPEC)
        spec = definition.spec
        self.assertEqual(spec.info_bits, 200)
        self.assertEqual(spec.codeword_length, 600)
        self.assertEqual(spec.puncture2.octal(), '367')
        self.assertEqual(spec.interleaver, make_interleaver(100, 7, 1))

        self.assertEqual(read_definition(filename).spec.info_bits, 200)
        self.assertEqual(read_definition(os.path.join(self.test_dir, 'table1.json')).name, 'table1')
        self.assertRaises(CodeFileError, read_code_file, filename)
        self.assertRaises(CodeFileError, read_code_spec, os.path.join(self.test_dir, 'table1.json'))

        inline = dict(SMALL_SPEC, name='inline', systematic=False, puncture1='0', puncture2='0', period=2,
                      trellis=code_file_data(linear_trellis(default_topology()), 'linear'))
        inline.pop('rate')
        definition = read_code_spec(self.writeJson('inline.json', inline))
        self.assertEqual(definition.name, 'inline')
        self.assertIsNone(definition.declared_rate)
        self.assertEqual(definition.spec.constituent.n, 2)
        self.assertEqual(definition.spec.codeword_length, 400)

        bad = dict(SMALL_SPEC, interleaver={'N': 50, 'seed': 1})
        with self.assertRaises(CodeFileError) as context:
            read_code_spec(self.writeJson('bad_length.json', bad))
        self.assertIn('interleaver length', str(context.exception))

        bad = dict(SMALL_SPEC, puncture1='2777')
        self.assertRaises(CodeFileError, read_code_spec, self.writeJson('bad_puncture.json', bad))

        bad = dict(SMALL_SPEC, trellis='missing.json')
        self.assertRaises(CodeFileError, read_code_spec, self.writeJson('bad_path.json', bad))

    def testBadLabelLine(self):
        filename = os.path.join(self.test_dir, 'bad.json')
        write_code_file(filename, load_table_i(), 'bad')
        with open(filename) as code_file:
            text = code_file.read()
        self.assertEqual(text.splitlines()[28].strip(), '["137", "752", "711", "265"],')
        self.writeText('bad.json', text.replace('"711"', '"718"', 1))

        with self.assertRaises(CodeFileError) as context:
            read_code_file(filename)
        self.assertEqual(context.exception.line, 29)
        self.assertEqual(context.exception.filename, filename)
        self.assertIn('state 3', str(context.exception))
        self.assertIn(f'{filename}:29', str(context.exception))

        self.writeText('bad.json', text.replace('"711"', '"71"', 1))
        with self.assertRaises(CodeFileError) as context:
            read_code_file(filename)
        self.assertEqual(context.exception.line, 29)

    def testBadFiles(self):
        filename = self.writeText('broken.json', '{\n"states": 16,\n"k": 2,,\n}')
        with self.assertRaises(CodeFileError) as context:
            read_code_file(filename)
        self.assertEqual(context.exception.line, 3)
        self.assertIn('invalid JSON', str(context.exception))

        filename = self.writeJson('schema.json', {'states': 16})
        with self.assertRaises(CodeFileError) as context:
            read_code_file(filename)
        self.assertEqual(context.exception.line, 0)
        self.assertIn('code schema', str(context.exception))

        with self.assertRaises(CodeFileError):
            read_code_file(os.path.join(self.test_dir, 'missing.json'))

        data = code_file_data(load_table_i(), 'topology')
        data['next_state'][0][0] = 1
        with self.assertRaises(CodeFileError) as context:
            read_code_file(self.writeJson('topology.json', data))
        self.assertIn('incoming transitions', str(context.exception))
        self.assertGreater(context.exception.line, 0)

        data = code_file_data(load_table_i(), 'shape')
        data['labels'][2] = data['labels'][2][:3]
        self.assertRaises(CodeFileError, read_code_file, self.writeJson('shape.json', data))

        self.assertRaises(fastjsonschema.JsonSchemaException, validate_code, {'states': 0, 'k': 1, 'n': 1,
                                                                               'next_state': [], 'labels': []})

    def testWriteCodeFile(self):
        filename = os.path.join(self.test_dir, 'written.json')
        trellis = load_table_i()
        write_code_file(filename, trellis, 'written', {'ones': 349, 'metric': 'z'})

        with open(filename) as code_file:
            lines = code_file.read().splitlines()
        self.assertEqual(lines[7].strip(), '[0, 12, 8, 4],')
        self.assertEqual(lines[25].strip(), '["534", "343", "671", "517"],')
        self.assertEqual(lines[-2].strip(), '"declared": {"metric": "z", "ones": 349}')

        definition = read_code_file(filename)
        self.assertEqual(definition.name, 'written')
        self.assertListEqual(definition.trellis.octal(), trellis.octal())
        np.testing.assert_array_equal(definition.trellis.next_state, trellis.next_state)
        self.assertDictEqual(definition.declared, {'ones': 349, 'metric': 'z'})

        data = code_file_data(trellis)
        self.assertEqual(data['version'], __version__)
        self.assertNotIn('declared', data)

    def testWriteCodeSpec(self):
        for name in ('linear6_r1_7.json', 'bbsc_user1_r1_10.json'):
            definition = read_code_spec(CODES_PATH / name)
            filename = os.path.join(self.test_dir, name)
            write_code_spec(filename, definition.spec, definition.config['trellis'], definition.name,
                            definition.config['rate'])
            with open(filename) as written, open(CODES_PATH / name) as shipped:
                self.assertEqual(written.read(), shipped.read())

        spec = read_code_spec(CODES_PATH / 'linear6_r1_7.json').spec
        data = code_spec_data(spec, 'linear6.json')
        self.assertNotIn('rate', data)
        self.assertEqual(data['interleaver'], {'N': 10000, 'S': 70, 'seed': 3})
        self.assertEqual(data['puncture1'], '00')
        validate_code(data)

    def testParseFraction(self):
        self.assertEqual(parse_fraction('1/3'), Fraction(1, 3))
        self.assertEqual(parse_fraction(' 2 / 18 '), Fraction(1, 9))
        self.assertRaises(ValueError, parse_fraction, '0.3')
        self.assertRaises(ValueError, parse_fraction, 'a/b')
        self.assertRaises(ZeroDivisionError, parse_fraction, '1/0')


class TestReports(unittest.TestCase):
    def setUp(self):
        self.test_dir = tempfile.mkdtemp()
        self.report = {'command': 'z-sim', 'version': __version__, 'config': {'seed': 1},
                       'points': [{'rate': '1/3', 'rate_value': 1 / 3, 'channel': {'kind': 'z', 'params': [0.1]},
                                   'capacity': 0.5, 'gap': 0.1, 'infeasible': False, 'info_bits': 200, 'blocks': 10,
                                   'bit_errors': 2, 'frame_errors': 1, 'ber': interval(1e-3), 'fer': interval(0.1),
                                   'stop_reason': 'error_target',
                                   'density': {'value': 0.56, 'stderr': 0.001, 'bits': 6000}}]}

    def tearDown(self):
        shutil.rmtree(self.test_dir)
        settings.reset()

    def testValidateReport(self):
        validate_report(self.report)
        validate_report({'command': 'audit', 'version': __version__, 'config': {}, 'audit': {'mismatches': []}})

        self.assertRaises(fastjsonschema.JsonSchemaException, validate_report, {'command': 'audit', 'config': {}})
        report = dict(self.report, command='plot')
        self.assertRaises(fastjsonschema.JsonSchemaException, validate_report, report)
        report = json.loads(json.dumps(self.report))
        report['points'][0]['stop_reason'] = 'tired'
        self.assertRaises(fastjsonschema.JsonSchemaException, validate_report, report)
        report['points'][0]['stop_reason'] = 'block_budget'
        report['points'][0]['density'] = {'density': 0.5, 'stderr': 0.1, 'bits': 4}
        self.assertRaises(fastjsonschema.JsonSchemaException, validate_report, report)

    def testWriteReportJson(self):
        filename = os.path.join(self.test_dir, 'report.json')
        write_report_json(filename, self.report)
        with open(filename) as report_file:
            text = report_file.read()
        self.assertDictEqual(json.loads(text), self.report)
        self.assertTrue(text.endswith('}\n'))
        self.assertLess(text.index('"command"'), text.index('"config"'))

        write_report_json(filename, self.report)
        with open(filename) as report_file:
            self.assertEqual(report_file.read(), text)

        other = os.path.join(self.test_dir, 'other.json')
        self.assertRaises(fastjsonschema.JsonSchemaException, write_report_json, other, {'command': 'z-sim'})
        self.assertFalse(os.path.exists(other))

    def testWriteCsv(self):
        stream = io.StringIO()
        write_sweep_csv(stream, [{'a': 1, 'b': 2, 'c': 3}, {'a': 4, 'b': 5}], ['b', 'a'])
        self.assertEqual(stream.getvalue(), 'b,a\n2,1\n5,4\n')

    def testResultsArchive(self):
        filename = os.path.join(self.test_dir, 'results.h5')
        interleaver = make_interleaver(50, 5, seed=3)
        settings.setValue(settings.Key.Decoder_Iterations, 6)
        write_results_hdf(filename, self.report, {'user1': interleaver})

        report, permutations = read_results_hdf(filename)
        self.assertDictEqual(report, self.report)
        np.testing.assert_array_equal(permutations['user1'], interleaver.permutation)

        with h5py.File(filename, 'r') as hdf_file:
            self.assertEqual(hdf_file.attrs['version'], __version__)
            self.assertIn('date_created', hdf_file.attrs)
            self.assertEqual(hdf_file['settings'].attrs['Decoder/Iterations'], 6)
            dataset = hdf_file['interleavers/user1']
            self.assertEqual(dataset.attrs['spread'], interleaver.spread)
            self.assertEqual(dataset.attrs['requested_spread'], 5)
            self.assertEqual(dataset.attrs['seed'], 3)

        settings.reset()
        write_results_hdf(filename, self.report)
        report, permutations = read_results_hdf(filename)
        self.assertDictEqual(permutations, {})
        with h5py.File(filename, 'r') as hdf_file:
            self.assertNotIn('settings', hdf_file)

    def testRenderSummary(self):
        text = render_summary(self.report)
        self.assertTrue(text.startswith(f'nlturbo {__version__} - z-sim\n'))
        self.assertIn('rate 1/3 | z(0.1) | capacity 0.5000 | gap 0.1000 | BER 1.000e-03 [5.000e-04, 2.000e-03]', text)
        self.assertIn('10 blocks (error_target)', text)
        self.assertNotIn(' s\n', text)

        self.report['points'][0]['wall_time'] = 1.5
        self.assertIn('(error_target) | 1.5 s', render_summary(self.report))

        user = {'rate': '1/9', 'capacity': 0.2, 'gap': 0.05, 'bit_errors': 0, 'frame_errors': 0,
                'ber': interval(0.0), 'fer': interval(0.0)}
        point = {'rate': '4/9', 'channel': {'kind': 'bbsc', 'params': [0.05, 0.1]}, 'info_bits': 400, 'blocks': 3,
                 'stop_reason': 'block_budget', 'users': [user, dict(user, rate='1/3', capacity=0.4)]}
        text = render_summary({'command': 'bbsc-sim', 'version': __version__, 'config': {}, 'points': [point]})
        self.assertIn('rate 1/9 + 1/3 | bbsc(0.05, 0.1) | capacity 0.2000 + 0.4000', text)

        text = render_summary({'command': 'audit', 'version': __version__, 'config': {}})
        self.assertEqual(text.strip(), f'nlturbo {__version__} - audit')


if __name__ == '__main__':
    unittest.main()
