import csv
import io
import json
import tempfile
from pathlib import Path
from unittest import mock

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase, TestCase, override_settings

from .cli import dispatch
from .conf import get_setting
from .exceptions import CapacityError, InvalidArgument
from .models import RunRecord
from .parallel import ordered_map
from .reports import Report
from .rng import make_rng, resolve_seed, spawn_generators
from .selftest import run_checks
from .sweeps import check_grid_size, frontier_sweep, parameter_values, star_sweep


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code, report = dispatch(list(argv), stdout=out, stderr=err)
    return code, report, out.getvalue(), err.getvalue()


class DispatchTests(TestCase):
    def test_w_family_is_ruled_out(self):
        code, report, out, _ = run('criteria', '--family', 'w', '--eta', '1e-3', '--delta', '0', '--json')
        self.assertEqual(code, 0)
        self.assertEqual(report.payload['decision'], 'ruled_out')
        self.assertEqual(json.loads(out)['payload']['decision'], 'ruled_out')

    def test_hyphenated_subcommand(self):
        code, report, _, _ = run('eps-bound', '--formula', 'star', '--eta', '1e-3', '--json')
        self.assertEqual(code, 0)
        self.assertEqual(report.subcommand, 'eps-bound')

    def test_unknown_subcommand(self):
        code, report, _, err = run('plot')
        self.assertEqual(code, 2)
        self.assertIsNone(report)
        self.assertIn('usage:', err)
        self.assertEqual(run()[0], 2)

    def test_unknown_flag(self):
        self.assertEqual(run('criteria', '--colour', 'blue')[0], 2)

    def test_invalid_argument(self):
        code, report, _, err = run('eps-bound', '--formula', 'closed', '--eta', '1e-3')
        self.assertEqual(code, 2)
        self.assertIsNone(report)
        self.assertIn('--eg', err)

    def test_internal_failure(self):
        with mock.patch('core.management.commands.sweep.star_sweep', side_effect=RuntimeError('boom')):
            code, report, _, _ = run('sweep', 'star', '--points', '3')
        self.assertEqual(code, 1)
        self.assertIsNone(report)

    def test_output_file(self):
        with tempfile.TemporaryDirectory() as directory:
            path = Path(directory) / 'report.json'
            code, _, out, _ = run('eps-bound', '--formula', 'star', '--eta', '1e-3', '--json', '--out', str(path))
            self.assertEqual(code, 0)
            self.assertEqual(out, '')
            self.assertEqual(json.loads(path.read_text())['payload']['formula'], 'star_lower')


class RunLedgerTests(TestCase):
    def test_successful_run_is_recorded(self):
        run('percolate', '--L', '8', '--p', '0.6', '--trials', '10', '--seed', '42', '--json', '--record')
        record = RunRecord.objects.get()
        self.assertEqual(record.subcommand, 'percolate')
        self.assertEqual(record.seed, '42')
        self.assertTrue(record.succeeded)
        self.assertEqual(record.payload['config']['seed'], 42)
        self.assertIsNotNone(record.wall_time)

    def test_refused_run_is_recorded(self):
        run('percolate', '--L', '8', '--record')
        record = RunRecord.objects.get()
        self.assertEqual(record.exit_code, 2)
        self.assertIn('--p', record.error_message)
        self.assertIsNone(record.payload)

    def test_runs_are_not_recorded_by_default(self):
        run('eps-bound', '--formula', 'star', '--eta', '1e-3')
        self.assertFalse(RunRecord.objects.exists())


class CallCommandTests(TestCase):
    def call(self, *args):
        out = io.StringIO()
        call_command('eps_bound', '--formula', 'star', '--eta', '1e-3', *args, stdout=out)
        return out.getvalue()

    def test_json(self):
        data = json.loads(self.call('--json'))
        self.assertEqual(data['subcommand'], 'eps-bound')
        self.assertNotIn('stdout', data['config'])
        self.assertNotIn('stderr', data['config'])
        self.assertAlmostEqual(data['payload']['value'], 0.634, delta=1e-12)

    def test_csv(self):
        (values,) = csv.DictReader(io.StringIO(self.call('--csv')))
        self.assertAlmostEqual(float(values['value']), 0.634, delta=1e-12)

    def test_human(self):
        out = self.call()
        self.assertTrue(out.startswith('eps-bound'))
        self.assertIn('value: 0.634', out)

    def test_record(self):
        self.call('--json', '--record')
        record = RunRecord.objects.get()
        self.assertTrue(record.succeeded)
        self.assertEqual(set(record.config), set(record.payload['config']))
        self.assertNotIn('stdout', record.config)


class ReproducibilityTests(SimpleTestCase):
    def test_identical_config_gives_identical_output(self):
        for argv in (
            ('percolate', '--L', '16', '--p', '0.6', '--trials', '50', '--json'),
            ('percolate', '--L', '16', '--p', '0.6', '--trials', '50', '--csv', '--threads', '4'),
            ('locc', 'noisy-cluster', '--n', '4', '--p', '0.1', '--seed', '9', '--json'),
            ('sweep', 'frontier', '--points', '3', '--frontier-points', '4'),
        ):
            self.assertEqual(run(*argv)[2], run(*argv)[2], argv)

    def test_thread_count_does_not_change_results(self):
        single = run('percolate', '--L', '16', '--p', '0.6', '--trials', '50', '--csv')[2]
        threaded = run('percolate', '--L', '16', '--p', '0.6', '--trials', '50', '--csv', '--threads', '0')[2]
        self.assertEqual(single, threaded)

    def test_default_seed_is_recorded(self):
        data = json.loads(run('percolate', '--L', '8', '--p', '0.5', '--trials', '5', '--json')[2])
        self.assertEqual(data['config']['seed'], 20240607)
        data = json.loads(run('percolate', '--L', '8', '--p', '0.5', '--trials', '5', '--seed', 'random',
                              '--json')[2])
        self.assertIsInstance(data['config']['seed'], int)


class SweepTests(SimpleTestCase):
    def test_star_sweep_decreases_from_one(self):
        rows = star_sweep(parameter_values(1e-9, 0.44, 50, 'log'))
        values = [row['value'] for row in rows]
        self.assertGreater(values[0], 0.99)
        self.assertTrue(all(a >= b for a, b in zip(values, values[1:])))

    def test_frontier_sweep_is_a_hyperbola(self):
        for row in frontier_sweep(0.0, 0.0, parameter_values(0.01, 0.1, 5), points=10):
            self.assertGreaterEqual(row['delta_prime'] * row['eps_prime'], row['budget'])

    def test_grid_limit(self):
        with override_settings(CLI_SWEEP_MAX_POINTS=10):
            with self.assertRaises(CapacityError):
                check_grid_size(range(4), range(3))
            self.assertEqual(check_grid_size(range(5), range(2)), 10)

    def test_parameter_values(self):
        self.assertEqual(parameter_values(0, 1, 3), [0.0, 0.5, 1.0])
        with self.assertRaises(InvalidArgument):
            parameter_values(0, 1, 3, 'log')
        with self.assertRaises(InvalidArgument):
            parameter_values(0, 1, 0)

    def test_command_emits_csv(self):
        lines = run('sweep', 'star', '--points', '5')[2].splitlines()
        self.assertEqual(lines[0], 'eta,value,unclamped,validity_ok,clamped')
        self.assertEqual(len(lines), 6)

    def test_percolation_grid(self):
        lines = run('sweep', 'percolation', '--L', '8', '16', '--points', '3', '--trials', '10')[2].splitlines()
        self.assertEqual(len(lines), 7)
        self.assertTrue(lines[1].startswith('8,'))
        self.assertTrue(lines[-1].startswith('16,'))

    @override_settings(CLI_SWEEP_MAX_POINTS=10)
    def test_command_refuses_large_grids(self):
        self.assertEqual(run('sweep', 'star', '--points', '11')[0], 2)


class SelfTestTests(SimpleTestCase):
    def test_selected_checks_pass(self):
        results = run_checks(resolve_seed(None), ['w-threshold', 'star-bound', 'deformed-constants', 'frontier'])
        self.assertEqual([r.name for r in results], ['w-threshold', 'star-bound', 'deformed-constants', 'frontier'])
        self.assertTrue(all(r.passed for r in results))

    def test_table(self):
        out = io.StringIO()
        call_command('selftest', '--only', 'star-bound', 'criteria', stdout=out)
        lines = out.getvalue().splitlines()
        self.assertIn('passed: True', out.getvalue())
        self.assertEqual(lines[-3].split(), ['name', 'passed', 'detail'])

    def test_failure_exits_nonzero(self):
        failing = [('always-fails', lambda seed: (False, 'no'))]
        with mock.patch('core.selftest.FAST_CHECKS', failing):
            self.assertEqual(run('selftest')[0], 1)
            with self.assertRaises(CommandError):
                call_command('selftest', stdout=io.StringIO())

    def test_check_choices_follow_the_registry(self):
        failing = [('always-fails', lambda seed: (False, 'no'))]
        with mock.patch('core.selftest.FAST_CHECKS', failing):
            self.assertEqual(run('selftest', '--only', 'always-fails')[0], 1)
        code, report, _, _ = run('selftest', '--only', 'star-bound')
        self.assertEqual(code, 0)
        self.assertEqual(report.payload['checks'][0]['name'], 'star-bound')

    def test_raising_check_counts_as_failure(self):
        def broken(seed):
            raise ZeroDivisionError

        with mock.patch('core.selftest.FAST_CHECKS', [('broken', broken)]):
            (result,) = run_checks(1)
        self.assertFalse(result.passed)
        self.assertIn('ZeroDivisionError', result.detail)


class PlumbingTests(SimpleTestCase):
    def test_seeds(self):
        self.assertEqual(resolve_seed(None), 20240607)
        self.assertEqual(resolve_seed('17'), 17)
        with self.assertRaises(InvalidArgument):
            resolve_seed('soon')
        with self.assertRaises(InvalidArgument):
            resolve_seed(-1)
        self.assertEqual(make_rng(5).random(), make_rng(5).random())
        first, second = spawn_generators(5, 2)
        self.assertNotEqual(first.random(), second.random())

    def test_ordered_map_keeps_input_order(self):
        self.assertEqual(ordered_map(lambda x: x * x, range(20), threads=4), [x * x for x in range(20)])

    def test_settings_fallback(self):
        self.assertEqual(get_setting('LOCC_BRANCH_CAP'), 2 ** 20)
        with self.assertRaises(KeyError):
            get_setting('SITE_NAME')

    def test_csv_floats_round_trip(self):
        self.assertEqual(Report('x', {}, {'v': 0.1}).render_csv(), 'v\n0.10000000000000001\n')

    def test_json_floats_round_trip(self):
        values = [0.1, 1 / 3, 0.634, 2.0 ** -1074, 1e300, -0.0]
        data = json.loads(Report('x', {}, {'v': values}).render_json())
        self.assertEqual([v.hex() for v in data['payload']['v']], [v.hex() for v in values])

    def test_schema_version_is_checked(self):
        report = Report('x', {}, {'v': 1})
        self.assertEqual(report.envelope()['schema_version'], '1')
