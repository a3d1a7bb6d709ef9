import io
import json
import math
import tempfile
from pathlib import Path

import numpy as np
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase, override_settings

from core.exceptions import CapacityError, HypothesisError, InvalidArgument
from core.rng import make_rng
from qstate.io import dump_state
from qstate.operations import basis_state, measurement_basis, project_qubit, random_state
from qstate.states import Ensemble, Graph, PureState, fidelity, make_graph_state
from .experiments import (
    averaged_fidelity_check,
    contractivity_check,
    noisy_cluster_experiment,
    random_perturbation,
    stability_experiment,
    stability_trials,
)
from .io import dump_protocol, load_protocol, protocol_from_dict
from .patterns import one_way_line, one_way_rotation, target_state
from .protocol import BranchLeaf, BranchTree, MeasureStep, Protocol, computational_protocol, run_protocol

PLUS = PureState.from_vector([1, 1])
BELL = PureState.from_vector([1, 0, 0, 1])


def rotation_oracle(a, b, c):
    """H P(c) H P(b) H P(a) H |+> by direct 2x2 products."""
    h = np.array([[1, 1], [1, -1]]) / math.sqrt(2)

    def p(x):
        return np.diag([1, np.exp(1j * x)])

    return PureState.from_vector(h @ p(c) @ h @ p(b) @ h @ p(a) @ h @ np.array([1, 1]) / math.sqrt(2))


def random_wire(graph, line, rng):
    angles = rng.uniform(0, 2 * math.pi, len(line) - 1)
    protocol, unitary = one_way_line(graph, line, angles)
    return protocol, PureState.from_vector(target_state(unitary))


class RunProtocolTests(SimpleTestCase):
    def test_plus_in_computational_basis(self):
        tree = run_protocol(PLUS, computational_protocol(1))
        self.assertEqual(tree.probabilities().keys(), {'0', '1'})
        for leaf in tree.leaves:
            self.assertAlmostEqual(leaf.probability, 0.5, delta=1e-15)
            self.assertIsNone(leaf.state)

    def test_bell_pair_in_any_basis(self):
        rng = make_rng(1)
        for theta, phi in rng.uniform(0, 2 * math.pi, (10, 2)):
            tree = run_protocol(BELL, Protocol((MeasureStep(0, theta, phi),), (1,)))
            self.assertEqual(len(tree.leaves), 2)
            for leaf in tree.leaves:
                self.assertAlmostEqual(leaf.probability, 0.5, delta=1e-12)
                self.assertTrue(leaf.is_pure)
                self.assertEqual(leaf.state.n, 1)

    def test_born_rule(self):
        psi = random_state(3, make_rng(2))
        probabilities = run_protocol(psi, computational_protocol(3)).probabilities()
        for index, amplitude in enumerate(psi.amplitudes):
            self.assertAlmostEqual(probabilities[format(index, '03b')], abs(amplitude) ** 2, delta=1e-12)

    def test_matches_straight_line_projection(self):
        rng = make_rng(3)
        for _ in range(20):
            psi = random_state(3, rng)
            (t0, f0), (t1, f1) = rng.uniform(0, 2 * math.pi, (2, 2))
            protocol = Protocol((MeasureStep(0, t0, f0), MeasureStep(2, t1, f1)), (1,))
            tree = run_protocol(psi, protocol)
            self.assertAlmostEqual(tree.total_probability, 1.0, delta=1e-10)
            for a, first in enumerate(measurement_basis(t0, f0)):
                rest = project_qubit(psi.amplitudes, 3, 0, first)
                for b, second in enumerate(measurement_basis(t1, f1)):
                    residual = project_qubit(rest, 2, 1, second)
                    probability = float(np.vdot(residual, residual).real)
                    leaf = next(leaf for leaf in tree.leaves if leaf.record == f'{a}{b}')
                    self.assertAlmostEqual(leaf.probability, probability, delta=1e-10)
                    self.assertGreater(fidelity(leaf.state, PureState.from_vector(residual)), 1 - 1e-10)

    def test_ensemble_branches_merge_by_record(self):
        zero, one = basis_state([0, 0]), basis_state([1, 0])
        tree = run_protocol(Ensemble.normalized([(0.3, zero), (0.7, one)]), computational_protocol(2, [1]))
        self.assertAlmostEqual(tree.probabilities()['0'], 0.3)
        self.assertAlmostEqual(tree.probabilities()['1'], 0.7)
        self.assertAlmostEqual(tree.total_probability, 1.0, delta=1e-12)

    def test_mixed_branch_keeps_sub_ensemble(self):
        mixed = Ensemble.normalized([(0.5, BELL), (0.5, PureState.from_vector([1, 0, 0, -1]))])
        tree = run_protocol(mixed, computational_protocol(2, [1]))
        self.assertEqual(len(tree.leaves), 2)
        self.assertTrue(all(not leaf.is_pure for leaf in tree.leaves))

    def test_zero_probability_branches_are_pruned(self):
        tree = run_protocol(basis_state([0, 1]), computational_protocol(2))
        self.assertEqual(tree.probabilities(), {'01': 1.0})
        self.assertEqual(sorted(record for record, _ in tree.pruned), ['00', '1'])

    def test_feedforward_correction(self):
        # Outcome 1 leaves |->; Z turns it back into |+>.
        psi = PureState.from_vector([1, 0, 0, 1])
        protocol = Protocol((MeasureStep(0, math.pi / 2, 0.0),), (1,), {'0': ('',), '1': ('Z',)})
        for leaf in run_protocol(psi, protocol).leaves:
            self.assertAlmostEqual(fidelity(leaf.state, PLUS), 1.0, delta=1e-12)

    @override_settings(LOCC_BRANCH_CAP=8)
    def test_branch_cap(self):
        protocol, _ = one_way_rotation((0.1, 0.2, 0.3))
        with self.assertRaises(CapacityError):
            run_protocol(make_graph_state(Graph.path(5)), protocol)


class ProtocolValidationTests(SimpleTestCase):
    def test_qubit_measured_twice(self):
        with self.assertRaises(InvalidArgument):
            Protocol((MeasureStep(0, 0, 0), MeasureStep(0, 0, 0)), (1,))

    def test_output_cannot_be_measured(self):
        with self.assertRaises(InvalidArgument):
            Protocol((MeasureStep(0, 0, 0),), (0,))

    def test_feedforward_references_earlier_steps_only(self):
        with self.assertRaises(InvalidArgument):
            Protocol((MeasureStep(0, 0, 0, {'0': 'X'}),), (1,))

    def test_correction_letters(self):
        with self.assertRaises(InvalidArgument):
            MeasureStep(0, 0, 0, {'': 'Q'})
        with self.assertRaises(InvalidArgument):
            Protocol((MeasureStep(0, 0, 0),), (1,), {'0': ('X', 'Z')})

    def test_qubit_count_must_match(self):
        with self.assertRaises(InvalidArgument):
            run_protocol(BELL, computational_protocol(3))

    def test_protocol_file_is_validated(self):
        with self.assertRaises(InvalidArgument):
            protocol_from_dict({'steps': [{'qubit': 0, 'theta': 0, 'phi': 0, 'ff': {'': 'W'}}], 'outputs': [1]})
        with self.assertRaises(InvalidArgument):
            protocol_from_dict({'steps': [{'qubit': 0, 'theta': 0, 'phi': 0}] * 2, 'outputs': [1]})

    def test_protocol_file(self):
        protocol, _ = one_way_rotation((0.4, 1.1, -0.7))
        with tempfile.TemporaryDirectory() as directory:
            path = Path(directory) / 'protocol.json'
            dump_protocol(protocol, path)
            loaded = load_protocol(path)
        self.assertEqual(loaded.measured, protocol.measured)
        self.assertEqual(loaded.corrections, protocol.corrections)
        self.assertEqual([step.feedforward for step in loaded.steps], [step.feedforward for step in protocol.steps])


class OneWayRotationTests(SimpleTestCase):
    def test_identity_rotation(self):
        protocol, _ = one_way_rotation((0.0, 0.0, 0.0))
        tree = run_protocol(make_graph_state(Graph.path(5)), protocol)
        for leaf in tree.leaves:
            self.assertAlmostEqual(fidelity(leaf.state, PLUS), 1.0, delta=1e-10)

    def test_random_angles_match_matrix_product(self):
        rng = make_rng(4)
        cluster = make_graph_state(Graph.path(5))
        for a, b, c in rng.uniform(0, 2 * math.pi, (20, 3)):
            protocol, unitary = one_way_rotation((a, b, c))
            oracle = rotation_oracle(a, b, c)
            self.assertAlmostEqual(fidelity(PureState.from_vector(target_state(unitary)), oracle), 1.0, delta=1e-12)
            for leaf in run_protocol(cluster, protocol).leaves:
                self.assertGreater(fidelity(leaf.state, oracle), 1 - 1e-10)

    def test_uniform_branch_probabilities(self):
        protocol, _ = one_way_rotation((0.3, 0.9, 2.1))
        tree = run_protocol(make_graph_state(Graph.path(5)), protocol)
        self.assertEqual(len(tree.leaves), 16)
        for leaf in tree.leaves:
            self.assertAlmostEqual(leaf.probability, 1 / 16, delta=1e-12)

    def test_grid_wire(self):
        graph = Graph.grid(2)
        protocol, target = random_wire(graph, [0, 1, 3], make_rng(5))
        tree = run_protocol(make_graph_state(graph), protocol)
        self.assertEqual(len(tree.leaves), 8)
        for leaf in tree.leaves:
            self.assertAlmostEqual(leaf.probability, 1 / 8, delta=1e-12)
            self.assertGreater(fidelity(leaf.state, target), 1 - 1e-10)

    def test_wire_must_be_induced_path(self):
        with self.assertRaises(InvalidArgument):
            one_way_line(Graph.cycle(4), [0, 1, 2, 3], [0, 0, 0])
        with self.assertRaises(InvalidArgument):
            one_way_line(Graph.path(4), [0, 1, 2, 3], [0, 0])


class NoisyClusterTests(SimpleTestCase):
    def test_no_noise(self):
        protocol, target = random_wire(Graph.path(4), range(4), make_rng(6))
        report = noisy_cluster_experiment(Graph.path(4), 1, 0.0, protocol, target)
        self.assertTrue(report.passed)
        self.assertLess(report.max_distance, 1e-9)

    def test_distance_bounded_by_noise(self):
        rng = make_rng(7)
        cases = [(Graph.path(n), list(range(n))) for n in (4, 5, 6)] + [(Graph.grid(2), [0, 1, 3])]
        for graph, line in cases:
            protocol, target = random_wire(graph, line, rng)
            for p in (0.05, 0.2):
                for flip in range(graph.num_vertices):
                    report = noisy_cluster_experiment(graph, flip, p, protocol, target)
                    self.assertTrue(report.passed, (graph.num_vertices, p, flip))
                    self.assertLessEqual(report.max_distance, p + 1e-9)
                    self.assertTrue(report.uniform)
                    self.assertTrue(report.probabilities_match)
                    self.assertGreaterEqual(report.fidelity.fidelity, 1 - p - 1e-9)

    def test_weighted_z_pattern_noise(self):
        rng = make_rng(8)
        graph = Graph.path(4)
        protocol, target = random_wire(graph, range(4), rng)
        masks = rng.choice(16, size=5, replace=False)
        weights = dict(zip((int(m) for m in masks), rng.dirichlet(np.ones(5))))
        report = noisy_cluster_experiment(graph, 0, 0.2, protocol, target, weights=weights)
        self.assertTrue(report.passed)
        self.assertEqual(report.details['noise_terms'], 5)

    def test_invalid_arguments(self):
        protocol, target = random_wire(Graph.path(4), range(4), make_rng(9))
        with self.assertRaises(InvalidArgument):
            noisy_cluster_experiment(Graph.path(4), 1, 1.0, protocol, target)
        with self.assertRaises(InvalidArgument):
            noisy_cluster_experiment(Graph.path(4), 9, 0.1, protocol, target)
        with self.assertRaises(InvalidArgument):
            noisy_cluster_experiment(Graph.path(4), 1, 0.1, protocol, BELL)


class AveragedFidelityTests(SimpleTestCase):
    def test_exact_tree(self):
        protocol, target = random_wire(Graph.path(4), range(4), make_rng(10))
        check = averaged_fidelity_check(run_protocol(make_graph_state(Graph.path(4)), protocol), target, 0, 0)
        self.assertAlmostEqual(check.fidelity, 1.0, delta=1e-10)
        self.assertTrue(check.passed)

    def test_saturating_case(self):
        zero, one = basis_state([0]), basis_state([1])
        tree = BranchTree([BranchLeaf('0', 0.75, zero), BranchLeaf('1', 0.25, one)])
        check = averaged_fidelity_check(tree, zero, 0.0, 0.25)
        self.assertAlmostEqual(check.fidelity, 0.75, delta=1e-15)
        self.assertAlmostEqual(check.required, 0.75)
        self.assertTrue(check.passed)
        self.assertFalse(averaged_fidelity_check(tree, zero, 0.0, 0.2).passed)


class StabilityTests(SimpleTestCase):
    def setUp(self):
        self.graph = Graph.path(4)
        self.base = make_graph_state(self.graph)
        self.protocol, self.target = random_wire(self.graph, range(4), make_rng(11))

    def test_unperturbed_resource(self):
        report = stability_experiment(self.base, self.base, self.protocol, self.target, 0.0, 0.0)
        self.assertEqual(report.mu, 0.0)
        self.assertLess(report.output_distance, 1e-9)
        self.assertTrue(report.passed)

    def test_depolarized_resource(self):
        perturbed, mu = random_perturbation(self.base, 0.05, make_rng(12), 'depolarize')
        self.assertAlmostEqual(mu, 0.05, delta=1e-10)
        report = stability_experiment(self.base, perturbed, self.protocol, self.target, 0.0, 0.0)
        self.assertLessEqual(report.output_distance, 0.05 + 1e-9)
        self.assertTrue(report.passed)
        for point in report.frontier:
            self.assertGreaterEqual(point.delta_prime * point.eps_prime, report.mu * (1 - 1e-12))

    def test_perturbation_kinds(self):
        rng = make_rng(13)
        for kind in ('pure', 'mixture', 'depolarize'):
            _, mu = random_perturbation(self.base, 0.1, rng, kind)
            self.assertLessEqual(mu, 0.1 + 1e-9)
        with self.assertRaises(InvalidArgument):
            random_perturbation(self.base, 0.1, rng, 'erase')

    def test_random_perturbations(self):
        for mu in (0.02, 0.05, 0.1):
            result = stability_trials(self.base, self.protocol, self.target, mu, trials=50, seed=3)
            self.assertEqual(result.violations, 0, mu)
            self.assertTrue(result.frontier_ok)
            self.assertGreaterEqual(result.worst_margin, -1e-9)

    def test_trials_are_reproducible(self):
        first = stability_trials(self.base, self.protocol, self.target, 0.05, trials=5, seed=4, kind='pure')
        second = stability_trials(self.base, self.protocol, self.target, 0.05, trials=5, seed=4, kind='pure',
                                  threads=3)
        self.assertEqual([r.output_distance for r in first.reports], [r.output_distance for r in second.reports])

    def test_hypotheses(self):
        with self.assertRaises(HypothesisError) as ctx:
            stability_experiment(self.base, self.base, self.protocol, self.target, 0.6, 0.5)
        self.assertEqual(ctx.exception.inequality, 'delta + eps < 1')
        with self.assertRaises(HypothesisError) as ctx:
            stability_experiment(self.base, self.base, self.protocol, self.target, 0.3, 0.3, mu=0.5)
        self.assertEqual(ctx.exception.inequality, 'mu <= 1 - delta - eps')

    def test_contractivity(self):
        rng = make_rng(14)
        for _ in range(10):
            a = Ensemble.normalized([(rng.random(), random_state(4, rng)) for _ in range(2)])
            b = Ensemble.normalized([(rng.random(), random_state(4, rng)) for _ in range(3)])
            result = contractivity_check(a, b, self.protocol)
            self.assertTrue(result['passed'])
        result = contractivity_check(self.base, random_perturbation(self.base, 0.1, rng)[0], self.protocol)
        self.assertLessEqual(result['output_distance'], result['input_distance'] + 1e-9)


class LoccCommandTests(SimpleTestCase):
    def run_command(self, *args):
        out = io.StringIO()
        call_command('locc', *args, stdout=out)
        return out.getvalue()

    def test_noisy_cluster(self):
        data = json.loads(self.run_command('noisy-cluster', '--n', '4', '--p', '0.2', '--json'))
        self.assertTrue(data['payload']['passed'])
        self.assertLessEqual(data['payload']['max_distance'], 0.2 + 1e-9)
        self.assertEqual(data['payload']['branches'], 8)
        self.assertIn('seed', data['config'])

    def test_stability(self):
        data = json.loads(self.run_command('stability', '--mu', '0.05', '--eps', '0', '--delta', '0',
                                           '--trials', '5', '--seed', '3', '--json'))
        self.assertEqual(data['payload']['violations'], 0)
        self.assertEqual(data['config']['seed'], 3)
        self.assertTrue(data['payload']['frontier'])

    def test_run_files(self):
        with tempfile.TemporaryDirectory() as directory:
            state, protocol = Path(directory) / 'state.json', Path(directory) / 'protocol.json'
            dump_state(BELL, state)
            dump_protocol(computational_protocol(2, [1]), protocol)
            lines = self.run_command('run', '--state', str(state), '--protocol', str(protocol), '--csv').splitlines()
        self.assertEqual(lines[0], 'record,probability,pure')
        rows = [line.split(',') for line in lines[1:]]
        self.assertEqual([row[0] for row in rows], ['0', '1'])
        for _, probability, pure in rows:
            self.assertAlmostEqual(float(probability), 0.5, delta=1e-15)
            self.assertEqual(pure, 'true')

    def test_missing_arguments(self):
        with self.assertRaises(CommandError):
            self.run_command('stability')
        with self.assertRaises(CommandError):
            self.run_command('run', '--state', 'missing.json')
