import io
import json
import math

import numpy as np
from django.core.management import call_command
from django.test import SimpleTestCase, tag

from core.exceptions import InvalidArgument
from core.rng import make_rng
from qstate.operations import apply_single_qubit
from qstate.states import Graph, fidelity, make_deformed_cluster, make_graph_state
from .deformation import (
    deformed_p_site,
    deformed_threshold,
    povm_hole_sampler,
    povm_operators,
    povm_outcome_probability,
)
from .estimates import SQUARE_SITE_THRESHOLD, crossing_slope, estimate_threshold, spanning_probability
from .lattice import Lattice, largest_cluster_fraction, lattice_to_graph, sample_lattice, spans


class LatticeTests(SimpleTestCase):
    def test_extreme_probabilities(self):
        rng = make_rng(1)
        self.assertTrue(sample_lattice(8, 1.0, rng).occupancy.all())
        self.assertFalse(sample_lattice(8, 0.0, rng).occupancy.any())

    def test_occupied_fraction(self):
        rng = make_rng(2)
        fraction = np.mean([sample_lattice(64, 0.5, rng).occupied_fraction for _ in range(100)])
        sigma = math.sqrt(0.25 / (100 * 64 * 64))
        self.assertLess(abs(fraction - 0.5), 4 * sigma)

    def test_invalid_arguments(self):
        rng = make_rng(3)
        with self.assertRaises(InvalidArgument):
            sample_lattice(1, 0.5, rng)
        with self.assertRaises(InvalidArgument):
            sample_lattice(4, 1.5, rng)
        with self.assertRaises(InvalidArgument):
            Lattice(3, np.ones((3, 4), dtype=bool))

    def test_crossing_convention(self):
        self.assertTrue(spans(Lattice.full(5)))
        self.assertFalse(spans(Lattice.empty(5)))
        row = np.zeros((5, 5), dtype=bool)
        row[2, :] = True
        self.assertTrue(spans(Lattice(5, row)))
        self.assertFalse(spans(Lattice(5, row.T)))

    def test_diagonal_sites_do_not_connect(self):
        self.assertFalse(spans(Lattice(3, np.eye(3, dtype=bool))))

    def test_largest_cluster(self):
        self.assertEqual(largest_cluster_fraction(Lattice.full(4)), 1.0)
        self.assertEqual(largest_cluster_fraction(Lattice.empty(4)), 0.0)

    def test_faulty_cluster_graph(self):
        occupancy = np.ones((3, 3), dtype=bool)
        occupancy[1, 1] = False
        graph, mapping = lattice_to_graph(Lattice(3, occupancy))
        self.assertEqual(graph.num_vertices, 8)
        self.assertEqual(len(graph.edges), 8)
        self.assertNotIn(4, mapping)


class SpanningProbabilityTests(SimpleTestCase):
    def test_regimes(self):
        self.assertGreater(spanning_probability(64, 0.7, 500, seed=4).spanning_probability, 0.99)
        self.assertLess(spanning_probability(64, 0.45, 500, seed=5).spanning_probability, 0.01)
        estimate = spanning_probability(16, 1.0, 50, seed=6)
        self.assertEqual(estimate.spanning_probability, 1.0)
        self.assertEqual(estimate.std_error, 0.0)

    def test_standard_error(self):
        estimate = spanning_probability(16, 0.59, 200, seed=7)
        p = estimate.spanning_probability
        self.assertAlmostEqual(estimate.std_error, math.sqrt(p * (1 - p) / 200))

    def test_deterministic_across_threads(self):
        single = spanning_probability(24, 0.6, 100, seed=8)
        self.assertEqual(single, spanning_probability(24, 0.6, 100, seed=8))
        self.assertEqual(single, spanning_probability(24, 0.6, 100, seed=8, threads=4))

    def test_non_decreasing_in_p(self):
        curve = [spanning_probability(32, p, 200, seed=9).spanning_probability for p in np.linspace(0.5, 0.7, 10)]
        self.assertTrue(all(a <= b for a, b in zip(curve, curve[1:])))

    def test_needs_trials(self):
        with self.assertRaises(InvalidArgument):
            spanning_probability(16, 0.5, 0)


class ThresholdTests(SimpleTestCase):
    @tag('slow')
    def test_threshold_estimate(self):
        estimate = estimate_threshold(64, 2000, seed=10)
        self.assertAlmostEqual(estimate, SQUARE_SITE_THRESHOLD, delta=0.01)
        small = estimate_threshold(16, 2000, seed=10)
        self.assertEqual(small, estimate_threshold(16, 2000, seed=10))
        self.assertLessEqual(abs(estimate - SQUARE_SITE_THRESHOLD), abs(small - SQUARE_SITE_THRESHOLD) + 0.005)

    def test_curve_steepens_with_size(self):
        small = crossing_slope(16, SQUARE_SITE_THRESHOLD, 400, seed=11)
        large = crossing_slope(64, SQUARE_SITE_THRESHOLD, 400, seed=11)
        self.assertGreater(large, small)


class DeformationTests(SimpleTestCase):
    def test_site_probability(self):
        self.assertEqual(deformed_p_site(1.0), 1.0)
        self.assertEqual(deformed_p_site(0.0), 0.0)
        self.assertAlmostEqual(deformed_p_site(0.6490), 0.5927, delta=5e-4)
        with self.assertRaises(InvalidArgument):
            deformed_p_site(1.2)

    def test_threshold_inversion(self):
        self.assertAlmostEqual(deformed_threshold(0.5927), 0.6490, delta=5e-4)
        self.assertEqual(deformed_threshold(1.0), 1.0)
        for p in (0.1, 0.5, 0.5927, 0.9):
            self.assertAlmostEqual(deformed_p_site(deformed_threshold(p)), p, delta=1e-12)

    def test_povm_completeness(self):
        for lam in (0.0, 0.3, 0.8, 1.0):
            success, failure = povm_operators(lam)
            total = success.conj().T @ success + failure.conj().T @ failure
            np.testing.assert_allclose(total, np.eye(2), atol=1e-15)

    def test_outcome_probability_on_dense_states(self):
        for graph in (Graph.path(3), Graph.grid(2), Graph.cycle(4)):
            for lam in (0.4, 0.8):
                psi = make_deformed_cluster(graph, lam)
                for qubit in range(graph.num_vertices):
                    self.assertAlmostEqual(povm_outcome_probability(psi, qubit, lam), deformed_p_site(lam),
                                           delta=1e-12)

    def test_success_everywhere_restores_the_cluster(self):
        graph = Graph.grid(2)
        psi = make_deformed_cluster(graph, 0.7)
        success, _ = povm_operators(0.7)
        for qubit in range(graph.num_vertices):
            psi = apply_single_qubit(psi, qubit, success)
        self.assertAlmostEqual(fidelity(psi, make_graph_state(graph)), 1.0, delta=1e-12)


class HoleSamplerTests(SimpleTestCase):
    def test_no_holes_without_deformation(self):
        self.assertTrue(povm_hole_sampler(1.0, 16, make_rng(12)).occupancy.all())

    def test_occupied_fraction(self):
        for index, lam in enumerate((0.5, 0.6490, 0.8)):
            rng = make_rng(13 + index)
            fraction = np.mean([povm_hole_sampler(lam, 64, rng).occupied_fraction for _ in range(100)])
            p = 2 * lam ** 2 / (1 + lam ** 2)
            self.assertAlmostEqual(p, deformed_p_site(lam), delta=1e-15)
            self.assertLess(abs(fraction - p), 4 * math.sqrt(p * (1 - p) / (100 * 64 * 64)), lam)

    def test_matches_independent_sampling(self):
        p = deformed_p_site(0.75)
        povm = np.mean([povm_hole_sampler(0.75, 64, make_rng(100 + i)).occupied_fraction for i in range(100)])
        plain = np.mean([sample_lattice(64, p, make_rng(500 + i)).occupied_fraction for i in range(100)])
        sigma = math.sqrt(2 * p * (1 - p) / (100 * 64 * 64))
        self.assertLess(abs(povm - plain), 5 * sigma)


class PercolationCommandTests(SimpleTestCase):
    def run_command(self, name, *args):
        out = io.StringIO()
        call_command(name, *args, stdout=out)
        return out.getvalue()

    def test_estimate_json(self):
        data = json.loads(self.run_command('percolate', '--L', '16', '--p', '1', '--trials', '20',
                                           '--seed', '7', '--json'))
        self.assertEqual(data['payload']['spanning_probability'], 1.0)
        self.assertEqual(data['config']['seed'], 7)

    def test_curve_csv(self):
        lines = self.run_command('percolate', 'curve', '--L', '8', '--trials', '20', '--points', '3',
                                 '--csv').splitlines()
        self.assertEqual(lines[0], 'p_site,side,trials,spanning_probability,std_error')
        self.assertEqual(len(lines), 4)

    def test_missing_probability(self):
        from django.core.management.base import CommandError
        with self.assertRaises(CommandError):
            self.run_command('percolate', '--L', '8')

    def test_deformed(self):
        data = json.loads(self.run_command('deformed', '--lambda', '0.8', '--L', '16', '--samples', '5', '--json'))
        self.assertTrue(data['payload']['supercritical'])
        self.assertAlmostEqual(data['payload']['p_site'], 1.28 / 1.64)
