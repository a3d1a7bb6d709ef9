import io
import json
import math

import numpy as np
from django.core.management import call_command
from django.test import SimpleTestCase, override_settings, tag

from core.exceptions import CapacityError, InvalidArgument
from core.rng import make_rng
from qstate.operations import basis_state, product_state, random_state, z_pattern_state
from qstate.states import Bipartition, Ensemble, Graph, make_ghz, make_graph_state, make_w_state
from .axioms import (
    check_extendability,
    check_lu_invariance,
    check_strong_monotonicity,
    check_vanishing_on_product,
    check_weak_non_increase,
    check_width_dominance,
)
from .families import family_supremum, w_product_overlap
from .geometric import geometric_measure, geometric_measure_ensemble_ub, product_overlap, product_state_overlap
from .results import MonotoneKind, MonotoneResult
from .trees import enumerate_subcubic_trees, tree_count
from .widths import entanglement_entropy, entropic_entanglement_width, schmidt_rank, schmidt_rank_width


class ProductOverlapTests(SimpleTestCase):
    def test_product_state_overlap_is_one(self):
        psi = product_state([[1, 2j], [3, -1], [0.5, 0.5]])
        result = product_overlap(psi, seed=1)
        self.assertAlmostEqual(result.value, 1.0, delta=1e-9)
        self.assertEqual(result.kind, MonotoneKind.LOWER_BOUND)

    def test_w_state_closed_form(self):
        values = []
        for n in range(2, 13):
            value = product_overlap(make_w_state(n), seed=n).value
            self.assertAlmostEqual(value, w_product_overlap(n), delta=1e-6)
            values.append(value)
        self.assertTrue(all(a > b for a, b in zip(values, values[1:])))
        self.assertGreater(values[-1], 1 / math.e)

    def test_w3_against_bloch_grid(self):
        theta = np.linspace(0, math.pi, 61)
        c, s = np.cos(theta / 2), np.sin(theta / 2)
        c1, c2, c3 = np.meshgrid(c, c, c, indexing='ij')
        s1, s2, s3 = np.meshgrid(s, s, s, indexing='ij')
        grid = ((s1 * c2 * c3 + c1 * s2 * c3 + c1 * c2 * s3) ** 2 / 3).max()
        value = product_overlap(make_w_state(3), seed=2).value
        self.assertGreaterEqual(value, grid - 1e-12)
        self.assertAlmostEqual(value, 4 / 9, delta=1e-6)

    def test_ghz_half(self):
        for n in range(3, 7):
            self.assertAlmostEqual(product_overlap(make_ghz(n), seed=n).value, 0.5, delta=1e-8)

    def test_never_below_supplied_witness(self):
        rng = make_rng(3)
        psi = random_state(4, rng)
        witness = list(rng.normal(size=(4, 2)) + 1j * rng.normal(size=(4, 2)))
        result = product_overlap(psi, restarts=1, seed=4, witness=witness)
        self.assertGreaterEqual(result.value, product_state_overlap(psi, witness) - 1e-12)
        self.assertLessEqual(result.value, 1.0)

    def test_invalid_arguments(self):
        with self.assertRaises(InvalidArgument):
            product_overlap(make_ghz(2), restarts=0)
        with self.assertRaises(InvalidArgument):
            product_overlap(make_ghz(2), tol=0)

    def test_result_rejects_negative_values(self):
        with self.assertRaises(InvalidArgument):
            MonotoneResult(value=-0.1, kind=MonotoneKind.EXACT, method='test')


class GeometricMeasureTests(SimpleTestCase):
    def test_known_values(self):
        self.assertAlmostEqual(geometric_measure(make_w_state(3), seed=5).value, 5 / 9, delta=1e-6)
        self.assertAlmostEqual(geometric_measure(make_ghz(4), seed=6).value, 0.5, delta=1e-8)
        self.assertAlmostEqual(geometric_measure(basis_state([0, 1, 1]), seed=7).value, 0.0, delta=1e-9)
        self.assertEqual(geometric_measure(make_ghz(3), seed=8).kind, MonotoneKind.UPPER_BOUND)

    def test_single_term_ensemble(self):
        psi = make_w_state(3)
        pure = geometric_measure(psi, seed=9).value
        self.assertAlmostEqual(geometric_measure_ensemble_ub(Ensemble.pure(psi), seed=9).value, pure, delta=1e-8)

    def test_phase_flipped_cluster_mixture(self):
        g = Graph.path(3)
        cluster = make_graph_state(g)
        flipped = z_pattern_state(g, [0, 1, 0])
        mixture = Ensemble(((0.7, cluster), (0.3, flipped)))
        expected = geometric_measure(cluster, seed=10).value
        self.assertAlmostEqual(geometric_measure_ensemble_ub(mixture, seed=11).value, expected, delta=1e-6)

    def test_separable_decomposition(self):
        mixture = Ensemble(((0.5, basis_state([0, 0, 0])), (0.5, basis_state([1, 1, 1]))))
        result = geometric_measure_ensemble_ub(mixture, seed=12)
        self.assertAlmostEqual(result.value, 0.0, delta=1e-9)
        self.assertEqual(result.kind, MonotoneKind.UPPER_BOUND)


class SchmidtRankTests(SimpleTestCase):
    def test_ranks(self):
        self.assertEqual(schmidt_rank(basis_state([0, 1, 0]), Bipartition.of({0}, 3)), 1)
        for cut in ({0}, {0, 2}, {1, 3}):
            self.assertEqual(schmidt_rank(make_ghz(4), Bipartition.of(cut, 4)), 2)
        cluster = make_graph_state(Graph.path(4))
        self.assertEqual(schmidt_rank(cluster, Bipartition.of({0, 1}, 4)), 2)

    def test_entropy(self):
        self.assertAlmostEqual(entanglement_entropy(make_ghz(4), Bipartition.of({0, 1}, 4)), 1.0)
        self.assertAlmostEqual(entanglement_entropy(basis_state([0, 0]), Bipartition.of({0}, 2)), 0.0)


class SubcubicTreeTests(SimpleTestCase):
    def test_counts(self):
        for n in range(3, 9):
            self.assertEqual(sum(1 for _ in enumerate_subcubic_trees(n)), tree_count(n))
        self.assertEqual([tree_count(n) for n in (3, 4, 5)], [1, 3, 15])

    def test_trees_are_valid_and_distinct(self):
        for n in range(3, 7):
            trees = list(enumerate_subcubic_trees(n))
            self.assertTrue(all(tree.is_valid() for tree in trees))
            self.assertEqual(len({tree.edges for tree in trees}), len(trees))

    def test_cut_masks(self):
        for tree in enumerate_subcubic_trees(5):
            masks = tree.cut_masks
            self.assertEqual(len(masks), 2 * 5 - 3)
            for mask in masks:
                self.assertFalse(mask & 1)
                self.assertTrue(0 < mask < (1 << 5) - 1)
            self.assertEqual(tree.internal_vertices, 3)

    @override_settings(MONOTONES_TREE_CAP=5)
    def test_enumeration_cap(self):
        with self.assertRaises(CapacityError):
            next(enumerate_subcubic_trees(6))
        with self.assertRaises(CapacityError):
            schmidt_rank_width(make_ghz(6))

    def test_too_few_leaves(self):
        with self.assertRaises(InvalidArgument):
            next(enumerate_subcubic_trees(2))


class WidthTests(SimpleTestCase):
    def test_product_state(self):
        psi = basis_state([0, 1, 0, 1])
        self.assertEqual(schmidt_rank_width(psi).value, 1)
        self.assertEqual(entropic_entanglement_width(psi).value, 0)

    def test_ghz_width_two(self):
        for n in range(4, 9):
            result = schmidt_rank_width(make_ghz(n))
            self.assertEqual(result.value, 2)
            self.assertEqual(result.kind, MonotoneKind.EXACT)
            self.assertTrue(result.witness.is_valid())

    def test_cluster_1d_width(self):
        self.assertEqual(schmidt_rank_width(make_graph_state(Graph.path(6))).value, 2)

    def test_ghz_entropic_width(self):
        self.assertAlmostEqual(entropic_entanglement_width(make_ghz(4)).value, 1.0, delta=1e-12)

    def test_two_qubits_single_cut(self):
        result = schmidt_rank_width(make_ghz(2))
        self.assertEqual(result.value, 2)
        self.assertIn('note', result.details)
        with self.assertRaises(InvalidArgument):
            schmidt_rank_width(basis_state([0]))

    def test_square_cluster_width(self):
        # Pairing the diagonal vertices 0,3 keeps every cut at rank 2.
        result = schmidt_rank_width(make_graph_state(Graph.grid(2)))
        self.assertEqual(result.value, 2)
        self.assertIn(0b1001 ^ 0b1111, result.witness.cut_masks)


class FamilySupremumTests(SimpleTestCase):
    def test_w_family(self):
        result = family_supremum('w', 'geometric', 6, seed=13)
        self.assertAlmostEqual(result.value, 1 - (5 / 6) ** 5, delta=1e-6)
        self.assertEqual(result.kind, MonotoneKind.LOWER_BOUND)
        values = [entry['value'] for entry in result.details['per_size']]
        self.assertTrue(all(a < b for a, b in zip(values, values[1:])))

    def test_ghz_width(self):
        self.assertEqual(family_supremum('ghz', 'schmidt-rank-width', 8).value, 2)

    def test_product_family(self):
        self.assertAlmostEqual(family_supremum('product', 'geometric', 4, seed=14).value, 0.0, delta=1e-9)
        self.assertEqual(family_supremum('product', 'schmidt-rank-width', 4).value, 1)

    def test_unknown_family(self):
        with self.assertRaises(InvalidArgument):
            family_supremum('triangle', 'geometric', 4)
        with self.assertRaises(InvalidArgument):
            family_supremum('w', 'negativity', 4)


class AxiomTests(SimpleTestCase):
    def test_vanishing_on_product(self):
        self.assertTrue(check_vanishing_on_product(samples=5, seed=15).passed)

    @tag('slow')
    def test_lu_invariance(self):
        report = check_lu_invariance(samples=9, sizes=(3, 4, 5), seed=16)
        self.assertTrue(report.passed, report.details)
        self.assertEqual(report.checked, 9)

    def test_strong_monotonicity(self):
        report = check_strong_monotonicity(samples=10, seed=17)
        self.assertTrue(report.passed, report.details)

    def test_weak_non_increase(self):
        self.assertTrue(check_weak_non_increase(samples=10, seed=18).passed)

    def test_extendability(self):
        rng = make_rng(19)
        states = [make_w_state(3), make_ghz(3), random_state(3, rng)]
        report = check_extendability(states, seed=20)
        self.assertTrue(report.passed, report.details)
        self.assertEqual(report.checked, 6)

    def test_width_dominance(self):
        rng = make_rng(21)
        states = [random_state(4, rng) for _ in range(3)] + [make_w_state(5), make_graph_state(Graph.cycle(5))]
        self.assertTrue(check_width_dominance(states).passed)


class MeasureCommandTests(SimpleTestCase):
    def run_command(self, *args):
        out = io.StringIO()
        call_command('measure', *args, stdout=out)
        return out.getvalue()

    def test_geometric_w6(self):
        data = json.loads(self.run_command('geometric', '--family', 'w', '--n', '6', '--json'))
        self.assertEqual(data['schema_version'], '1')
        self.assertAlmostEqual(data['payload']['value'], 1 - (5 / 6) ** 5, delta=1e-6)
        self.assertEqual(data['config']['seed'], 20240607)

    def test_identical_runs_are_byte_identical(self):
        args = ('product-overlap', '--family', 'ghz', '--n', '4', '--json', '--seed', '5')
        self.assertEqual(self.run_command(*args), self.run_command(*args))

    def test_width_with_witness(self):
        data = json.loads(self.run_command('schmidt-rank-width', '--family', 'ghz', '--n', '5', '--json', '--witness'))
        self.assertEqual(data['payload']['value'], 2)
        self.assertEqual(data['payload']['witness']['leaves'], 5)

    def test_family_supremum_csv(self):
        lines = self.run_command('family-supremum', '--family', 'ghz', '--measure', 'schmidt-rank-width',
                                 '--size-cap', '5', '--csv').splitlines()
        self.assertEqual(lines[0], 'size,qubits,value,kind')
        self.assertEqual(len(lines), 5)
