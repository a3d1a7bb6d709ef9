import math
import tempfile
from pathlib import Path

import numpy as np
from django.test import SimpleTestCase, override_settings

from core.exceptions import CapacityError, InvalidArgument
from core.rng import make_rng
from .io import dump_state, graph_from_dict, graph_to_dict, load_state, state_from_dict, state_to_dict
from .operations import (
    apply_local_unitaries,
    basis_state,
    density_matrix,
    extend_with_zeros,
    measure_qubit,
    measurement_basis,
    partial_trace,
    pauli_noise_ensemble,
    product_state,
    random_ensemble,
    random_state,
    random_unitary,
    trace_distance_matrices,
    z_pattern_ensemble,
    z_pattern_state,
)
from .states import (
    Bipartition,
    Ensemble,
    Graph,
    PureState,
    fidelity,
    make_deformed_cluster,
    make_ghz,
    make_graph_state,
    make_w_state,
    schmidt_coefficients,
    trace_distance,
)

CZ = np.diag([1, 1, 1, -1]).astype(complex)


class StateFamilyTests(SimpleTestCase):
    def test_w_state_support(self):
        psi = make_w_state(3)
        nonzero = np.flatnonzero(np.abs(psi.amplitudes) > 0)
        self.assertEqual(nonzero.tolist(), [1, 2, 4])
        np.testing.assert_allclose(psi.amplitudes[nonzero], 1 / math.sqrt(3))

    def test_w_state_two_qubits(self):
        np.testing.assert_allclose(make_w_state(2).amplitudes, [0, 1 / math.sqrt(2), 1 / math.sqrt(2), 0])

    def test_small_families_rejected(self):
        with self.assertRaises(InvalidArgument):
            make_w_state(1)
        with self.assertRaises(InvalidArgument):
            make_ghz(1)

    def test_ghz_rank_two_on_every_cut(self):
        psi = make_ghz(4)
        self.assertEqual(np.count_nonzero(np.abs(psi.amplitudes) > 0), 2)
        for mask in range(1, 8):
            side_a = {q for q in range(4) if (mask >> q) & 1}
            coeffs = schmidt_coefficients(psi, Bipartition.of(side_a, 4))
            self.assertEqual(int(np.sum(coeffs > 1e-8)), 2)

    def test_empty_graph_state_is_uniform(self):
        psi = make_graph_state(Graph.empty(3))
        np.testing.assert_allclose(psi.amplitudes, np.full(8, 2 ** -1.5))

    def test_single_edge_graph_state(self):
        psi = make_graph_state(Graph.path(2))
        np.testing.assert_allclose(psi.amplitudes, np.array([1, 1, 1, -1]) / 2)

    def test_path_matches_sequential_cz_circuit(self):
        plus = np.full(8, 2 ** -1.5, dtype=complex)
        circuit = np.kron(CZ, np.eye(2)) @ plus
        circuit = np.kron(np.eye(2), CZ) @ circuit
        np.testing.assert_allclose(make_graph_state(Graph.path(3)).amplitudes, circuit, atol=1e-15)

    def test_grid_labels_are_row_major(self):
        g = Graph.grid(2, 3)
        self.assertEqual(g.num_vertices, 6)
        self.assertEqual(g.edges, frozenset({(0, 1), (1, 2), (3, 4), (4, 5), (0, 3), (1, 4), (2, 5)}))

    def test_deformed_overlap_closed_form(self):
        for g in (Graph.path(3), Graph.grid(2), Graph.cycle(5)):
            for lam in (0.2, 0.649, 0.9, 1.0):
                overlap = fidelity(make_deformed_cluster(g, lam), make_graph_state(g))
                expected = ((1 + lam) ** 2 / (2 * (1 + lam ** 2))) ** g.num_vertices
                self.assertAlmostEqual(overlap, expected, delta=1e-10)

    def test_deformed_identity_and_degenerate(self):
        g = Graph.grid(2)
        np.testing.assert_allclose(make_deformed_cluster(g, 1.0).amplitudes, make_graph_state(g).amplitudes)
        zero = make_deformed_cluster(g, 0.0)
        self.assertTrue(zero.metadata['degenerate'])
        self.assertAlmostEqual(abs(zero.amplitudes[0]), 1.0)
        with self.assertRaises(InvalidArgument):
            make_deformed_cluster(g, 1.5)

    @override_settings(QSTATE_DENSE_LIMIT=4)
    def test_dense_limit_is_enforced(self):
        with self.assertRaises(CapacityError):
            make_graph_state(Graph.path(5))


class TypeValidationTests(SimpleTestCase):
    def test_unnormalized_state_rejected(self):
        with self.assertRaises(InvalidArgument):
            PureState(np.array([1.0, 1.0]))

    def test_bad_length_rejected(self):
        with self.assertRaises(InvalidArgument):
            PureState(np.array([1.0, 0.0, 0.0]))

    def test_ensemble_probabilities_must_sum_to_one(self):
        psi = make_ghz(2)
        with self.assertRaises(InvalidArgument):
            Ensemble(((0.5, psi), (0.4, psi)))
        with self.assertRaises(InvalidArgument):
            Ensemble(((1.5, psi), (-0.5, psi)))

    def test_graph_rejects_self_loops(self):
        with self.assertRaises(InvalidArgument):
            Graph(3, frozenset({(1, 1)}))
        with self.assertRaises(InvalidArgument):
            Graph(3, frozenset({(0, 3)}))

    def test_bipartition_validation(self):
        with self.assertRaises(InvalidArgument):
            Bipartition(frozenset(), frozenset({0, 1}))
        with self.assertRaises(InvalidArgument):
            Bipartition(frozenset({0}), frozenset({0, 1}))
        with self.assertRaises(InvalidArgument):
            Bipartition(frozenset({0}), frozenset({2}))


class DistanceTests(SimpleTestCase):
    def test_fidelity_basics(self):
        zero, one = basis_state([0]), basis_state([1])
        self.assertEqual(fidelity(zero, zero), 1.0)
        self.assertEqual(fidelity(zero, one), 0.0)

    def test_fidelity_needs_pure_reference(self):
        with self.assertRaises(InvalidArgument):
            fidelity(basis_state([0]), Ensemble.pure(basis_state([0])))

    def test_trace_distance_of_quarter_infidelity(self):
        zero = basis_state([0])
        tilted = product_state([[math.cos(math.pi / 6), math.sin(math.pi / 6)]])
        self.assertAlmostEqual(fidelity(zero, tilted), 0.75)
        self.assertAlmostEqual(trace_distance(zero, tilted), 0.5, delta=1e-12)
        self.assertAlmostEqual(trace_distance(Ensemble.pure(zero), Ensemble.normalized([(1, tilted)])), 0.5, delta=1e-12)
        self.assertAlmostEqual(trace_distance(zero, basis_state([1])), 1.0)
        self.assertEqual(trace_distance(zero, zero), 0.0)

    def test_pure_pair_relation(self):
        rng = make_rng(11)
        for _ in range(20):
            a, b = random_state(3, rng), random_state(3, rng)
            self.assertAlmostEqual(trace_distance(a, b), math.sqrt(1 - fidelity(a, b)), delta=1e-10)

    def test_low_rank_path_matches_density_operators(self):
        rng = make_rng(12)
        for _ in range(10):
            a, b = random_ensemble(3, 3, rng), random_ensemble(3, 2, rng)
            self.assertAlmostEqual(
                trace_distance(a, b),
                trace_distance_matrices(density_matrix(a), density_matrix(b)),
                delta=1e-10,
            )

    def test_triangle_inequality(self):
        rng = make_rng(13)
        for _ in range(30):
            a, b, c = (random_ensemble(2, 2, rng) for _ in range(3))
            self.assertLessEqual(trace_distance(a, c), trace_distance(a, b) + trace_distance(b, c) + 1e-9)

    def test_contracts_under_partial_trace(self):
        rng = make_rng(14)
        for _ in range(20):
            a, b = random_state(3, rng), random_ensemble(3, 2, rng)
            reduced = trace_distance_matrices(partial_trace(a, [0, 2]), partial_trace(b, [0, 2]))
            self.assertLessEqual(reduced, trace_distance(a, b) + 1e-9)


class SchmidtTests(SimpleTestCase):
    def test_product_state(self):
        psi = product_state([[1, 1], [1, 0], [1, 1j]])
        coeffs = schmidt_coefficients(psi, Bipartition.of({0}, 3))
        np.testing.assert_allclose(coeffs, [1, 0], atol=1e-12)

    def test_bell_state(self):
        coeffs = schmidt_coefficients(make_ghz(2), Bipartition.of({0}, 2))
        np.testing.assert_allclose(coeffs, [1 / math.sqrt(2)] * 2)

    def test_ghz_four_half_cut(self):
        coeffs = schmidt_coefficients(make_ghz(4), Bipartition.of({0, 1}, 4))
        np.testing.assert_allclose(coeffs, [1 / math.sqrt(2), 1 / math.sqrt(2), 0, 0], atol=1e-12)

    def test_squared_coefficients_sum_to_one(self):
        psi = random_state(5, make_rng(15))
        coeffs = schmidt_coefficients(psi, Bipartition.of({1, 3}, 5))
        self.assertEqual(len(coeffs), 4)
        self.assertAlmostEqual(float(np.sum(coeffs ** 2)), 1.0, delta=1e-12)


class OperationTests(SimpleTestCase):
    def test_measure_bell_pair(self):
        for theta, phi in ((0.0, 0.0), (math.pi / 2, 0.3), (1.1, 2.0)):
            branches = measure_qubit(make_ghz(2), 0, measurement_basis(theta, phi))
            for p, residual in branches:
                self.assertAlmostEqual(p, 0.5, delta=1e-12)
                self.assertEqual(residual.n, 1)
            self.assertEqual(len(branches), 2)

    def test_measure_keeps_residual(self):
        branches = measure_qubit(make_ghz(3), 1, measurement_basis(0.0, 0.0))
        self.assertEqual(branches[0][1].n, 2)
        np.testing.assert_allclose(np.abs(branches[0][1].amplitudes), [1, 0, 0, 0])

    def test_local_unitaries_preserve_schmidt_spectrum(self):
        rng = make_rng(16)
        psi = random_state(3, rng)
        rotated = apply_local_unitaries(psi, [random_unitary(rng) for _ in range(3)])
        cut = Bipartition.of({0}, 3)
        np.testing.assert_allclose(schmidt_coefficients(psi, cut), schmidt_coefficients(rotated, cut), atol=1e-12)

    def test_extend_with_zeros(self):
        psi = extend_with_zeros(make_ghz(2), 2)
        self.assertEqual(psi.n, 4)
        self.assertAlmostEqual(abs(psi.amplitudes[0]) ** 2, 0.5)
        self.assertAlmostEqual(abs(psi.amplitudes[0b1100]) ** 2, 0.5)

    def test_z_pattern_states_are_orthogonal(self):
        g = Graph.path(3)
        a = z_pattern_state(g, [1, 0, 0])
        self.assertAlmostEqual(abs(a.overlap(make_graph_state(g))), 0.0)

    def test_z_pattern_ensemble_weights(self):
        g = Graph.path(3)
        ensemble = z_pattern_ensemble(g, 0.2, {(0, 1, 0): 1.0})
        np.testing.assert_allclose(sorted(ensemble.probabilities), [0.2, 0.8])

    def test_x_error_acts_as_neighbour_z(self):
        g = Graph.path(3)
        noisy = pauli_noise_ensemble(g, 0.1, 0.0, 0.0)
        # X on both ends of the path cancels.
        self.assertAlmostEqual(fidelity(noisy, make_graph_state(g)), 0.9 * (0.81 + 0.01), delta=1e-12)
        clean = pauli_noise_ensemble(g, 0.0, 0.0, 0.0)
        self.assertEqual(len(clean.terms), 1)


class FileFormatTests(SimpleTestCase):
    def test_state_payload(self):
        psi = random_state(2, make_rng(17))
        data = state_to_dict(psi)
        self.assertEqual(data['n'], 2)
        self.assertEqual(len(data['amplitudes']), 4)
        restored = state_from_dict(data)
        self.assertTrue(np.array_equal(restored.amplitudes, psi.amplitudes))

    def test_state_payload_rejects_bad_norm(self):
        with self.assertRaises(InvalidArgument):
            state_from_dict({'n': 1, 'amplitudes': [[1.0, 0.0], [1.0, 0.0]]})
        with self.assertRaises(InvalidArgument):
            state_from_dict({'n': 2, 'amplitudes': [[1.0, 0.0], [0.0, 0.0]]})

    def test_state_file_round_trip(self):
        psi = make_w_state(3)
        with tempfile.TemporaryDirectory() as directory:
            path = Path(directory) / 'w3.json'
            dump_state(psi, path)
            restored = load_state(path)
        self.assertEqual(restored.n, 3)
        self.assertTrue(np.array_equal(restored.amplitudes, psi.amplitudes))

    def test_state_payload_rejects_malformed_pairs(self):
        for amplitude in ([1.0], [1.0, 0.0, 0.0], 1.0):
            with self.assertRaises(InvalidArgument):
                state_from_dict({'n': 1, 'amplitudes': [amplitude, [0.0, 0.0]]})

    def test_graph_payload(self):
        g = Graph.grid(2)
        data = graph_to_dict(g)
        self.assertEqual(data['vertices'], 4)
        self.assertEqual(graph_from_dict(data), g)
        with self.assertRaises(InvalidArgument):
            graph_from_dict({'vertices': 2, 'edges': [[0, 0]]})
