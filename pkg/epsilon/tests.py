import io
import json
import math

import numpy as np
from django.core.management import call_command
from django.test import SimpleTestCase, tag

from core.exceptions import InvalidArgument
from core.rng import make_rng
from qstate.operations import basis_state, random_ensemble, random_state
from qstate.states import Ensemble, fidelity, make_ghz, make_w_state, trace_distance
from .bounds import (
    BoundFormula,
    eps_geo_closed_form,
    eps_geo_star_lower,
    eps_geo_variational,
    eta_for_trace,
    get_eta_map,
    stationary_delta,
    variational_objective,
)
from .lemmas import (
    lemma_lipschitz_check,
    lemma_mass_concentration_check,
    sample_lipschitz,
    sample_mass_concentration,
    sample_soundness,
)

W_SUP = 1 - 1 / math.e


class EtaMapTests(SimpleTestCase):
    def test_trace_is_identity(self):
        self.assertEqual(eta_for_trace(0), 0)
        self.assertEqual(eta_for_trace(0.2), 0.2)
        with self.assertRaises(InvalidArgument):
            eta_for_trace(1.5)
        with self.assertRaises(InvalidArgument):
            eta_for_trace(-0.1)

    def test_purified_and_inverse(self):
        purified = get_eta_map('purified')
        self.assertAlmostEqual(purified.eta(0.1), 0.01)
        self.assertAlmostEqual(purified.inverse(0.01), 0.1)
        self.assertEqual(get_eta_map('trace').inverse(0.3), 0.3)
        with self.assertRaises(InvalidArgument):
            get_eta_map('bures')

    def test_trace_distance_bounds_infidelity(self):
        rng = make_rng(1)
        for _ in range(200):
            psi = random_state(int(rng.integers(1, 4)), rng)
            rho = random_ensemble(psi.n, 3, rng)
            distance = trace_distance(psi, rho)
            # Mixing toward psi shrinks the distance linearly.
            q = min(1.0, 0.1 / distance)
            mixed = Ensemble.normalized(((1 - q, psi),) + tuple((q * p, phi) for p, phi in rho.terms))
            distance = trace_distance(psi, mixed)
            self.assertLessEqual(distance, 0.1 + 1e-9)
            self.assertLessEqual(1 - fidelity(mixed, psi), eta_for_trace(distance) + 1e-12)


class BoundTests(SimpleTestCase):
    def test_star_arithmetic(self):
        self.assertAlmostEqual(eps_geo_star_lower(1e-3).value, 1 - 0.4 + 0.034, delta=1e-12)
        self.assertAlmostEqual(eps_geo_star_lower(0.008).value, 0.336, delta=1e-12)
        self.assertGreater(eps_geo_star_lower(1e-3).value, W_SUP)
        self.assertLess(eps_geo_star_lower(1.1e-3).value, W_SUP)
        self.assertGreater(eps_geo_star_lower(1e-12).value, 0.9995)

    def test_star_validity_flag(self):
        self.assertTrue(eps_geo_star_lower(0.44).validity_ok)
        bound = eps_geo_star_lower(0.5)
        self.assertFalse(bound.validity_ok)
        self.assertTrue(bound.clamped)
        self.assertEqual(bound.value, 0.0)
        with self.assertRaises(InvalidArgument):
            eps_geo_star_lower(0)

    def test_closed_form_arithmetic(self):
        bound = eps_geo_closed_form(0.5, 0.01)
        expected = (1 - (3 * 0.1 / 1.0) ** (2 / 3)) * (0.5 - (18 * 0.5 * 0.01) ** (1 / 3))
        self.assertAlmostEqual(bound.value, expected, delta=1e-15)
        self.assertEqual(bound.formula, BoundFormula.CLOSED_FORM)
        self.assertLessEqual(bound.value, eps_geo_variational(0.5, 0.01).value)

    def test_closed_form_boundary(self):
        bound = eps_geo_closed_form(1.0, 0.44)
        self.assertTrue(bound.validity_ok)
        self.assertGreaterEqual(bound.value, 0.0)
        self.assertFalse(eps_geo_closed_form(1.0, 0.45).validity_ok)

    def test_stationary_point_solves_cubic(self):
        for eg, eta in ((W_SUP, 1e-3), (0.5, 0.01), (1.0, 1e-6)):
            s = math.sqrt(stationary_delta(eg, eta))
            self.assertAlmostEqual(s ** 3 + eta * s, (2 / 3) * eg * eta, delta=1e-15)

    def test_variational_matches_grid(self):
        bound = eps_geo_variational(W_SUP, 1e-3)
        self.assertAlmostEqual(bound.value, bound.details['grid_value'], delta=1e-9)
        self.assertAlmostEqual(bound.value, variational_objective(bound.delta_star, W_SUP, 1e-3), delta=1e-15)
        self.assertFalse(bound.clamped)

    def test_small_eta_limit(self):
        for eg in (0.3, 0.6, 1.0):
            self.assertAlmostEqual(eps_geo_variational(eg, 1e-9).value, eg, delta=5e-3)
            self.assertAlmostEqual(eps_geo_closed_form(eg, 1e-9).value, eg, delta=5e-3)

    def test_variational_clamps_when_ball_is_too_large(self):
        bound = eps_geo_variational(0.3, 0.02)
        self.assertEqual(bound.value, 0.0)
        self.assertTrue(bound.clamped)

    def test_invalid_inputs(self):
        with self.assertRaises(InvalidArgument):
            eps_geo_variational(0.0, 0.1)
        with self.assertRaises(InvalidArgument):
            eps_geo_closed_form(1.2, 0.1)
        with self.assertRaises(InvalidArgument):
            eps_geo_closed_form(0.5, -1.0)

    def test_non_increasing_in_eta(self):
        etas = np.linspace(1e-4, 0.44, 100)
        for eg in (0.2, W_SUP, 1.0):
            for bound in (eps_geo_variational, eps_geo_closed_form):
                values = [bound(eg, eta).value for eta in etas]
                self.assertTrue(all(a >= b - 1e-12 for a, b in zip(values, values[1:])), bound.__name__)
        star = [eps_geo_star_lower(eta).value for eta in etas]
        self.assertTrue(all(a >= b for a, b in zip(star, star[1:])))

    def test_dominance_grid(self):
        for eg in np.linspace(0.02, 1.0, 50):
            for eta in np.geomspace(1e-6, 0.44, 50):
                variational = eps_geo_variational(eg, eta).value
                closed = eps_geo_closed_form(eg, eta).value
                self.assertGreaterEqual(variational, closed - 1e-12)
                self.assertLessEqual(variational, eg)
                self.assertGreaterEqual(closed, 0.0)


class LemmaTests(SimpleTestCase):
    def test_pure_input(self):
        psi = make_w_state(3)
        report = lemma_mass_concentration_check(psi, psi, 0.1)
        self.assertEqual(report.lhs, 1.0)
        self.assertTrue(report.passed)

    def test_two_term_ensemble(self):
        psi, perp = basis_state([0, 0]), basis_state([1, 1])
        for q in (0.1, 0.3, 0.6):
            report = lemma_mass_concentration_check(Ensemble(((1 - q, psi), (q, perp))), psi, 0.5)
            self.assertAlmostEqual(report.lhs, 1 - q)
            self.assertAlmostEqual(report.rhs, 1 - q / 0.5)
            self.assertTrue(report.passed)
        with self.assertRaises(InvalidArgument):
            lemma_mass_concentration_check(psi, psi, 0)

    def test_lipschitz_identity(self):
        psi = make_ghz(3)
        report = lemma_lipschitz_check(psi, psi, seed=2)
        self.assertAlmostEqual(report.lhs, 0.0, delta=1e-9)
        self.assertTrue(report.passed)

    def test_w_versus_ghz(self):
        w, ghz = make_w_state(3), make_ghz(3)
        report = lemma_lipschitz_check(w, ghz, seed=3, restarts=32)
        self.assertAlmostEqual(report.lhs, 1 / 18, delta=1e-6)
        self.assertAlmostEqual(report.rhs, 3 * math.sqrt(1 - abs(w.overlap(ghz)) ** 2))
        self.assertTrue(report.passed)

    def test_lipschitz_rejects_mismatched_sizes(self):
        with self.assertRaises(InvalidArgument):
            lemma_lipschitz_check(make_ghz(2), make_ghz(3))
        with self.assertRaises(InvalidArgument):
            lemma_lipschitz_check(Ensemble.pure(make_ghz(2)), make_ghz(2))

    @tag('slow')
    def test_sampled_mass_concentration(self):
        summary = sample_mass_concentration(trials=1000, max_n=4, seed=4)
        self.assertEqual(summary.trials, 1000)
        self.assertTrue(summary.passed, summary.failures)

    @tag('slow')
    def test_sampled_lipschitz(self):
        summary = sample_lipschitz(trials=1000, max_n=4, seed=5)
        self.assertEqual(summary.trials, 1000)
        self.assertTrue(summary.passed, summary.failures)

    def test_sampled_soundness(self):
        summary = sample_soundness(trials=100, max_n=3, eps=0.01, seed=6)
        self.assertTrue(summary.passed, summary.failures)


class EpsBoundCommandTests(SimpleTestCase):
    def run_command(self, *args):
        out = io.StringIO()
        call_command('eps_bound', *args, stdout=out)
        return out.getvalue()

    def test_star_json(self):
        data = json.loads(self.run_command('--formula', 'star', '--eta', '1e-3', '--json'))
        self.assertEqual(data['payload']['formula'], 'star_lower')
        self.assertAlmostEqual(data['payload']['value'], 0.634, delta=1e-12)
        self.assertEqual(data['provenance'][0]['anchor'], '1 - 4 eta^(1/3) + 3.4 eta^(2/3)')

    def test_closed_from_eps(self):
        data = json.loads(self.run_command('--formula', 'closed', '--eg', '0.5', '--eps', '0.1',
                                           '--distance', 'purified', '--json'))
        self.assertAlmostEqual(data['payload']['eta_used'], 0.01)

    def test_missing_eta(self):
        from django.core.management.base import CommandError
        with self.assertRaises(CommandError):
            self.run_command('--formula', 'variational', '--eg', '0.5')
