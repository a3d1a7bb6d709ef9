import io
import json
import math

import numpy as np
from django.core.management import call_command
from django.test import SimpleTestCase

from core.exceptions import HypothesisError, InvalidArgument
from epsilon.bounds import eps_geo_star_lower, star_lower_value
from .frontier import stability_frontier
from .registry import ScalingClass, get_family_descriptor, log_class, scaling_consistency, scaling_rank
from .verdicts import (
    Decision,
    check_approx_det,
    check_approx_stoch,
    check_efficiency,
    check_unbounded_measure,
    required_fidelity,
    w_threshold_eta,
)

W_SUP = 1 - 1 / math.e


class RegistryTests(SimpleTestCase):
    def test_growth_order(self):
        self.assertLess(scaling_rank(ScalingClass.CONSTANT), scaling_rank(ScalingClass.POLYLOG))
        self.assertLess(scaling_rank(ScalingClass.POLYNOMIAL), scaling_rank(ScalingClass.EXP_SQRT))
        self.assertIsNone(scaling_rank(ScalingClass.UNKNOWN))
        self.assertEqual(log_class(ScalingClass.EXP_SQRT), ScalingClass.POLYNOMIAL)
        self.assertEqual(log_class(ScalingClass.CONSTANT), ScalingClass.UNKNOWN)

    def test_known_suprema(self):
        self.assertAlmostEqual(get_family_descriptor('w').supremum('geometric').value, W_SUP)
        self.assertIsNone(get_family_descriptor('deformed-cluster').supremum('geometric'))
        with self.assertRaises(InvalidArgument):
            get_family_descriptor('triangle')

    def test_declared_classes_fit_generated_members(self):
        self.assertTrue(scaling_consistency('ghz', 'schmidt-rank-width', 6)['consistent'])
        result = scaling_consistency('w', 'geometric', 6, seed=3)
        self.assertTrue(result['consistent'])
        self.assertEqual(len(result['values']), 5)


class ApproxDeterministicTests(SimpleTestCase):
    def test_w_family_ruled_out(self):
        verdict = check_approx_det('w', 1e-3, 'geometric')
        self.assertEqual(verdict.decision, Decision.RULED_OUT)
        self.assertAlmostEqual(verdict.family_value, W_SUP)
        self.assertAlmostEqual(verdict.required_value, 0.634, delta=1e-12)
        self.assertTrue(any(entry['quantity'] == 'eta' for entry in verdict.trace))

    def test_w_family_larger_eps(self):
        verdict = check_approx_det('w', 0.01)
        self.assertEqual(verdict.decision, Decision.NOT_RULED_OUT)
        self.assertAlmostEqual(verdict.required_value, star_lower_value(0.01), delta=1e-15)
        self.assertLess(verdict.required_value, W_SUP)

    def test_cluster_2d_never_ruled_out(self):
        for eta in np.linspace(1e-6, 0.44, 60):
            self.assertFalse(check_approx_det('cluster-2d', None, eta=eta).ruled_out)

    def test_unknown_supremum_is_insufficient(self):
        verdict = check_approx_det('deformed-cluster', 1e-3)
        self.assertEqual(verdict.decision, Decision.NOT_RULED_OUT)
        self.assertIn('insufficient data', verdict.note)

    def test_measure_without_axioms_is_refused(self):
        with self.assertRaises(HypothesisError):
            check_approx_det('w', 1e-3, 'entropic-width')
        with self.assertRaises(InvalidArgument):
            check_approx_det('w', 1e-3, 'negativity')

    def test_exact_case_is_refused(self):
        for call in (lambda: check_approx_det('w', 0.0), lambda: check_approx_stoch('w', 0.0, 0.1),
                     lambda: check_approx_det('w', None, eta=0.0)):
            with self.assertRaisesRegex(InvalidArgument, 'eps > 0'):
                call()

    def test_purified_distance(self):
        verdict = check_approx_det('w', math.sqrt(1e-3), distance_kind='purified')
        self.assertAlmostEqual(verdict.required_value, eps_geo_star_lower(1e-3).value, delta=1e-12)


class ApproxStochasticTests(SimpleTestCase):
    def test_delta_zero_matches_deterministic(self):
        for eps in (1e-4, 1e-3, 0.01, 0.2):
            self.assertEqual(check_approx_stoch('w', eps, 0.0).required_value,
                             check_approx_det('w', eps).required_value)

    def test_w_family_small_eta(self):
        verdict = check_approx_stoch('w', None, 0.05, eta=1e-4)
        expected = 0.95 * (1 - 4 * 1e-4 ** (1 / 3) + 3.4 * 1e-4 ** (2 / 3))
        self.assertAlmostEqual(verdict.required_value, expected, delta=1e-12)
        self.assertAlmostEqual(verdict.required_value, 0.7806, delta=1e-3)
        self.assertTrue(verdict.ruled_out)

    def test_vacuous_when_delta_is_one(self):
        verdict = check_approx_stoch('product', 1e-3, 1.0)
        self.assertEqual(verdict.required_value, 0.0)
        self.assertFalse(verdict.ruled_out)

    def test_larger_delta_never_rules_out_more(self):
        decisions = [check_approx_stoch('w', 1e-3, delta).ruled_out for delta in np.linspace(0, 1, 41)]
        first_free = decisions.index(False)
        self.assertFalse(any(decisions[first_free:]))

    def test_invalid_delta(self):
        with self.assertRaises(InvalidArgument):
            check_approx_stoch('w', 1e-3, 1.5)

    def test_required_fidelity(self):
        self.assertAlmostEqual(required_fidelity(0.1, 0.2), 0.72)
        self.assertEqual(required_fidelity(0.0, 0.0), 1.0)


class UnboundedMeasureTests(SimpleTestCase):
    def test_bounded_width_families(self):
        for family in ('ghz', 'cluster-1d', 'w'):
            verdict = check_unbounded_measure(family, 'schmidt-rank-width', 0.3)
            self.assertTrue(verdict.ruled_out, family)
        self.assertEqual(check_unbounded_measure('ghz').family_value, 2.0)

    def test_growing_width_families(self):
        self.assertFalse(check_unbounded_measure('cluster-2d').ruled_out)
        self.assertFalse(check_unbounded_measure('stripe').ruled_out)

    def test_unknown_scaling(self):
        verdict = check_unbounded_measure('deformed-cluster')
        self.assertFalse(verdict.ruled_out)
        self.assertIn('insufficient data', verdict.note)

    def test_requires_divergent_measure(self):
        with self.assertRaises(HypothesisError):
            check_unbounded_measure('ghz', 'geometric')
        with self.assertRaises(InvalidArgument):
            check_unbounded_measure('ghz', delta=1.0)


class EfficiencyTests(SimpleTestCase):
    def test_polylog_stripe(self):
        self.assertTrue(check_efficiency('stripe').ruled_out)

    def test_cluster_against_itself(self):
        self.assertFalse(check_efficiency('cluster-2d').ruled_out)

    def test_constant_family(self):
        self.assertTrue(check_efficiency('product').ruled_out)
        self.assertTrue(check_efficiency('ghz').ruled_out)

    def test_growth_override(self):
        verdict = check_efficiency('stripe', growth='polynomial')
        self.assertFalse(verdict.ruled_out)
        self.assertEqual(verdict.required_value, float(scaling_rank(ScalingClass.LOGARITHMIC)))

    def test_insufficient_data(self):
        self.assertIn('insufficient data', check_efficiency('deformed-cluster').note)
        self.assertIn('insufficient data', check_efficiency('w', growth='constant').note)


class WThresholdTests(SimpleTestCase):
    def test_root(self):
        eta = w_threshold_eta()
        self.assertAlmostEqual(eta, 1.01709e-3, delta=1e-7)
        self.assertAlmostEqual(star_lower_value(eta), W_SUP, delta=1e-9)
        self.assertGreater(star_lower_value(eta / 2), W_SUP)
        self.assertLess(star_lower_value(2 * eta), W_SUP)


class StabilityFrontierTests(SimpleTestCase):
    def test_exact_base(self):
        curve = stability_frontier(0.0, 0.0, 0.01)
        for point in curve:
            self.assertGreaterEqual(point.delta_prime * point.eps_prime, 0.01)
            self.assertTrue(point.admissible)
        (point,) = stability_frontier(0.0, 0.0, 0.01, eps_grid=[0.1])
        self.assertAlmostEqual(point.delta_prime, 0.1, delta=1e-15)

    def test_no_perturbation(self):
        for point in stability_frontier(0.05, 0.05, 0.0):
            self.assertGreaterEqual(point.delta_prime * point.eps_prime, 0.1)

    def test_combined_budget(self):
        curve = stability_frontier(0.05, 0.05, 0.1, points=30)
        self.assertEqual(len(curve), 30)
        for point in curve:
            self.assertGreaterEqual(point.delta_prime * point.eps_prime, 0.2)
            self.assertLessEqual(point.delta_prime, 1.0)
        deltas = [point.delta_prime for point in curve]
        self.assertTrue(all(a >= b for a, b in zip(deltas, deltas[1:])))

    def test_small_eps_prime_is_inadmissible(self):
        (point,) = stability_frontier(0.05, 0.05, 0.1, eps_grid=[0.1])
        self.assertFalse(point.admissible)
        self.assertEqual(point.delta_prime, 1.0)

    def test_purified_distance(self):
        for point in stability_frontier(0.0, 0.0, 0.1, 'purified'):
            self.assertGreaterEqual(point.delta_prime * (point.eps_prime * point.eps_prime), 0.1 * 0.1)

    def test_hypotheses(self):
        with self.assertRaises(HypothesisError) as ctx:
            stability_frontier(0.6, 0.5, 0.0)
        self.assertEqual(ctx.exception.inequality, 'delta + eps < 1')
        with self.assertRaises(HypothesisError) as ctx:
            stability_frontier(0.2, 0.2, 0.7)
        self.assertEqual(ctx.exception.inequality, 'mu <= 1 - delta - eps')


class CriteriaCommandTests(SimpleTestCase):
    def run_command(self, *args):
        out = io.StringIO()
        call_command('criteria', *args, stdout=out)
        return out.getvalue()

    def test_w_verdict_json(self):
        data = json.loads(self.run_command('--family', 'w', '--eps', '1e-3', '--delta', '0',
                                           '--measure', 'geometric', '--json'))
        self.assertEqual(data['payload']['decision'], 'ruled_out')
        self.assertTrue(data['provenance'])
        self.assertAlmostEqual(data['payload']['required_fidelity'], 0.999)

    def test_frontier_csv(self):
        lines = self.run_command('frontier', '--eps', '0', '--delta', '0', '--mu', '0.01',
                                 '--points', '10', '--csv').splitlines()
        self.assertEqual(lines[0], 'eps_prime,delta_prime,admissible')
        self.assertEqual(len(lines), 11)

    def test_w_threshold(self):
        data = json.loads(self.run_command('w-threshold', '--json'))
        self.assertAlmostEqual(data['payload']['eta'], 1.01709e-3, delta=1e-7)
