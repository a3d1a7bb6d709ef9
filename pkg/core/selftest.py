"""
Fast acceptance checks run by `manage.py selftest`.

Each check returns (passed, detail). A check that raises counts as failed.
"""

import logging
import math
from dataclasses import dataclass

from criteria.frontier import stability_frontier
from criteria.verdicts import check_approx_det, check_approx_stoch, check_unbounded_measure, w_threshold_eta
from epsilon.bounds import eps_geo_star_lower
from locc.experiments import noisy_cluster_experiment
from locc.patterns import one_way_line, target_state
from monotones.families import w_product_overlap
from monotones.geometric import product_overlap
from monotones.trees import enumerate_subcubic_trees, tree_count
from percolation.deformation import deformed_p_site, deformed_threshold
from percolation.estimates import spanning_probability
from qstate.states import Graph, PureState, make_w_state
from .rng import make_rng

logger = logging.getLogger(__name__)


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str


def check_w_overlap(seed):
    values = []
    for n in range(2, 7):
        value = product_overlap(make_w_state(n), seed=seed).value
        if abs(value - w_product_overlap(n)) > 1e-6:
            return False, f'n={n}: {value!r} vs {w_product_overlap(n)!r}'
        values.append(value)
    decreasing = all(a > b for a, b in zip(values, values[1:]))
    return decreasing and values[-1] > 1 / math.e, f'pi(W_6) = {values[-1]:.10f}'


def check_w_threshold(seed):
    eta = w_threshold_eta()
    return 9.5e-4 <= eta <= 1.1e-3, f'eta = {eta:.6e}'


def check_star_bound(seed):
    value = eps_geo_star_lower(1e-3).value
    flip = value > 1 - 1 / math.e > eps_geo_star_lower(1.1e-3).value
    return abs(value - 0.634) <= 1e-9 and flip, f'star(1e-3) = {value:.6f}'


def check_deformed_constants(seed):
    lam_c = deformed_threshold(0.5927)
    return abs(lam_c - 0.6490) <= 5e-4 and abs(deformed_p_site(0.6490) - 0.5927) <= 5e-4, f'lambda_c = {lam_c:.5f}'


def check_noisy_cluster(seed):
    graph = Graph.path(4)
    protocol, unitary = one_way_line(graph, range(4), make_rng(seed).uniform(0, 2 * math.pi, 3))
    report = noisy_cluster_experiment(graph, 1, 0.2, protocol, PureState.from_vector(target_state(unitary)))
    return report.passed and report.uniform, f'max distance {report.max_distance:.6f} <= 0.2'


def check_criteria(seed):
    ruled_out = [check_unbounded_measure(f).ruled_out for f in ('ghz', 'cluster-1d')]
    cluster = check_unbounded_measure('cluster-2d').ruled_out
    agrees = check_approx_stoch('w', 1e-3, 0.0).required_value == check_approx_det('w', 1e-3).required_value
    return all(ruled_out) and not cluster and agrees, 'GHZ, 1D cluster ruled out; 2D cluster kept'


def check_tree_counts(seed):
    counts = {n: sum(1 for _ in enumerate_subcubic_trees(n)) for n in range(3, 8)}
    return all(counts[n] == tree_count(n) for n in counts), f'{counts}'


def check_frontier(seed):
    curve = stability_frontier(0.05, 0.05, 0.1)
    return all(p.delta_prime * p.eps_prime >= 0.2 for p in curve), f'{len(curve)} points'


def check_percolation(seed):
    high = spanning_probability(32, 0.75, 100, seed).spanning_probability
    low = spanning_probability(32, 0.45, 100, seed).spanning_probability
    return high > 0.9 and low < 0.1, f'P(0.75) = {high:.2f}, P(0.45) = {low:.2f}'


FAST_CHECKS = [
    ('w-overlap', check_w_overlap),
    ('w-threshold', check_w_threshold),
    ('star-bound', check_star_bound),
    ('deformed-constants', check_deformed_constants),
    ('noisy-cluster', check_noisy_cluster),
    ('criteria', check_criteria),
    ('tree-counts', check_tree_counts),
    ('frontier', check_frontier),
    ('percolation', check_percolation),
]


def run_checks(seed, names=None):
    results = []
    for name, check in FAST_CHECKS:
        if names and name not in names:
            continue
        try:
            passed, detail = check(seed)
        except Exception as e:
            logger.exception(f'Self-test {name} raised')
            passed, detail = False, f'{type(e).__name__}: {e}'
        if not passed:
            logger.warning(f'Self-test {name} failed: {detail}')
        results.append(CheckResult(name, bool(passed), detail))
    return results
