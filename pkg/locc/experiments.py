"""
Experiments on measurement protocols: noisy cluster resources, the averaged
fidelity guarantee and stability of protocols under perturbed resources.
"""

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from core.exceptions import HypothesisError, InvalidArgument
from core.parallel import ordered_map
from core.rng import resolve_seed, spawn_generators
from criteria.frontier import stability_frontier
from epsilon.bounds import get_eta_map
from qstate.operations import basis_state, random_state, z_pattern_ensemble, z_pattern_state
from qstate.states import Ensemble, PureState, as_ensemble, fidelity, make_graph_state, trace_distance
from .protocol import run_protocol

logger = logging.getLogger(__name__)

DISTANCE_SLACK = 1e-9
UNIFORM_TOL = 1e-12
PERTURBATION_KINDS = ('pure', 'mixture', 'depolarize')


def _as_target(target, protocol):
    if isinstance(target, np.ndarray):
        target = PureState.from_vector(target)
    if not isinstance(target, PureState):
        raise InvalidArgument('The target must be a pure state')
    if target.n != len(protocol.outputs):
        raise InvalidArgument(f'Target has {target.n} qubits, protocol outputs {len(protocol.outputs)}')
    return target


@dataclass
class FidelityReport:
    fidelity: float
    required: float
    eps: float
    delta: float
    passed: bool


def averaged_fidelity_check(tree, target, eps, delta):
    """F(sum_i p_i rho_i, target) >= (1 - eps)(1 - delta)."""
    value = fidelity(tree.output_state(), target)
    required = (1.0 - eps) * (1.0 - delta)
    return FidelityReport(value, required, eps, delta, value >= required - DISTANCE_SLACK)


def _same_probabilities(probabilities, reference):
    return set(probabilities) == set(reference) and all(
        abs(p - reference[record]) <= UNIFORM_TOL for record, p in probabilities.items()
    )


@dataclass
class NoisyClusterReport:
    p: float
    branches: int
    measured_qubits: int
    max_distance: float
    distances: list
    probabilities_match: bool
    uniform: bool
    fidelity: FidelityReport
    passed: bool
    details: dict = field(default_factory=dict)


def noisy_cluster_experiment(graph, flip_qubit, p, protocol, target, weights=None, threads=1):
    """
    Run a cluster protocol on (1 - p)|C><C| + p|C~><C~|, C~ = Z on flip_qubit.

    With `weights` (Z pattern -> weight) the noise term is the weighted
    mixture of Z-pattern states instead. Every merged branch must stay within
    trace distance p of the target, and the clean and noisy components must
    give the same branch probabilities.
    """
    p = float(p)
    if not 0.0 <= p < 1.0:
        raise InvalidArgument(f'Noise probability must lie in [0, 1), got {p}')
    target = _as_target(target, protocol)
    clean = make_graph_state(graph)
    if weights is None:
        if not 0 <= flip_qubit < graph.num_vertices:
            raise InvalidArgument(f'Flip qubit {flip_qubit} is not a vertex')
        pattern = [1 if v == flip_qubit else 0 for v in range(graph.num_vertices)]
        noisy_terms = [z_pattern_state(graph, pattern)]
        resource = Ensemble.normalized(((1.0 - p, clean), (p, noisy_terms[0]))) if p > 0 else Ensemble.pure(clean)
    else:
        resource = z_pattern_ensemble(graph, p, weights)
        noisy_terms = [psi for _, psi in resource.terms[1:]]

    tree = run_protocol(resource, protocol, threads=threads)
    distances = [trace_distance(leaf.state, target) for leaf in tree.leaves]
    max_distance = max(distances)

    reference = run_protocol(clean, protocol).probabilities()
    probabilities_match = all(_same_probabilities(run_protocol(psi, protocol).probabilities(), reference)
                              for psi in noisy_terms)
    m = len(protocol.steps)
    uniform = all(abs(leaf.probability - 2.0 ** -m) <= UNIFORM_TOL for leaf in tree.leaves)
    check = averaged_fidelity_check(tree, target, p, 0.0)
    passed = max_distance <= p + DISTANCE_SLACK and probabilities_match and check.passed
    logger.info(f'Noisy cluster p={p!r}: {len(tree.leaves)} branches, max distance {max_distance!r}')
    return NoisyClusterReport(
        p=p,
        branches=len(tree.leaves),
        measured_qubits=m,
        max_distance=max_distance,
        distances=distances,
        probabilities_match=probabilities_match,
        uniform=uniform,
        fidelity=check,
        passed=passed,
        details={'noise_terms': len(noisy_terms)},
    )


@dataclass
class StabilityReport:
    mu: float
    eps: float
    delta: float
    output_distance: float
    distance_bound: float
    measured_fidelity: float
    fidelity_bound: float
    frontier: list
    passed: bool


def stability_experiment(base, perturbed, protocol, target, eps, delta, distance_kind='trace',
                         frontier_points=20, mu=None):
    """
    Replay a protocol on a perturbed resource.

    The output must stay within mu + eps + delta of the target, and its
    fidelity above 1 - eta(mu + eps + delta).
    """
    target = _as_target(target, protocol)
    eps, delta = float(eps), float(delta)
    mu = trace_distance(base, perturbed) if mu is None else float(mu)
    if not eps + delta < 1.0:
        raise HypothesisError('delta + eps < 1')
    if not mu <= 1.0 - delta - eps:
        raise HypothesisError('mu <= 1 - delta - eps')

    tree = run_protocol(perturbed, protocol)
    output = tree.output_state()
    distance = trace_distance(output, target)
    measured = fidelity(output, target)
    budget = eps + delta + mu
    fidelity_bound = 1.0 - get_eta_map(distance_kind).eta(min(1.0, budget))
    frontier = stability_frontier(eps, delta, mu, distance_kind, points=frontier_points)
    passed = distance <= budget + DISTANCE_SLACK and measured >= fidelity_bound - DISTANCE_SLACK
    if not passed:
        logger.warning(f'Stability violated at mu={mu!r}: distance {distance!r}, fidelity {measured!r}')
    return StabilityReport(mu, eps, delta, distance, budget, measured, fidelity_bound, frontier, passed)


def random_perturbation(state, mu, rng, kind='mixture'):
    """
    A state at trace distance mu from `state` (or closer when mu cannot be
    reached). Returns (perturbed, measured distance).

    pure: rotate toward a random orthogonal direction; mixture: mix in a
    random pure state; depolarize: mix in the maximally mixed state.
    """
    if kind not in PERTURBATION_KINDS:
        raise InvalidArgument(f'Unknown perturbation {kind!r}; choose from {PERTURBATION_KINDS}')
    if not 0.0 <= mu <= 1.0:
        raise InvalidArgument(f'mu must lie in [0, 1], got {mu}')
    ensemble = as_ensemble(state)
    n = ensemble.n

    if kind == 'pure':
        if len(ensemble.terms) != 1:
            raise InvalidArgument('A pure perturbation needs a pure state')
        psi = ensemble.terms[0][1]
        direction = random_state(n, rng).amplitudes
        direction = direction - np.vdot(psi.amplitudes, direction) * psi.amplitudes
        angle = math.asin(mu)
        perturbed = PureState.from_vector(
            math.cos(angle) * psi.amplitudes + math.sin(angle) * direction / np.linalg.norm(direction)
        )
    else:
        if kind == 'mixture':
            noise = as_ensemble(random_state(n, rng))
        else:
            noise = Ensemble.normalized((1.0, basis_state([int(b) for b in format(i, f'0{n}b')]))
                                        for i in range(2 ** n))
        full = trace_distance(ensemble, noise)
        q = 1.0 if full <= mu else mu / full
        perturbed = Ensemble.normalized(
            [((1.0 - q) * p, psi) for p, psi in ensemble.terms] + [(q * p, psi) for p, psi in noise.terms]
        )
    return perturbed, trace_distance(ensemble, perturbed)


@dataclass
class StabilityTrials:
    mu: float
    kind: str
    trials: int
    violations: int
    worst_margin: float
    frontier_ok: bool
    seed: int
    reports: list = field(default_factory=list)

    @property
    def passed(self):
        return self.violations == 0 and self.frontier_ok


def stability_trials(base, protocol, target, mu, trials=50, seed=None, kind='mixture', eps=0.0, delta=0.0,
                     distance_kind='trace', threads=1):
    """Many random perturbations at strength mu, each replaying the same protocol."""
    if trials < 1:
        raise InvalidArgument(f'Need at least one trial, got {trials}')
    seed = resolve_seed(seed)

    def trial(rng):
        perturbed, measured = random_perturbation(base, mu, rng, kind)
        return stability_experiment(base, perturbed, protocol, target, eps, delta, distance_kind, mu=measured)

    reports = ordered_map(trial, spawn_generators(seed, trials), threads)
    violations = sum(not r.passed for r in reports)
    worst = min(r.distance_bound - r.output_distance for r in reports)
    eta_map = get_eta_map(distance_kind)
    frontier_ok = all(
        point.delta_prime * eta_map.eta(point.eps_prime) >= eta_map.eta(min(1.0, r.distance_bound))
        for r in reports for point in r.frontier if point.admissible
    )
    logger.info(f'Stability at mu={mu!r} ({kind}): {violations}/{trials} violations')
    return StabilityTrials(mu, kind, trials, violations, worst, frontier_ok, seed, reports)


def contractivity_check(input_a, input_b, protocol):
    """Trace distance of merged outputs never exceeds that of the inputs."""
    before = trace_distance(input_a, input_b)
    after = trace_distance(run_protocol(input_a, protocol).output_state(),
                           run_protocol(input_b, protocol).output_state())
    return {'input_distance': before, 'output_distance': after, 'passed': after <= before + DISTANCE_SLACK}
