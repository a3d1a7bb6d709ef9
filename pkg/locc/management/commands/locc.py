"""
Django management command for measurement protocols: run a protocol file on
a state file, replay the noisy-cluster example and the stability experiment.
"""

import math

from core.commands import ReportCommand
from core.exceptions import InvalidArgument
from core.reports import Report
from core.rng import make_rng
from criteria.serializers import FrontierPointSerializer
from epsilon.bounds import ETA_MAPS
from locc.experiments import (
    PERTURBATION_KINDS,
    averaged_fidelity_check,
    noisy_cluster_experiment,
    stability_trials,
)
from locc.io import load_protocol
from locc.patterns import one_way_line, target_state
from locc.protocol import run_protocol
from locc.serializers import (
    BranchTreeSerializer,
    FidelityReportSerializer,
    NoisyClusterReportSerializer,
    StabilityTrialsSerializer,
)
from qstate.io import load_state
from qstate.states import Graph, PureState, make_graph_state

BRANCH_COLUMNS = ['record', 'probability', 'pure']


def cluster_wire(kind, n, rng):
    """Cluster graph, wire and random wire angles for the built-in experiments."""
    if kind == 'grid':
        graph, line = Graph.grid(2), [0, 1, 3]
    else:
        if n < 2:
            raise InvalidArgument('--n must be at least 2')
        graph, line = Graph.path(n), list(range(n))
    angles = rng.uniform(0.0, 2 * math.pi, len(line) - 1)
    protocol, unitary = one_way_line(graph, line, angles)
    return graph, protocol, PureState.from_vector(target_state(unitary)), angles


class Command(ReportCommand):
    help = 'Run measurement protocols with feedforward as exhaustive branch trees'
    subcommand = 'locc'
    uses_seed = True

    def add_command_arguments(self, parser):
        parser.add_argument(
            'action',
            choices=['run', 'noisy-cluster', 'stability'],
            help='Run a protocol file, the noisy-cluster example or the stability experiment',
        )
        parser.add_argument('--state', help='State file (run)')
        parser.add_argument('--protocol', help='Protocol file (run)')
        parser.add_argument('--target', help='Target state file for the averaged fidelity check (run)')
        parser.add_argument('--n', type=int, default=4, help='1D cluster size')
        parser.add_argument('--graph', choices=['path', 'grid'], default='path',
                            help='1D cluster of --n qubits or the 2x2 grid')
        parser.add_argument('--p', type=float, default=0.2, help='Noise probability (noisy-cluster)')
        parser.add_argument('--flip', type=int, default=1, help='Qubit carrying the Z flip (noisy-cluster)')
        parser.add_argument('--mu', type=float, help='Perturbation strength (stability)')
        parser.add_argument('--eps', type=float, default=0.0, help='Declared eps of the protocol')
        parser.add_argument('--delta', type=float, default=0.0, help='Declared delta of the protocol')
        parser.add_argument('--trials', type=int, default=50, help='Random perturbations (stability)')
        parser.add_argument('--kind', choices=PERTURBATION_KINDS, default='mixture', help='Perturbation kind')
        parser.add_argument('--distance', choices=sorted(ETA_MAPS), default='trace', help='Distance kind')

    def build_report(self, options):
        action = options['action']
        if action == 'run':
            return self.run_report(options)
        if action == 'noisy-cluster':
            return self.noisy_cluster_report(options)
        return self.stability_report(options)

    def run_report(self, options):
        if not options.get('state') or not options.get('protocol'):
            raise InvalidArgument('run needs --state and --protocol')
        state = load_state(options['state'])
        protocol = load_protocol(options['protocol'])
        tree = run_protocol(state, protocol, threads=options['threads'])

        payload = {'tree': BranchTreeSerializer(tree, context={'include_states': True}).data}
        if options.get('target'):
            check = averaged_fidelity_check(tree, load_state(options['target']), options['eps'], options['delta'])
            payload['fidelity'] = FidelityReportSerializer(check).data
        report = Report('locc', {}, payload, action='run')
        report.columns = BRANCH_COLUMNS
        report.rows = [{'record': leaf.record, 'probability': leaf.probability, 'pure': leaf.is_pure}
                       for leaf in tree.leaves]
        report.add_provenance('total_probability', tree.total_probability, 'locc.protocol.run_protocol',
                              'output branches {p_i, rho_i}')
        return report

    def noisy_cluster_report(self, options):
        graph, protocol, target, angles = cluster_wire(options['graph'], options['n'], make_rng(options['seed']))
        result = noisy_cluster_experiment(graph, options['flip'], options['p'], protocol, target,
                                          threads=options['threads'])
        payload = dict(NoisyClusterReportSerializer(result).data)
        payload['angles'] = list(angles)
        report = Report('locc', {}, payload, action='noisy-cluster')
        report.add_provenance('max_distance', result.max_distance, 'locc.experiments.noisy_cluster_experiment',
                              'eps >= p')
        report.add_provenance('fidelity', result.fidelity.fidelity, 'locc.experiments.averaged_fidelity_check',
                              'F >= (1 - eps)(1 - delta)')
        return report

    def stability_report(self, options):
        if options.get('mu') is None:
            raise InvalidArgument('stability needs --mu')
        graph, protocol, target, angles = cluster_wire(options['graph'], options['n'], make_rng(options['seed']))
        result = stability_trials(
            make_graph_state(graph), protocol, target, options['mu'],
            trials=options['trials'], seed=options['seed'], kind=options['kind'],
            eps=options['eps'], delta=options['delta'], distance_kind=options['distance'],
            threads=options['threads'],
        )
        payload = dict(StabilityTrialsSerializer(result).data)
        payload['angles'] = list(angles)
        payload['frontier'] = FrontierPointSerializer(result.reports[0].frontier, many=True).data
        report = Report('locc', {}, payload, action='stability')
        report.add_provenance('violations', result.violations, 'locc.experiments.stability_trials',
                              'D(output, target) <= mu + eps + delta')
        return report
