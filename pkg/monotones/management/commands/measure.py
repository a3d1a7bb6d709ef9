"""
Django management command to evaluate entanglement monotones.
"""

from core.commands import ReportCommand
from core.rng import make_rng
from core.exceptions import InvalidArgument
from core.reports import Report
from monotones.axioms import (
    check_extendability,
    check_lu_invariance,
    check_strong_monotonicity,
    check_vanishing_on_product,
    check_weak_non_increase,
    check_width_dominance,
)
from monotones.families import DEFAULT_DEFORMATION, FAMILIES, MEASURES, family_supremum, get_family
from monotones.geometric import geometric_measure, product_overlap
from monotones.serializers import AxiomReportSerializer, MonotoneResultSerializer
from monotones.widths import entropic_entanglement_width, schmidt_rank, schmidt_rank_width
from qstate.io import load_state
from qstate.operations import random_state
from qstate.states import Bipartition

ACTIONS = [
    'geometric', 'product-overlap', 'schmidt-rank', 'schmidt-rank-width',
    'entropic-width', 'family-supremum', 'axioms',
]


def parse_cut(text, n):
    try:
        side = {int(q) for q in text.split(',') if q.strip()}
    except ValueError:
        raise InvalidArgument(f'Cut must be a comma-separated qubit list, got {text!r}')
    return Bipartition.of(side, n)


class Command(ReportCommand):
    help = 'Evaluate entanglement monotones of a state, a family member or a whole family'
    subcommand = 'measure'
    uses_seed = True

    def add_command_arguments(self, parser):
        parser.add_argument('action', choices=ACTIONS, help='Quantity to compute')
        parser.add_argument(
            '--family',
            choices=sorted(FAMILIES),
            help='Named state family',
        )
        parser.add_argument(
            '--n',
            type=int,
            help='Family member size (qubits, or lattice side for 2D families)',
        )
        parser.add_argument(
            '--state',
            type=str,
            help='Path to a state file',
        )
        parser.add_argument(
            '--lambda',
            dest='lam',
            type=float,
            default=DEFAULT_DEFORMATION,
            help='Deformation parameter for deformed-cluster',
        )
        parser.add_argument('--cut', type=str, help='Qubits on side A, e.g. 0,1 (schmidt-rank)')
        parser.add_argument('--measure', choices=sorted(MEASURES), default='geometric',
                            help='Measure for family-supremum')
        parser.add_argument('--size-cap', type=int, help='Largest member size for family-supremum')
        parser.add_argument('--restarts', type=int, help='Random starts of the overlap optimizer')
        parser.add_argument('--tol', type=float, help='Per-sweep convergence tolerance')
        parser.add_argument('--rank-tol', type=float, help='Relative Schmidt-rank tolerance')
        parser.add_argument('--samples', type=int, default=10, help='Random samples per axiom check')
        parser.add_argument('--witness', action='store_true', help='Include witness states and trees')

    def load_target(self, options):
        if options.get('state'):
            return load_state(options['state'])
        if options.get('family') and options.get('n') is not None:
            return get_family(options['family']).build(options['n'], lam=options['lam'])
        raise InvalidArgument('Please specify --state, or --family with --n')

    def build_report(self, options):
        action = options['action']
        seed = options['seed']
        context = {'include_witness': options.get('witness', False)}

        if action == 'axioms':
            return self.axioms_report(options)
        if action == 'family-supremum':
            if not options.get('family') or options.get('size_cap') is None:
                raise InvalidArgument('family-supremum needs --family and --size-cap')
            result = family_supremum(
                options['family'], options['measure'], options['size_cap'], lam=options['lam'],
                restarts=options.get('restarts'), tol=options.get('tol'), seed=seed,
                rank_tol=options.get('rank_tol'), threads=options['threads'],
            )
            report = Report('measure', {}, MonotoneResultSerializer(result, context=context).data, action=action)
            report.columns = ['size', 'qubits', 'value', 'kind']
            report.rows = result.details['per_size']
            report.add_provenance('family supremum', result.value, 'monotones.families.family_supremum',
                                  'E(family) = sup over members, finite-size lower bound')
            return report

        psi = self.load_target(options)
        if action == 'schmidt-rank':
            if not options.get('cut'):
                raise InvalidArgument('schmidt-rank needs --cut')
            rank = schmidt_rank(psi, parse_cut(options['cut'], psi.n), options.get('rank_tol'))
            report = Report('measure', {}, {'value': rank, 'qubits': psi.n, 'cut': options['cut']}, action=action)
            report.add_provenance('Schmidt rank', rank, 'monotones.widths.schmidt_rank')
            return report

        if action == 'geometric':
            result = geometric_measure(psi, options.get('restarts'), options.get('tol'), seed,
                                       threads=options['threads'])
            anchor = 'E_G = 1 - max product overlap'
        elif action == 'product-overlap':
            result = product_overlap(psi, options.get('restarts'), options.get('tol'), seed,
                                     threads=options['threads'])
            anchor = 'max squared overlap with a product state'
        elif action == 'schmidt-rank-width':
            result = schmidt_rank_width(psi, options.get('rank_tol'))
            anchor = 'min over subcubic trees of max edge-cut Schmidt rank'
        else:
            result = entropic_entanglement_width(psi)
            anchor = 'min over subcubic trees of max edge-cut entropy'

        payload = MonotoneResultSerializer(result, context=context).data
        payload['qubits'] = psi.n
        report = Report('measure', {}, payload, action=action)
        report.add_provenance(action, result.value, f'monotones {result.method}', anchor)
        return report

    def axioms_report(self, options):
        samples, seed = options['samples'], options['seed']
        rng = make_rng(seed)
        states = [random_state(3, rng) for _ in range(max(1, samples // 2))]
        reports = [
            check_vanishing_on_product(samples, seed=seed),
            check_lu_invariance(samples, sizes=(3, 4), seed=seed, restarts=options.get('restarts')),
            check_strong_monotonicity(samples, seed=seed, restarts=options.get('restarts')),
            check_weak_non_increase(samples, seed=seed, restarts=options.get('restarts')),
            check_extendability(states, seed=seed, restarts=options.get('restarts')),
            check_width_dominance(states),
        ]
        rows = AxiomReportSerializer(reports, many=True).data
        report = Report('measure', {}, {'checks': rows, 'passed': all(r.passed for r in reports)}, action='axioms')
        report.columns = ['axiom', 'checked', 'violations', 'max_excess', 'tolerance', 'passed']
        report.rows = rows
        return report
