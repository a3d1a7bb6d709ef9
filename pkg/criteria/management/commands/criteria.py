"""
Django management command to evaluate the universality criteria and the
stability frontier.
"""

from core.commands import ReportCommand
from core.exceptions import InvalidArgument
from core.reports import Report
from criteria.frontier import DEFAULT_POINTS, stability_frontier
from criteria.registry import FAMILY_DESCRIPTORS, MEASURE_REGISTRY, ScalingClass, scaling_consistency
from criteria.serializers import FrontierPointSerializer, VerdictSerializer
from criteria.verdicts import (
    check_approx_det,
    check_approx_stoch,
    check_efficiency,
    check_unbounded_measure,
    required_fidelity,
    w_threshold_eta,
)
from epsilon.bounds import ETA_MAPS

ACTIONS = ['verdict', 'unbounded', 'efficiency', 'w-threshold', 'frontier', 'consistency']


class Command(ReportCommand):
    help = 'Decide whether a resource family violates a necessary condition for universality'
    subcommand = 'criteria'

    def add_command_arguments(self, parser):
        parser.add_argument(
            'action',
            nargs='?',
            choices=ACTIONS,
            default='verdict',
            help='Criterion to evaluate (default: verdict)',
        )
        parser.add_argument('--family', choices=sorted(FAMILY_DESCRIPTORS), help='Resource family')
        parser.add_argument('--measure', choices=sorted(MEASURE_REGISTRY), help='Entanglement measure')
        parser.add_argument('--eps', type=float, help='Target approximation eps')
        parser.add_argument('--eta', type=float, help='Fidelity defect eta (instead of --eps)')
        parser.add_argument('--delta', type=float, default=0.0, help='Allowed failure probability delta')
        parser.add_argument('--mu', type=float, help='Perturbation strength mu (frontier)')
        parser.add_argument('--distance', choices=sorted(ETA_MAPS), default='trace',
                            help='Distance used to turn eps into eta')
        parser.add_argument('--points', type=int, default=DEFAULT_POINTS, help='Frontier grid size')
        parser.add_argument(
            '--growth',
            choices=[c for c in ScalingClass.values if c != ScalingClass.UNKNOWN],
            help='Override the declared f_eps growth class (efficiency)',
        )
        parser.add_argument('--size-cap', type=int, default=6, help='Largest member size (consistency)')

    def require_family(self, options):
        if not options.get('family'):
            raise InvalidArgument(f"{options['action']} needs --family")
        return options['family']

    def build_report(self, options):
        action = options['action']
        if action == 'frontier':
            return self.frontier_report(options)
        if action == 'w-threshold':
            eta = w_threshold_eta()
            report = Report('criteria', {}, {'eta': eta}, action=action)
            report.add_provenance('W threshold eta', eta, 'criteria.verdicts.w_threshold_eta',
                                  '1 - 4 eta^(1/3) + 3.4 eta^(2/3) = 1 - 1/e')
            return report

        family = self.require_family(options)
        if action == 'consistency':
            measure = options.get('measure') or 'schmidt-rank-width'
            result = scaling_consistency(family, measure, options['size_cap'])
            return Report('criteria', {}, result, action=action)

        if action == 'unbounded':
            verdict = check_unbounded_measure(family, options.get('measure') or 'schmidt-rank-width',
                                              options['delta'])
        elif action == 'efficiency':
            verdict = check_efficiency(family, options.get('measure') or 'schmidt-rank-width', options.get('growth'))
        else:
            if options.get('eps') is None and options.get('eta') is None:
                raise InvalidArgument('verdict needs --eps or --eta')
            measure = options.get('measure') or 'geometric'
            if options['delta'] == 0.0:
                verdict = check_approx_det(family, options.get('eps'), measure, options['distance'],
                                           eta=options.get('eta'))
            else:
                verdict = check_approx_stoch(family, options.get('eps'), options['delta'], measure,
                                             options['distance'], eta=options.get('eta'))

        payload = VerdictSerializer(verdict).data
        if action == 'verdict' and options.get('eps') is not None:
            payload['required_fidelity'] = required_fidelity(options['eps'], options['delta'])
        report = Report('criteria', {}, payload, action=action)
        for entry in verdict.trace:
            report.add_provenance(entry['quantity'], entry['value'], entry['provenance'])
        report.columns = ['family', 'measure', 'family_value', 'required_value', 'decision']
        report.rows = [payload]
        return report

    def frontier_report(self, options):
        if options.get('mu') is None or options.get('eps') is None:
            raise InvalidArgument('frontier needs --eps and --mu')
        curve = stability_frontier(options['eps'], options['delta'], options['mu'], options['distance'],
                                   points=options['points'])
        rows = FrontierPointSerializer(curve, many=True).data
        report = Report('criteria', {}, {'points': rows}, action='frontier')
        report.columns = ['eps_prime', 'delta_prime', 'admissible']
        report.rows = rows
        report.add_provenance('frontier', len(rows), 'criteria.frontier.stability_frontier',
                              "delta' eta(eps') >= eta(eps + delta + mu)")
        return report
