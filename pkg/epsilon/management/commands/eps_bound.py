"""
Django management command for epsilon-geometric-measure bounds and the
randomized lemma checks.
"""

from core.commands import ReportCommand
from core.exceptions import InvalidArgument
from core.reports import Report
from epsilon.bounds import BOUNDS, ETA_MAPS, get_eta_map
from epsilon.lemmas import sample_lipschitz, sample_mass_concentration, sample_soundness
from epsilon.serializers import EpsilonBoundSerializer, SamplingReportSerializer

ANCHORS = {
    'variational': 'max over Delta of (1 - eta/Delta)(E_G - 3 sqrt(Delta))',
    'closed': '[1 - (3 sqrt(eta)/(2 E_G))^(2/3)][E_G - (18 E_G eta)^(1/3)]',
    'star': '1 - 4 eta^(1/3) + 3.4 eta^(2/3)',
}


class Command(ReportCommand):
    help = 'Evaluate lower bounds on the epsilon-geometric measure, or run the lemma checks'
    subcommand = 'eps-bound'
    uses_seed = True

    def add_command_arguments(self, parser):
        parser.add_argument(
            'action',
            nargs='?',
            choices=['bound', 'lemmas'],
            default='bound',
            help='Evaluate one bound (default) or sample the lemma inequalities',
        )
        parser.add_argument('--formula', choices=sorted(BOUNDS), default='closed', help='Bound to evaluate')
        parser.add_argument('--eg', type=float, help='Geometric measure of the target state')
        parser.add_argument('--eta', type=float, help='Fidelity defect eta')
        parser.add_argument('--eps', type=float, help='Distance eps (converted with --distance)')
        parser.add_argument('--distance', choices=sorted(ETA_MAPS), default='trace',
                            help='Distance used to turn --eps into eta')
        parser.add_argument('--trials', type=int, default=1000, help='Samples per lemma check')
        parser.add_argument('--max-n', type=int, default=4, help='Largest sampled qubit count')

    def resolve_eta(self, options):
        if options.get('eta') is not None and options.get('eps') is not None:
            raise InvalidArgument('Give either --eta or --eps, not both')
        if options.get('eta') is not None:
            return options['eta']
        if options.get('eps') is not None:
            return get_eta_map(options['distance']).eta(options['eps'])
        raise InvalidArgument('Please specify --eta or --eps')

    def build_report(self, options):
        if options['action'] == 'lemmas':
            return self.lemma_report(options)

        formula = options['formula']
        eta = self.resolve_eta(options)
        if formula != 'star' and options.get('eg') is None:
            raise InvalidArgument(f'--eg is required for the {formula} bound')
        bound = BOUNDS[formula](options.get('eg'), eta)
        report = Report('eps-bound', {}, EpsilonBoundSerializer(bound).data, action='bound')
        report.add_provenance(f'{formula} bound', bound.value, f'epsilon.bounds ({bound.formula})', ANCHORS[formula])
        report.add_provenance('eta', eta, f"epsilon.bounds.ETA_MAPS[{options['distance']!r}]")
        return report

    def lemma_report(self, options):
        trials, seed, max_n = options['trials'], options['seed'], options['max_n']
        if trials < 1:
            raise InvalidArgument('--trials must be at least 1')
        checks = [
            sample_mass_concentration(trials, max_n, seed=seed),
            sample_lipschitz(trials, max_n, seed=seed),
            sample_soundness(max(1, trials // 10), min(max_n, 3), seed=seed),
        ]
        rows = SamplingReportSerializer(checks, many=True).data
        report = Report('eps-bound', {}, {'checks': rows, 'passed': all(c.passed for c in checks)}, action='lemmas')
        report.columns = ['lemma', 'trials', 'violations', 'worst_margin', 'passed']
        report.rows = rows
        return report
