"""
Django management command for site-percolation estimates on the square
lattice.
"""

import numpy as np

from core.commands import ReportCommand
from core.exceptions import InvalidArgument
from core.reports import Report
from percolation.estimates import (
    SQUARE_SITE_THRESHOLD,
    THRESHOLD_ITERATIONS,
    crossing_curve,
    estimate_threshold,
    spanning_probability,
)
from percolation.serializers import PercolationEstimateSerializer

ESTIMATE_COLUMNS = ['p_site', 'side', 'trials', 'spanning_probability', 'std_error']


class Command(ReportCommand):
    help = 'Estimate left-right crossing probabilities and the site-percolation threshold'
    subcommand = 'percolate'
    uses_seed = True

    def add_command_arguments(self, parser):
        parser.add_argument(
            'action',
            nargs='?',
            choices=['estimate', 'threshold', 'curve'],
            default='estimate',
            help='Crossing probability at one p (default), threshold bisection, or a crossing curve',
        )
        parser.add_argument('--L', dest='side', type=int, default=64, help='Lattice side')
        parser.add_argument('--p', dest='p_site', type=float, help='Site occupation probability')
        parser.add_argument('--trials', type=int, default=2000, help='Samples per probability')
        parser.add_argument('--iterations', type=int, default=THRESHOLD_ITERATIONS, help='Bisection steps')
        parser.add_argument('--p-min', type=float, default=0.5, help='Curve start')
        parser.add_argument('--p-max', type=float, default=0.7, help='Curve end')
        parser.add_argument('--points', type=int, default=11, help='Curve points')

    def build_report(self, options):
        action, side, trials = options['action'], options['side'], options['trials']
        seed, threads = options['seed'], options['threads']

        if action == 'threshold':
            p_c = estimate_threshold(side, trials, seed, options['iterations'], threads)
            report = Report('percolate', {}, {'p_c': p_c, 'side': side, 'trials': trials,
                                              'iterations': options['iterations']}, action=action)
            report.add_provenance('threshold estimate', p_c, 'percolation.estimates.estimate_threshold',
                                  f'finite-size estimate; infinite-lattice value {SQUARE_SITE_THRESHOLD}')
            return report

        if action == 'curve':
            if options['points'] < 2:
                raise InvalidArgument('--points must be at least 2')
            p_values = np.linspace(options['p_min'], options['p_max'], options['points'])
            rows = PercolationEstimateSerializer(crossing_curve(side, p_values, trials, seed, threads), many=True).data
            report = Report('percolate', {}, {'points': rows}, action=action)
            report.columns, report.rows = ESTIMATE_COLUMNS, rows
            return report

        if options.get('p_site') is None:
            raise InvalidArgument('Please specify --p')
        estimate = spanning_probability(side, options['p_site'], trials, seed, threads)
        payload = PercolationEstimateSerializer(estimate).data
        report = Report('percolate', {}, payload, action='estimate')
        report.columns, report.rows = ESTIMATE_COLUMNS, [payload]
        report.add_provenance('spanning probability', estimate.spanning_probability,
                              'percolation.estimates.spanning_probability', 'left-right crossing, 4-connectivity')
        return report
