"""
Django management command for parameter sweeps (CSV by default).
"""

from core.commands import ReportCommand
from core.reports import Report
from core.sweeps import SWEEP_COLUMNS, frontier_sweep, parameter_values, percolation_sweep, star_sweep
from epsilon.bounds import ETA_MAPS
from percolation.estimates import SQUARE_SITE_THRESHOLD

DEFAULT_RANGES = {
    'percolation': (SQUARE_SITE_THRESHOLD - 0.1, SQUARE_SITE_THRESHOLD + 0.1, 'linear'),
    'star': (1e-6, 0.44, 'log'),
    'frontier': (0.0, 0.1, 'linear'),
}


class Command(ReportCommand):
    help = 'Sweep one or two parameters and emit one row per grid point'
    subcommand = 'sweep'
    uses_seed = True
    default_format = 'csv'

    def add_command_arguments(self, parser):
        parser.add_argument('kind', choices=sorted(SWEEP_COLUMNS), help='Quantity to sweep')
        parser.add_argument('--start', type=float, help='First value of the swept parameter')
        parser.add_argument('--stop', type=float, help='Last value of the swept parameter')
        parser.add_argument('--points', type=int, default=21, help='Grid points along the swept parameter')
        parser.add_argument('--scale', choices=['linear', 'log'], help='Spacing of the grid')
        parser.add_argument('--L', dest='sides', type=int, nargs='+', default=[64],
                            help='Lattice sides (percolation; second grid axis)')
        parser.add_argument('--trials', type=int, default=500, help='Samples per point (percolation)')
        parser.add_argument('--eps', type=float, default=0.0, help='eps (frontier)')
        parser.add_argument('--delta', type=float, default=0.0, help='delta (frontier)')
        parser.add_argument('--distance', choices=sorted(ETA_MAPS), default='trace', help='Distance (frontier)')
        parser.add_argument('--frontier-points', type=int, default=20, help="eps' grid per mu (frontier)")

    def build_report(self, options):
        kind = options['kind']
        start, stop, scale = DEFAULT_RANGES[kind]
        values = parameter_values(
            start if options.get('start') is None else options['start'],
            stop if options.get('stop') is None else options['stop'],
            options['points'],
            options.get('scale') or scale,
        )
        if kind == 'percolation':
            rows = percolation_sweep(options['sides'], values, options['trials'], options['seed'],
                                     options['threads'])
        elif kind == 'star':
            rows = star_sweep(values, options['threads'])
        else:
            rows = frontier_sweep(options['eps'], options['delta'], values, options['distance'],
                                  options['frontier_points'])

        report = Report('sweep', {}, {'kind': kind, 'points': len(rows), 'rows': rows}, action=kind)
        report.columns = SWEEP_COLUMNS[kind]
        report.rows = rows
        return report
