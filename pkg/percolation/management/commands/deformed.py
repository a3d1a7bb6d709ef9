"""
Django management command for deformed cluster states: effective site
probability, threshold in lambda and sampled heralded-hole lattices.
"""

from core.commands import ReportCommand
from core.exceptions import InvalidArgument
from core.reports import Report
from core.rng import spawn_generators
from percolation.deformation import deformed_p_site, deformed_threshold, povm_hole_sampler
from percolation.estimates import SQUARE_SITE_THRESHOLD
from percolation.lattice import largest_cluster_fraction, spans


class Command(ReportCommand):
    help = 'Map a deformed cluster onto site percolation and sample its heralded holes'
    subcommand = 'deformed'
    uses_seed = True

    def add_command_arguments(self, parser):
        parser.add_argument('--lambda', dest='lam', type=float, required=True, help='Deformation parameter')
        parser.add_argument('--L', dest='side', type=int, default=64, help='Lattice side')
        parser.add_argument('--samples', type=int, default=100, help='Sampled lattices')
        parser.add_argument('--p-c', type=float, default=SQUARE_SITE_THRESHOLD,
                            help='Site threshold used for lambda_c')

    def build_report(self, options):
        lam, side, samples = options['lam'], options['side'], options['samples']
        if samples < 1:
            raise InvalidArgument('--samples must be at least 1')
        p_site = deformed_p_site(lam)
        lambda_c = deformed_threshold(options['p_c'])

        lattices = [povm_hole_sampler(lam, side, rng) for rng in spawn_generators(options['seed'], samples)]
        payload = {
            'lambda': lam,
            'p_site': p_site,
            'lambda_c': lambda_c,
            'supercritical': lam > lambda_c,
            'side': side,
            'samples': samples,
            'occupied_fraction': sum(lattice.occupied_fraction for lattice in lattices) / samples,
            'spanning_fraction': sum(spans(lattice) for lattice in lattices) / samples,
            'largest_cluster_fraction': sum(largest_cluster_fraction(lattice) for lattice in lattices) / samples,
        }
        report = Report('deformed', {}, payload, action='map')
        report.add_provenance('p_site', p_site, 'percolation.deformation.deformed_p_site',
                              '2 lambda^2 / (1 + lambda^2)')
        report.add_provenance('lambda_c', lambda_c, 'percolation.deformation.deformed_threshold',
                              'sqrt(p_c / (2 - p_c)); sufficient, not necessary')
        return report
