"""
Parameter sweeps producing one row per grid point, for external plotting.

Rows come back ordered by grid index whatever the thread count.
"""

import itertools
import logging

import numpy as np

from criteria.frontier import DEFAULT_POINTS, stability_frontier
from epsilon.bounds import eps_geo_star_lower
from percolation.estimates import spanning_probability
from .conf import get_setting
from .exceptions import CapacityError, InvalidArgument
from .parallel import ordered_map

logger = logging.getLogger(__name__)

SWEEP_COLUMNS = {
    'percolation': ['side', 'p_site', 'trials', 'spanning_probability', 'std_error'],
    'star': ['eta', 'value', 'unclamped', 'validity_ok', 'clamped'],
    'frontier': ['mu', 'eps_prime', 'delta_prime', 'admissible', 'budget'],
}


def parameter_values(start, stop, points, scale='linear'):
    """Evenly spaced values, on a linear or logarithmic scale."""
    if points < 1:
        raise InvalidArgument(f'A sweep needs at least one point, got {points}')
    if scale == 'log':
        if start <= 0 or stop <= 0:
            raise InvalidArgument('A logarithmic sweep needs positive end points')
        return [float(v) for v in np.geomspace(start, stop, points)]
    if scale != 'linear':
        raise InvalidArgument(f"Unknown scale {scale!r}; use 'linear' or 'log'")
    return [float(v) for v in np.linspace(start, stop, points)]


def check_grid_size(*axes):
    """Refuse grids larger than CLI_SWEEP_MAX_POINTS."""
    size = 1
    for axis in axes:
        size *= len(axis)
    limit = get_setting('CLI_SWEEP_MAX_POINTS')
    if size > limit:
        raise CapacityError('sweep grid points', size, limit)
    return size


def percolation_sweep(sides, p_values, trials, seed, threads=1):
    """Crossing probability over a (side, p) grid; every point reuses the same seed."""
    check_grid_size(sides, p_values)
    rows = []
    for side, p_site in itertools.product(sides, p_values):
        estimate = spanning_probability(side, p_site, trials, seed, threads)
        rows.append({
            'side': estimate.side,
            'p_site': estimate.p_site,
            'trials': estimate.trials,
            'spanning_probability': estimate.spanning_probability,
            'std_error': estimate.std_error,
        })
    logger.info(f'Percolation sweep: {len(rows)} points')
    return rows


def star_sweep(eta_values, threads=1):
    check_grid_size(eta_values)

    def row(eta):
        bound = eps_geo_star_lower(eta)
        return {
            'eta': eta,
            'value': bound.value,
            'unclamped': bound.details['unclamped'],
            'validity_ok': bound.validity_ok,
            'clamped': bound.clamped,
        }

    return ordered_map(row, eta_values, threads)


def frontier_sweep(eps, delta, mu_values, distance_kind='trace', points=DEFAULT_POINTS):
    """Stability frontier for every mu; one row per (mu, eps') pair."""
    check_grid_size(mu_values, range(points))
    rows = []
    for mu in mu_values:
        for point in stability_frontier(eps, delta, mu, distance_kind, points=points):
            rows.append({
                'mu': mu,
                'eps_prime': point.eps_prime,
                'delta_prime': point.delta_prime,
                'admissible': point.admissible,
                'budget': eps + delta + mu,
            })
    return rows
