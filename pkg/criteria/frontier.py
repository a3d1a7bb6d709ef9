"""
Stability frontier: which (eps', delta') a perturbed resource still meets.
"""

import logging
from dataclasses import dataclass

import numpy as np

from core.exceptions import HypothesisError, InvalidArgument
from epsilon.bounds import get_eta_map

logger = logging.getLogger(__name__)

DEFAULT_POINTS = 50


@dataclass(frozen=True)
class FrontierPoint:
    eps_prime: float
    delta_prime: float
    admissible: bool


def minimal_delta_prime(eta_map, total, eps_prime):
    """Smallest delta' with delta' * eta(eps') >= eta(total), clamped to 1."""
    needed = eta_map.eta(total)
    available = eta_map.eta(eps_prime)
    if available <= 0.0:
        return 1.0, False
    delta_prime = needed / available
    # Division may round below the exact quotient.
    while delta_prime * available < needed:
        delta_prime = float(np.nextafter(delta_prime, np.inf))
    return min(1.0, delta_prime), delta_prime <= 1.0


def stability_frontier(eps, delta, mu, distance_kind='trace', points=DEFAULT_POINTS, eps_grid=None):
    """
    For each eps' on a grid, the minimal admissible delta' with
    delta' eta(eps') >= eta(eps + delta + mu).

    Points where even delta' = 1 is not enough are flagged inadmissible.
    """
    eps, delta, mu = float(eps), float(delta), float(mu)
    if min(eps, delta, mu) < 0:
        raise InvalidArgument('eps, delta and mu must be non-negative')
    if not delta + eps < 1.0:
        raise HypothesisError('delta + eps < 1')
    if not mu <= 1.0 - delta - eps:
        raise HypothesisError('mu <= 1 - delta - eps')
    eta_map = get_eta_map(distance_kind)
    total = eps + delta + mu

    if eps_grid is None:
        if points < 2:
            raise InvalidArgument('A frontier needs at least two points')
        eps_grid = np.geomspace(max(total, 1e-6), 1.0, points)
    curve = []
    for eps_prime in eps_grid:
        eps_prime = float(eps_prime)
        delta_prime, admissible = minimal_delta_prime(eta_map, total, eps_prime)
        curve.append(FrontierPoint(eps_prime, delta_prime, admissible))
    logger.debug(f'Frontier for eps+delta+mu={total!r} ({distance_kind}): {len(curve)} points')
    return curve
