"""
Monte Carlo estimates of the crossing probability and the site threshold.

Each trial draws from its own spawned stream, so estimates are identical for
a fixed seed whatever the thread count. Every p on a curve reuses the same
streams, which makes the estimated crossing curve non-decreasing in p.
"""

import logging
import math
from dataclasses import dataclass

from core.exceptions import InvalidArgument
from core.parallel import ordered_map
from core.rng import resolve_seed, spawn_generators
from .lattice import check_side, check_site_probability, sample_lattice, spans

logger = logging.getLogger(__name__)

THRESHOLD_ITERATIONS = 12
SQUARE_SITE_THRESHOLD = 0.5927


@dataclass(frozen=True)
class PercolationEstimate:
    p_site: float
    side: int
    trials: int
    spanning_probability: float
    std_error: float
    seed: int


def _crossings(side, p_site, trials, seed, threads):
    streams = spawn_generators(seed, trials)
    return ordered_map(lambda rng: spans(sample_lattice(side, p_site, rng)), streams, threads)


def spanning_probability(side, p_site, trials, seed=None, threads=1):
    """Fraction of sampled lattices with a left-right crossing."""
    side, p_site = check_side(side), check_site_probability(p_site)
    if trials < 1:
        raise InvalidArgument(f'Need at least one trial, got {trials}')
    seed = resolve_seed(seed)
    hits = sum(_crossings(side, p_site, trials, seed, threads))
    estimate = hits / trials
    return PercolationEstimate(
        p_site=p_site,
        side=side,
        trials=trials,
        spanning_probability=estimate,
        std_error=math.sqrt(estimate * (1.0 - estimate) / trials),
        seed=seed,
    )


def crossing_curve(side, p_values, trials, seed=None, threads=1):
    return [spanning_probability(side, p, trials, seed, threads) for p in p_values]


def estimate_threshold(side, trials, seed=None, iterations=THRESHOLD_ITERATIONS, threads=1):
    """
    Bisect on p for a crossing probability of one half.

    A finite-size estimate: it drifts toward the infinite-lattice threshold
    as the side grows.
    """
    side = check_side(side)
    seed = resolve_seed(seed)
    low, high = 0.0, 1.0
    for _ in range(iterations):
        middle = (low + high) / 2.0
        if spanning_probability(side, middle, trials, seed, threads).spanning_probability >= 0.5:
            high = middle
        else:
            low = middle
    estimate = (low + high) / 2.0
    logger.info(f'Threshold estimate for L={side}, {trials} trials/point: {estimate!r}')
    return estimate


def crossing_slope(side, p_site, trials, seed=None, step=0.02, threads=1):
    """Central-difference slope of the crossing curve at p_site."""
    low = spanning_probability(side, max(0.0, p_site - step), trials, seed, threads)
    high = spanning_probability(side, min(1.0, p_site + step), trials, seed, threads)
    return (high.spanning_probability - low.spanning_probability) / (high.p_site - low.p_site)
