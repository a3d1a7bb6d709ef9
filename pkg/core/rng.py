"""
Reproducible random streams.

Every randomized operation takes a seed (or a ready Generator). Streams are
counter-based Philox generators derived from a SeedSequence, so each trial
owns an independent stream and results do not depend on execution order.
"""

import logging
import secrets

import numpy as np

from .conf import get_setting
from .exceptions import InvalidArgument

logger = logging.getLogger(__name__)

SEED_MAX = 2 ** 64 - 1


def resolve_seed(seed=None):
    """
    Turn a CLI/user seed into a 64-bit integer.

    None selects the configured default; the string 'random' draws fresh
    entropy (the drawn value is returned so callers can record it).
    """
    if seed is None:
        return int(get_setting('CLI_DEFAULT_SEED'))
    if isinstance(seed, str):
        if seed.lower() == 'random':
            drawn = secrets.randbits(64)
            logger.info(f'Drew fresh seed {drawn}')
            return drawn
        try:
            seed = int(seed)
        except ValueError:
            raise InvalidArgument(f"Seed must be an integer or 'random', got {seed!r}")
    if not 0 <= int(seed) <= SEED_MAX:
        raise InvalidArgument(f'Seed must lie in [0, 2^64), got {seed}')
    return int(seed)


def make_rng(seed=None):
    """Return a Philox-backed Generator; a Generator argument is passed through."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(resolve_seed(seed))))


def spawn_seeds(seed, count):
    """Derive `count` independent child seed sequences (one per trial)."""
    if isinstance(seed, np.random.Generator):
        raise InvalidArgument('spawn_seeds needs an integer seed, not a Generator')
    return np.random.SeedSequence(resolve_seed(seed)).spawn(count)


def generator_for(child):
    """Build the Generator for one spawned child sequence."""
    return np.random.Generator(np.random.Philox(child))


def spawn_generators(seed, count):
    """Independent Generators, one per trial index."""
    return [generator_for(child) for child in spawn_seeds(seed, count)]
