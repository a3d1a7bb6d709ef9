"""
Deformed cluster states and the two-outcome filter that turns them back
into a cluster with heralded holes.

The success operator is proportional to the inverse deformation,
A = diag(lambda, 1); the failure operator diag(sqrt(1 - lambda^2), 0)
projects the site onto |0>, which deletes the vertex.
"""

import logging
import math

import numpy as np

from core.exceptions import InvalidArgument
from qstate.operations import partial_trace
from .lattice import Lattice, check_side

logger = logging.getLogger(__name__)


def _check_lambda(lam):
    lam = float(lam)
    if not 0.0 <= lam <= 1.0:
        raise InvalidArgument(f'Deformation lambda must lie in [0, 1], got {lam}')
    return lam


def deformed_p_site(lam):
    """Success probability 2 lambda^2 / (1 + lambda^2), independent of lattice size."""
    lam = _check_lambda(lam)
    return 2.0 * lam * lam / (1.0 + lam * lam)


def deformed_threshold(p_c):
    """lambda_c = sqrt(p_c / (2 - p_c)), the inverse of deformed_p_site."""
    p_c = float(p_c)
    if not 0.0 < p_c <= 1.0:
        raise InvalidArgument(f'Threshold must lie in (0, 1], got {p_c}')
    return math.sqrt(p_c / (2.0 - p_c))


def povm_operators(lam):
    """(success, failure) Kraus operators; their squares sum to the identity."""
    lam = _check_lambda(lam)
    success = np.diag([lam, 1.0]).astype(np.complex128)
    failure = np.diag([math.sqrt(1.0 - lam * lam), 0.0]).astype(np.complex128)
    return success, failure


def povm_outcome_probability(state, qubit, lam):
    """Success probability of the filter on one qubit of a dense state."""
    success, _ = povm_operators(lam)
    rho = partial_trace(state, [qubit])
    return float(np.trace(success.conj().T @ success @ rho).real)


def site_marginal(lam):
    """Single-site marginal diag(1, lambda^2)/(1 + lambda^2) of a deformed cluster."""
    lam = _check_lambda(lam)
    return np.diag([1.0, lam * lam]).astype(np.complex128) / (1.0 + lam * lam)


def povm_hole_sampler(lam, side, rng):
    """
    Apply the filter to every site of a deformed L x L cluster.

    Occupied sites are heralded successes; holes are failures.
    """
    side = check_side(side)
    success, _ = povm_operators(lam)
    p_success = float(np.trace(success.conj().T @ success @ site_marginal(lam)).real)
    outcomes = rng.random((side, side)) < p_success
    if lam == 0.0:
        logger.warning('lambda=0: every site fails and the lattice is empty')
    return Lattice(side, outcomes)
