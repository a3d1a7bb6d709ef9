"""
Geometric measure of entanglement.

The maximal squared overlap with a fully product state is found by
alternating optimization: each sweep visits every qubit and replaces its
local state by the normalized contraction of the state against all other
local states. A sweep never lowers the overlap, so every start converges to
a local maximum; the best over independent random starts is reported.
"""

import logging
import math

import numpy as np

from core.conf import get_setting
from core.exceptions import InvalidArgument
from core.parallel import ordered_map
from core.rng import make_rng, spawn_generators
from qstate.states import as_ensemble, check_dense_capacity
from .results import MonotoneKind, MonotoneResult

logger = logging.getLogger(__name__)


def _contract_except(tensor, local_states, k):
    """Contract every axis but k with the conjugated local states."""
    result = tensor
    for j in range(len(local_states) - 1, -1, -1):
        if j != k:
            result = np.tensordot(result, np.conj(local_states[j]), axes=([j], [0]))
    return result


def product_state_overlap(psi, local_states):
    """|<phi_1 ... phi_n|psi>|^2 for normalized local states."""
    local_states = [np.asarray(v, dtype=np.complex128) / np.linalg.norm(v) for v in local_states]
    if len(local_states) != psi.n:
        raise InvalidArgument(f'Need {psi.n} local states, got {len(local_states)}')
    amplitude = psi.tensor()
    for vec in reversed(local_states):
        amplitude = np.tensordot(amplitude, np.conj(vec), axes=([amplitude.ndim - 1], [0]))
    return float(abs(complex(amplitude)) ** 2)


def _random_local_states(n, rng):
    vectors = rng.normal(size=(n, 2)) + 1j * rng.normal(size=(n, 2))
    return [v / np.linalg.norm(v) for v in vectors]


def _climb(tensor, local_states, tol, max_sweeps):
    """Alternating optimization from one start; returns (overlap, states, sweeps, converged)."""
    n = len(local_states)
    local_states = list(local_states)
    value = 0.0
    for sweep in range(1, max_sweeps + 1):
        previous = value
        for k in range(n):
            v = _contract_except(tensor, local_states, k)
            norm = np.linalg.norm(v)
            if norm > 0:
                local_states[k] = v / norm
            value = float(norm ** 2)
        if sweep > 1 and value - previous < tol:
            return value, local_states, sweep, True
    return value, local_states, max_sweeps, False


def product_overlap(psi, restarts=None, tol=None, seed=None, witness=None, max_sweeps=None, threads=1):
    """
    Lower bound on the maximal squared overlap of psi with a product state.

    `witness` is an optional list of local vectors; it is used as an extra
    start, so the result never falls below its overlap.
    """
    restarts = get_setting('MONOTONES_RESTARTS') if restarts is None else int(restarts)
    tol = get_setting('MONOTONES_TOL') if tol is None else float(tol)
    max_sweeps = get_setting('MONOTONES_MAX_SWEEPS') if max_sweeps is None else int(max_sweeps)
    if restarts < 1:
        raise InvalidArgument(f'restarts must be at least 1, got {restarts}')
    if not tol > 0:
        raise InvalidArgument(f'tol must be positive, got {tol}')
    check_dense_capacity(psi.n)

    if isinstance(seed, np.random.Generator):
        seed = int(seed.integers(0, 2 ** 63))
    tensor = psi.tensor()
    starts = [_random_local_states(psi.n, rng) for rng in spawn_generators(seed, restarts)]
    if witness is not None:
        if len(witness) != psi.n:
            raise InvalidArgument(f'Witness needs {psi.n} local states, got {len(witness)}')
        starts.insert(0, [np.asarray(v, dtype=np.complex128) / np.linalg.norm(v) for v in witness])

    runs = ordered_map(lambda start: _climb(tensor, start, tol, max_sweeps), starts, threads)
    best_index = max(range(len(runs)), key=lambda i: runs[i][0])
    value, local_states, sweeps, converged = runs[best_index]
    if not converged:
        logger.warning(f'Product-overlap optimization hit {max_sweeps} sweeps on {psi.n} qubits')

    return MonotoneResult(
        value=min(1.0, value),
        kind=MonotoneKind.LOWER_BOUND,
        method='alternating-optimization',
        iterations=sweeps,
        restarts=len(starts),
        converged=converged,
        witness=local_states,
        details={'tol': tol, 'best_start': best_index, 'witness_start': witness is not None},
    )


def geometric_measure(psi, restarts=None, tol=None, seed=None, witness=None, max_sweeps=None, threads=1):
    """E_G = 1 - product overlap; an upper bound because the overlap is approached from below."""
    overlap = product_overlap(psi, restarts, tol, seed, witness, max_sweeps, threads)
    return MonotoneResult(
        value=max(0.0, 1.0 - overlap.value),
        kind=MonotoneKind.UPPER_BOUND,
        method='one-minus-product-overlap',
        iterations=overlap.iterations,
        restarts=overlap.restarts,
        converged=overlap.converged,
        witness=overlap.witness,
        details={**overlap.details, 'product_overlap': overlap.value},
    )


def geometric_measure_ensemble_ub(rho, restarts=None, tol=None, seed=None, threads=1):
    """
    sum_i p_i E_G(psi_i) for the given decomposition.

    Only the supplied decomposition is used, so the value upper-bounds the
    convex-roof geometric measure.
    """
    ensemble = as_ensemble(rho)
    rng = make_rng(seed)
    terms = []
    for p, psi in ensemble.terms:
        result = geometric_measure(psi, restarts, tol, int(rng.integers(0, 2 ** 63)), threads=threads)
        terms.append({'probability': p, 'value': result.value, 'converged': result.converged})
    value = math.fsum(t['probability'] * t['value'] for t in terms)
    return MonotoneResult(
        value=max(0.0, value),
        kind=MonotoneKind.UPPER_BOUND,
        method='decomposition-average',
        iterations=len(terms),
        restarts=restarts or get_setting('MONOTONES_RESTARTS'),
        converged=all(t['converged'] for t in terms),
        details={'terms': terms},
    )
