"""
Local operations on dense states: single-qubit gates and measurements,
padding, partial traces, random states and Pauli-noise ensembles of graph
states.
"""

import logging
import math

import numpy as np
from scipy.stats import unitary_group

from core.exceptions import InvalidArgument
from .states import (
    Ensemble,
    PureState,
    as_ensemble,
    basis_bits,
    check_dense_capacity,
    make_graph_state,
)

logger = logging.getLogger(__name__)

PAULI = {
    'I': np.eye(2, dtype=np.complex128),
    'X': np.array([[0, 1], [1, 0]], dtype=np.complex128),
    'Y': np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    'Z': np.array([[1, 0], [0, -1]], dtype=np.complex128),
}

# Branches below this probability carry no state.
ZERO_PROBABILITY = 1e-14


def _check_qubit(psi, qubit):
    if not 0 <= qubit < psi.n:
        raise InvalidArgument(f'Qubit {qubit} out of range for a {psi.n}-qubit state')


def apply_single_qubit(psi, qubit, matrix):
    """Apply a 2x2 operator to one qubit and renormalize."""
    _check_qubit(psi, qubit)
    tensor = np.tensordot(np.asarray(matrix, dtype=np.complex128), psi.tensor(), axes=([1], [qubit]))
    tensor = np.moveaxis(tensor, 0, qubit)
    return PureState.from_vector(tensor, dict(psi.metadata))


def apply_pauli(psi, qubit, letter):
    letter = letter.upper()
    if letter not in PAULI:
        raise InvalidArgument(f'Unknown Pauli {letter!r}')
    if letter == 'I':
        return psi
    return apply_single_qubit(psi, qubit, PAULI[letter])


def apply_local_unitaries(psi, unitaries):
    """Apply one 2x2 unitary per qubit (None leaves a qubit untouched)."""
    if len(unitaries) != psi.n:
        raise InvalidArgument(f'Need {psi.n} local unitaries, got {len(unitaries)}')
    for qubit, u in enumerate(unitaries):
        if u is not None:
            psi = apply_single_qubit(psi, qubit, u)
    return psi


def product_state(local_vectors):
    """Tensor product of normalized single-qubit vectors."""
    amps = np.ones(1, dtype=np.complex128)
    for vec in local_vectors:
        vec = np.asarray(vec, dtype=np.complex128)
        amps = np.kron(amps, vec / np.linalg.norm(vec))
    return PureState.from_vector(amps, {'family': 'product'})


def basis_state(bits):
    """Computational basis state |b_0 b_1 ...>."""
    bits = [int(b) for b in bits]
    index = int(''.join(str(b) for b in bits), 2)
    amps = np.zeros(2 ** len(bits), dtype=np.complex128)
    amps[index] = 1.0
    return PureState(amps)


def extend_with_zeros(psi, k=1):
    """Append k qubits in |0> (the P_0 padding of a protocol's output)."""
    if k < 0:
        raise InvalidArgument('Cannot append a negative number of qubits')
    if k == 0:
        return psi
    check_dense_capacity(psi.n + k)
    padding = np.zeros(2 ** k, dtype=np.complex128)
    padding[0] = 1.0
    return PureState(np.kron(psi.amplitudes, padding), dict(psi.metadata))


def measurement_basis(theta, phi):
    """
    Orthonormal pair for outcome 0 and outcome 1.

    Outcome 0 is cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>; theta = pi/2
    gives the equatorial basis (|0> +- e^{i phi}|1>)/sqrt(2).
    """
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    phase = complex(math.cos(phi), math.sin(phi))
    plus = np.array([c, phase * s], dtype=np.complex128)
    minus = np.array([s, -phase * c], dtype=np.complex128)
    return plus, minus


def project_qubit(amplitudes, n, qubit, vector):
    """
    Contract one qubit of an (unnormalized) amplitude vector with <vector|.

    Returns the unnormalized residual on the remaining n-1 qubits.
    """
    tensor = np.asarray(amplitudes).reshape((2,) * n)
    return np.tensordot(np.conj(vector), tensor, axes=([0], [qubit])).ravel()


def measure_qubit(psi, qubit, basis):
    """
    Projective single-qubit measurement.

    Returns [(probability, residual)] for outcomes 0 and 1; the measured
    qubit is removed from the residual, which is None for a zero-probability
    outcome or when nothing remains.
    """
    _check_qubit(psi, qubit)
    branches = []
    for vector in basis:
        residual = project_qubit(psi.amplitudes, psi.n, qubit, vector)
        probability = float(np.vdot(residual, residual).real)
        if probability < ZERO_PROBABILITY or psi.n == 1:
            branches.append((probability, None))
        else:
            branches.append((probability, PureState.from_vector(residual)))
    return branches


def density_matrix(state):
    """Full density operator (bounded by the density limit)."""
    ensemble = as_ensemble(state)
    check_dense_capacity(ensemble.n, 'QSTATE_DENSITY_LIMIT')
    dim = 2 ** ensemble.n
    rho = np.zeros((dim, dim), dtype=np.complex128)
    for p, psi in ensemble.terms:
        rho += p * np.outer(psi.amplitudes, psi.amplitudes.conj())
    return rho


def partial_trace(state, keep):
    """Reduced density operator on the `keep` qubits (ascending order)."""
    ensemble = as_ensemble(state)
    n = ensemble.n
    keep = sorted(set(keep))
    if not keep or keep[0] < 0 or keep[-1] >= n:
        raise InvalidArgument(f'Invalid qubits to keep: {keep}')
    check_dense_capacity(len(keep), 'QSTATE_DENSITY_LIMIT')
    traced = [q for q in range(n) if q not in keep]
    dim_keep = 2 ** len(keep)
    rho = np.zeros((dim_keep, dim_keep), dtype=np.complex128)
    for p, psi in ensemble.terms:
        matrix = np.transpose(psi.tensor(), keep + traced).reshape(dim_keep, -1)
        rho += p * (matrix @ matrix.conj().T)
    return rho


def trace_distance_matrices(rho, sigma):
    """Trace distance between two explicit density operators."""
    eigenvalues = np.linalg.eigvalsh((rho - sigma + (rho - sigma).conj().T) / 2)
    return 0.5 * float(np.abs(eigenvalues).sum())


def random_state(n, rng):
    """Haar-random pure state."""
    check_dense_capacity(n)
    vec = rng.normal(size=2 ** n) + 1j * rng.normal(size=2 ** n)
    return PureState.from_vector(vec)


def random_unitary(rng, dim=2):
    """Haar-random unitary."""
    return unitary_group.rvs(dim, random_state=rng)


def random_ensemble(n, terms, rng):
    """Random finite ensemble with Dirichlet weights."""
    weights = rng.dirichlet(np.ones(terms))
    return Ensemble.normalized((w, random_state(n, rng)) for w in weights)


def z_pattern_state(graph, pattern):
    """Graph state with Z applied to every qubit j where pattern[j] = 1."""
    psi = make_graph_state(graph)
    pattern = np.asarray(pattern, dtype=np.int64)
    if pattern.size != graph.num_vertices:
        raise InvalidArgument('Z pattern length must equal the vertex count')
    signs = (basis_bits(graph.num_vertices) @ pattern) % 2
    return PureState(psi.amplitudes * np.where(signs, -1.0, 1.0), {'z_pattern': pattern.tolist()})


def _pattern_bits(mask, n):
    return [(mask >> (n - 1 - j)) & 1 for j in range(n)]


def z_pattern_ensemble(graph, p, weights):
    """
    (1-p)|C><C| + p * sum_k w_k |C^k><C^k| with C^k the Z-pattern states.

    `weights` maps a pattern (sequence of bits or integer mask) to w_k.
    """
    if not 0.0 <= p <= 1.0:
        raise InvalidArgument(f'Noise probability must lie in [0, 1], got {p}')
    n = graph.num_vertices
    pairs = [(1.0 - p, make_graph_state(graph))]
    total = math.fsum(weights.values())
    for pattern, w in sorted(weights.items(), key=lambda kv: str(kv[0])):
        bits = _pattern_bits(pattern, n) if isinstance(pattern, int) else list(pattern)
        pairs.append((p * w / total, z_pattern_state(graph, bits)))
    return Ensemble.normalized(pairs)


def pauli_noise_ensemble(graph, p_x, p_y, p_z):
    """
    Independent single-qubit Pauli noise on a graph state, as a mixture of
    Z-pattern states: X_j acts on the graph state as Z on every neighbour
    of j, and Y_j as Z_j times that string.
    """
    p_i = 1.0 - p_x - p_y - p_z
    if min(p_x, p_y, p_z, p_i) < 0:
        raise InvalidArgument('Pauli error probabilities must be non-negative and sum to at most 1')
    n = graph.num_vertices
    distribution = {0: 1.0}
    for j in range(n):
        own = 1 << (n - 1 - j)
        neighbourhood = 0
        for k in graph.neighbors(j):
            neighbourhood |= 1 << (n - 1 - k)
        updated = {}
        for mask, weight in distribution.items():
            for flip, prob in ((0, p_i), (own, p_z), (neighbourhood, p_x), (own ^ neighbourhood, p_y)):
                if prob > 0:
                    key = mask ^ flip
                    updated[key] = updated.get(key, 0.0) + weight * prob
        distribution = updated
    logger.debug(f'Pauli noise on {n} qubits spreads over {len(distribution)} Z patterns')
    return Ensemble.normalized(
        (w, z_pattern_state(graph, _pattern_bits(mask, n))) for mask, w in sorted(distribution.items())
    )
