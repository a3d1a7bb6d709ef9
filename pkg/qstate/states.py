"""
Dense pure states, finite ensembles, graphs and bipartitions, with the
standard state families and the two distance functionals everything else
consumes.

Qubit 0 is the most significant bit of a basis index.
"""

import logging
import math
from dataclasses import dataclass, field
from types import MappingProxyType

import networkx as nx
import numpy as np
import scipy.linalg

from core.conf import get_setting
from core.exceptions import CapacityError, InvalidArgument

logger = logging.getLogger(__name__)

NORM_TOL = 1e-12


def check_dense_capacity(n, setting='QSTATE_DENSE_LIMIT'):
    """Refuse dense objects on more qubits than the configured limit."""
    limit = get_setting(setting)
    if n > limit:
        raise CapacityError('qubit count', n, limit)


def basis_bits(n):
    """(2^n, n) table of basis-index bits, qubit 0 first."""
    index = np.arange(2 ** n, dtype=np.int64)
    shifts = np.arange(n - 1, -1, -1, dtype=np.int64)
    return ((index[:, None] >> shifts[None, :]) & 1).astype(np.int8)


@dataclass(frozen=True, eq=False)
class PureState:
    """Normalized amplitude vector over n qubits (immutable)."""

    amplitudes: np.ndarray
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=np.complex128).ravel()
        size = amps.size
        if size < 2 or size & (size - 1):
            raise InvalidArgument(f'Amplitude count must be 2^n with n >= 1, got {size}')
        norm2 = float(np.vdot(amps, amps).real)
        if abs(norm2 - 1.0) > NORM_TOL:
            raise InvalidArgument(f'State is not normalized (norm^2 = {norm2!r})')
        amps.flags.writeable = False
        object.__setattr__(self, 'amplitudes', amps)
        object.__setattr__(self, 'metadata', MappingProxyType(dict(self.metadata)))

    @classmethod
    def from_vector(cls, vector, metadata=None):
        """Normalize an arbitrary nonzero vector into a state."""
        vec = np.asarray(vector, dtype=np.complex128).ravel()
        norm = np.linalg.norm(vec)
        if norm == 0 or not np.isfinite(norm):
            raise InvalidArgument('Cannot normalize a zero or non-finite vector')
        return cls(vec / norm, metadata or {})

    @property
    def n(self):
        return self.amplitudes.size.bit_length() - 1

    def tensor(self):
        """Amplitudes reshaped to one axis per qubit."""
        return self.amplitudes.reshape((2,) * self.n)

    def overlap(self, other):
        """Inner product <self|other>."""
        if other.n != self.n:
            raise InvalidArgument(f'Qubit counts differ: {self.n} vs {other.n}')
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def kron(self, other):
        return PureState.from_vector(np.kron(self.amplitudes, other.amplitudes))

    def __repr__(self):
        return f'PureState(n={self.n})'


@dataclass(frozen=True, eq=False)
class Ensemble:
    """Finite list of (probability, PureState) terms on a common qubit count."""

    terms: tuple

    def __post_init__(self):
        terms = tuple((float(p), psi) for p, psi in self.terms)
        if not terms:
            raise InvalidArgument('An ensemble needs at least one term')
        for p, psi in terms:
            if not isinstance(psi, PureState):
                raise InvalidArgument('Ensemble terms must hold PureState values')
            if p < 0 or not math.isfinite(p):
                raise InvalidArgument(f'Ensemble probabilities must be non-negative, got {p}')
        total = math.fsum(p for p, _ in terms)
        if abs(total - 1.0) > NORM_TOL:
            raise InvalidArgument(f'Ensemble probabilities sum to {total!r}, not 1')
        sizes = {psi.n for _, psi in terms}
        if len(sizes) != 1:
            raise InvalidArgument(f'Ensemble terms have differing qubit counts {sorted(sizes)}')
        object.__setattr__(self, 'terms', terms)

    @classmethod
    def pure(cls, psi):
        return cls(((1.0, psi),))

    @classmethod
    def normalized(cls, pairs):
        """Build an ensemble from non-negative weights, rescaling them to sum to one."""
        pairs = [(float(w), psi) for w, psi in pairs if w > 0]
        total = math.fsum(w for w, _ in pairs)
        if total <= 0:
            raise InvalidArgument('Ensemble weights must have a positive sum')
        return cls(tuple((w / total, psi) for w, psi in pairs))

    @property
    def n(self):
        return self.terms[0][1].n

    @property
    def probabilities(self):
        return np.array([p for p, _ in self.terms])

    @property
    def states(self):
        return [psi for _, psi in self.terms]

    def __repr__(self):
        return f'Ensemble(n={self.n}, terms={len(self.terms)})'


def as_ensemble(state):
    """View a PureState as a one-term ensemble; ensembles pass through."""
    if isinstance(state, Ensemble):
        return state
    if isinstance(state, PureState):
        return Ensemble.pure(state)
    raise InvalidArgument(f'Expected PureState or Ensemble, got {type(state).__name__}')


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices 0..num_vertices-1."""

    num_vertices: int
    edges: frozenset = frozenset()

    def __post_init__(self):
        if self.num_vertices < 1:
            raise InvalidArgument(f'A graph needs at least one vertex, got {self.num_vertices}')
        normalized = set()
        for edge in self.edges:
            u, v = (int(x) for x in edge)
            if u == v:
                raise InvalidArgument(f'Self-loop on vertex {u}')
            if not (0 <= u < self.num_vertices and 0 <= v < self.num_vertices):
                raise InvalidArgument(f'Edge ({u}, {v}) leaves the vertex range')
            normalized.add((min(u, v), max(u, v)))
        object.__setattr__(self, 'edges', frozenset(normalized))

    @classmethod
    def empty(cls, n):
        return cls(n, frozenset())

    @classmethod
    def path(cls, n):
        """1D cluster graph."""
        return cls(n, frozenset((i, i + 1) for i in range(n - 1)))

    @classmethod
    def cycle(cls, n):
        if n < 3:
            raise InvalidArgument('A cycle needs at least three vertices')
        return cls(n, frozenset((i, (i + 1) % n) for i in range(n)))

    @classmethod
    def grid(cls, rows, cols=None):
        """2D cluster graph; vertex r*cols + c sits at row r, column c."""
        cols = rows if cols is None else cols
        if rows < 1 or cols < 1:
            raise InvalidArgument('Grid dimensions must be positive')
        g = nx.convert_node_labels_to_integers(nx.grid_2d_graph(rows, cols), ordering='sorted')
        return cls.from_networkx(g)

    @classmethod
    def stripe(cls, d):
        """d x ceil(log2 d) cluster stripe."""
        if d < 2:
            raise InvalidArgument('A stripe needs d >= 2')
        return cls.grid(max(1, math.ceil(math.log2(d))), d)

    @classmethod
    def from_networkx(cls, g):
        mapping = {node: i for i, node in enumerate(sorted(g.nodes))}
        return cls(len(mapping), frozenset((mapping[u], mapping[v]) for u, v in g.edges))

    def to_networkx(self):
        g = nx.Graph()
        g.add_nodes_from(range(self.num_vertices))
        g.add_edges_from(self.edges)
        return g

    def neighbors(self, v):
        return sorted({b for a, b in self.edges if a == v} | {a for a, b in self.edges if b == v})

    def without_vertices(self, removed):
        """
        Delete vertices with their edges (heralded holes).

        Returns the relabelled graph and the old -> new vertex mapping.
        """
        removed = set(removed)
        kept = [v for v in range(self.num_vertices) if v not in removed]
        if not kept:
            raise InvalidArgument('Cannot delete every vertex')
        mapping = {old: new for new, old in enumerate(kept)}
        edges = frozenset(
            (mapping[u], mapping[v]) for u, v in self.edges if u in mapping and v in mapping
        )
        return Graph(len(kept), edges), mapping


@dataclass(frozen=True)
class Bipartition:
    """Split of qubits 0..n-1 into two nonempty sides."""

    side_a: frozenset
    side_b: frozenset

    def __post_init__(self):
        a, b = frozenset(self.side_a), frozenset(self.side_b)
        object.__setattr__(self, 'side_a', a)
        object.__setattr__(self, 'side_b', b)
        if not a or not b:
            raise InvalidArgument('Both sides of a bipartition must be nonempty')
        if a & b:
            raise InvalidArgument(f'Bipartition sides overlap on {sorted(a & b)}')
        if a | b != frozenset(range(len(a) + len(b))):
            raise InvalidArgument('Bipartition sides must cover qubits 0..n-1 exactly')

    @classmethod
    def of(cls, side_a, n):
        side_a = frozenset(side_a)
        return cls(side_a, frozenset(range(n)) - side_a)

    @property
    def n(self):
        return len(self.side_a) + len(self.side_b)


def make_w_state(n):
    """W state: equal superposition of the n weight-one basis vectors."""
    if n < 2:
        raise InvalidArgument(f'W state needs n >= 2, got {n}')
    check_dense_capacity(n)
    amps = np.zeros(2 ** n, dtype=np.complex128)
    amps[[1 << (n - 1 - q) for q in range(n)]] = 1.0 / math.sqrt(n)
    return PureState.from_vector(amps, {'family': 'w'})


def make_ghz(n):
    """GHZ state (|0...0> + |1...1>)/sqrt(2)."""
    if n < 2:
        raise InvalidArgument(f'GHZ state needs n >= 2, got {n}')
    check_dense_capacity(n)
    amps = np.zeros(2 ** n, dtype=np.complex128)
    amps[0] = amps[-1] = 1.0 / math.sqrt(2.0)
    return PureState.from_vector(amps, {'family': 'ghz'})


def make_graph_state(g):
    """Controlled-phase along every edge applied to |+>^n."""
    n = g.num_vertices
    check_dense_capacity(n)
    bits = basis_bits(n)
    parity = np.zeros(2 ** n, dtype=np.int64)
    for u, v in sorted(g.edges):
        parity += bits[:, u] & bits[:, v]
    amps = np.where(parity % 2, -1.0, 1.0) / math.sqrt(2.0 ** n)
    return PureState.from_vector(amps, {'graph_edges': len(g.edges)})


def make_deformed_cluster(g, lam):
    """Graph state filtered sitewise by diag(1, lam) and renormalized."""
    lam = float(lam)
    if not 0.0 <= lam <= 1.0:
        raise InvalidArgument(f'Deformation lambda must lie in [0, 1], got {lam}')
    base = make_graph_state(g)
    weight = basis_bits(g.num_vertices).sum(axis=1)
    metadata = {'deformation': lam, 'degenerate': lam == 0.0}
    if lam == 0.0:
        logger.warning('Deformation lambda=0 projects every site onto |0>')
    return PureState.from_vector(base.amplitudes * lam ** weight, metadata)


def fidelity(a, b):
    """Squared-overlap fidelity <b|rho_a|b> against a pure reference b."""
    if not isinstance(b, PureState):
        raise InvalidArgument('The fidelity reference must be a pure state')
    ensemble = as_ensemble(a)
    if ensemble.n != b.n:
        raise InvalidArgument(f'Qubit counts differ: {ensemble.n} vs {b.n}')
    value = math.fsum(p * abs(psi.overlap(b)) ** 2 for p, psi in ensemble.terms)
    return min(1.0, max(0.0, value))


def trace_distance(a, b):
    """
    Half the trace norm of rho_a - rho_b.

    The difference operator is evaluated on the span of the ensemble
    vectors, so no full density operator is ever formed.
    """
    ea, eb = as_ensemble(a), as_ensemble(b)
    if ea.n != eb.n:
        raise InvalidArgument(f'Qubit counts differ: {ea.n} vs {eb.n}')
    check_dense_capacity(ea.n)

    if len(ea.terms) == 1 and len(eb.terms) == 1:
        # sqrt(1 - |c|^2) with 1 - |c| taken from the phase-aligned difference,
        # which stays accurate for nearly equal states.
        psi, phi = ea.terms[0][1], eb.terms[0][1]
        overlap = psi.overlap(phi)
        magnitude = abs(overlap)
        if magnitude == 0.0:
            return 1.0
        difference = psi.amplitudes - phi.amplitudes * (overlap.conjugate() / magnitude)
        gap = 0.5 * float(np.vdot(difference, difference).real)
        return min(1.0, math.sqrt(max(0.0, gap * (1.0 + min(1.0, magnitude)))))

    vectors = np.column_stack([psi.amplitudes for _, psi in ea.terms + eb.terms])
    weights = np.concatenate([ea.probabilities, -eb.probabilities])
    basis = scipy.linalg.orth(vectors)
    coords = basis.conj().T @ vectors
    difference = (coords * weights) @ coords.conj().T
    eigenvalues = np.linalg.eigvalsh((difference + difference.conj().T) / 2)
    return min(1.0, max(0.0, 0.5 * float(np.abs(eigenvalues).sum())))


def schmidt_coefficients(psi, cut):
    """Descending Schmidt coefficients of psi across the bipartition."""
    if not isinstance(cut, Bipartition):
        raise InvalidArgument('cut must be a Bipartition')
    if cut.n != psi.n:
        raise InvalidArgument(f'Bipartition covers {cut.n} qubits, state has {psi.n}')
    side_a, side_b = sorted(cut.side_a), sorted(cut.side_b)
    matrix = np.transpose(psi.tensor(), side_a + side_b).reshape(2 ** len(side_a), 2 ** len(side_b))
    return np.linalg.svd(matrix, compute_uv=False)
