"""
Single-qubit measurement protocols with classical feedforward, executed as
exhaustive branch trees on dense states.

Outcome records are bitstrings with one character per step. Feedforward
tables map the record of the earlier steps to a Pauli string applied to the
qubit just before it is measured; read-out corrections map the full record
to one Pauli string per output qubit. A Pauli string is an operator product
such as "XZ" (Z acts first).
"""

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from core.conf import get_setting
from core.exceptions import CapacityError, InvalidArgument
from core.parallel import ordered_map
from qstate.operations import PAULI, ZERO_PROBABILITY, apply_pauli, measure_qubit, measurement_basis
from qstate.states import Ensemble, PureState, as_ensemble

logger = logging.getLogger(__name__)

BASIS_TOL = 1e-12
PROBABILITY_TOL = 1e-10


def _check_pauli_string(letters):
    if not isinstance(letters, str) or any(letter not in PAULI for letter in letters.upper()):
        raise InvalidArgument(f'Pauli corrections must be strings over I, X, Y, Z, got {letters!r}')
    return letters.upper()


def apply_pauli_string(psi, qubit, letters):
    """Apply the operator product `letters` to one qubit."""
    for letter in reversed(letters):
        psi = apply_pauli(psi, qubit, letter)
    return psi


@dataclass(frozen=True)
class MeasureStep:
    qubit: int
    theta: float
    phi: float
    feedforward: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.qubit < 0:
            raise InvalidArgument(f'Qubit index must be non-negative, got {self.qubit}')
        plus, minus = self.basis
        gram = np.array([[np.vdot(a, b) for b in (plus, minus)] for a in (plus, minus)])
        if np.abs(gram - np.eye(2)).max() > BASIS_TOL:
            raise InvalidArgument(f'Measurement basis of qubit {self.qubit} is not orthonormal')
        object.__setattr__(
            self, 'feedforward', {str(bits): _check_pauli_string(p) for bits, p in self.feedforward.items()}
        )

    @property
    def basis(self):
        return measurement_basis(self.theta, self.phi)

    def correction(self, record):
        return self.feedforward.get(record, '')


@dataclass(frozen=True)
class Protocol:
    steps: tuple
    outputs: tuple
    corrections: dict = field(default_factory=dict)

    def __post_init__(self):
        steps = tuple(self.steps)
        outputs = tuple(int(q) for q in self.outputs)
        measured = [step.qubit for step in steps]
        if len(set(measured)) != len(measured):
            raise InvalidArgument('Each qubit may be measured at most once')
        if set(measured) & set(outputs):
            raise InvalidArgument('Output qubits cannot be measured')
        if list(outputs) != sorted(set(outputs)):
            raise InvalidArgument('Output qubits must be listed once, in ascending order')
        for index, step in enumerate(steps):
            for bits in step.feedforward:
                if len(bits) != index or set(bits) - {'0', '1'}:
                    raise InvalidArgument(
                        f'Feedforward of step {index} must key on the {index} earlier outcomes, got {bits!r}'
                    )
        corrections = {}
        for bits, letters in self.corrections.items():
            if len(bits) != len(steps) or set(bits) - {'0', '1'}:
                raise InvalidArgument(f'Read-out corrections must key on all {len(steps)} outcomes, got {bits!r}')
            if len(letters) != len(outputs):
                raise InvalidArgument(f'Read-out correction {bits!r} needs one Pauli string per output qubit')
            corrections[str(bits)] = tuple(_check_pauli_string(p) for p in letters)
        object.__setattr__(self, 'steps', steps)
        object.__setattr__(self, 'outputs', outputs)
        object.__setattr__(self, 'corrections', corrections)

    @property
    def measured(self):
        return [step.qubit for step in self.steps]

    def validate_for(self, n):
        """Check that the protocol measures or outputs every one of n qubits."""
        if sorted(self.measured + list(self.outputs)) != list(range(n)):
            raise InvalidArgument(
                f'Protocol covers qubits {sorted(self.measured + list(self.outputs))}, state has {n}'
            )


@dataclass
class BranchLeaf:
    record: str
    probability: float
    state: object

    @property
    def is_pure(self):
        return isinstance(self.state, PureState)


@dataclass
class BranchTree:
    """Output branches of a protocol run; pruned holds zero-probability records."""

    leaves: list
    pruned: list = field(default_factory=list)

    @property
    def total_probability(self):
        return math.fsum(leaf.probability for leaf in self.leaves)

    def probabilities(self):
        return {leaf.record: leaf.probability for leaf in self.leaves}

    def output_state(self):
        """The record-discarding output sum_i p_i rho_i as an ensemble."""
        pairs = []
        for leaf in self.leaves:
            for p, psi in as_ensemble(leaf.state).terms:
                pairs.append((leaf.probability * p, psi))
        return Ensemble.normalized(pairs)


def _run_pure(psi, protocol):
    """Branches (record, probability, residual) for one pure input."""
    branches = [('', 1.0, psi, list(range(psi.n)))]
    pruned = []
    for step in protocol.steps:
        basis = step.basis
        expanded = []
        for record, prob, state, remaining in branches:
            position = remaining.index(step.qubit)
            state = apply_pauli_string(state, position, step.correction(record))
            rest = remaining[:position] + remaining[position + 1:]
            for outcome, (p, residual) in enumerate(measure_qubit(state, position, basis)):
                branch_prob = prob * p
                if p < ZERO_PROBABILITY:
                    pruned.append((record + str(outcome), branch_prob))
                    continue
                expanded.append((record + str(outcome), branch_prob, residual, rest))
        branches = expanded

    leaves = []
    for record, prob, state, remaining in branches:
        letters = protocol.corrections.get(record)
        if letters and state is not None:
            for position, correction in enumerate(letters):
                state = apply_pauli_string(state, position, correction)
        leaves.append((record, prob, state))
    return leaves, pruned


def run_protocol(state, protocol, branch_cap=None, threads=1):
    """
    Execute a protocol on a pure state or ensemble.

    Ensemble terms run separately and merge by outcome record; a merged
    branch holds an Ensemble when more than one term reaches it.
    """
    ensemble = as_ensemble(state)
    protocol.validate_for(ensemble.n)
    cap = branch_cap or get_setting('LOCC_BRANCH_CAP')
    if 2 ** len(protocol.steps) > cap:
        raise CapacityError('branch count', 2 ** len(protocol.steps), cap)

    runs = ordered_map(lambda term: _run_pure(term[1], protocol), ensemble.terms, threads)
    merged, pruned = {}, []
    for (weight, _), (leaves, dropped) in zip(ensemble.terms, runs):
        pruned.extend((record, weight * p) for record, p in dropped)
        for record, prob, residual in leaves:
            merged.setdefault(record, []).append((weight * prob, residual))

    result = []
    for record in sorted(merged):
        parts = merged[record]
        probability = math.fsum(p for p, _ in parts)
        if not protocol.outputs:
            residual = None
        elif len(parts) == 1:
            residual = parts[0][1]
        else:
            residual = Ensemble.normalized(parts)
        result.append(BranchLeaf(record, probability, residual))
    if pruned:
        logger.warning(f'Pruned {len(pruned)} zero-probability branches')

    tree = BranchTree(result, pruned)
    total = tree.total_probability + math.fsum(p for _, p in pruned)
    if abs(total - 1.0) > PROBABILITY_TOL:
        logger.warning(f'Branch probabilities sum to {total!r}')
    return tree


def computational_protocol(n, outputs=()):
    """Measure every qubit not in outputs in the computational basis."""
    outputs = tuple(sorted(outputs))
    return Protocol(tuple(MeasureStep(q, 0.0, 0.0) for q in range(n) if q not in outputs), outputs)
