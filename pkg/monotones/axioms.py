"""
Sampling oracles for the monotone axioms.

Each check draws random states (seeded), evaluates both sides of the axiom
and counts violations beyond its tolerance.
"""

import logging
import math
from dataclasses import dataclass, field

from core.rng import make_rng
from qstate.operations import (
    apply_local_unitaries,
    extend_with_zeros,
    measure_qubit,
    measurement_basis,
    product_state,
    random_state,
    random_unitary,
)
from .geometric import geometric_measure
from .widths import entropic_entanglement_width, schmidt_rank_width

logger = logging.getLogger(__name__)


@dataclass
class AxiomReport:
    axiom: str
    checked: int = 0
    violations: int = 0
    max_excess: float = 0.0
    tolerance: float = 0.0
    details: list = field(default_factory=list)

    @property
    def passed(self):
        return self.violations == 0

    def record(self, excess, **context):
        """Register one sample whose inequality slack is `excess` (positive = violated)."""
        self.checked += 1
        self.max_excess = max(self.max_excess, excess)
        if excess > self.tolerance:
            self.violations += 1
            self.details.append({'excess': excess, **context})
            logger.warning(f'{self.axiom} violated by {excess!r}: {context}')


def _eg(psi, seed, restarts=None):
    return geometric_measure(psi, restarts=restarts, seed=seed).value


def _random_angles(rng):
    return float(rng.uniform(0, math.pi)), float(rng.uniform(0, 2 * math.pi))


def check_vanishing_on_product(samples=20, n=3, seed=None, tol=1e-9):
    """E_G of random product states is zero."""
    rng = make_rng(seed)
    report = AxiomReport('vanishing on product states', tolerance=tol)
    for _ in range(samples):
        local = rng.normal(size=(n, 2)) + 1j * rng.normal(size=(n, 2))
        report.record(_eg(product_state(local), int(rng.integers(0, 2 ** 63))))
    return report


def check_lu_invariance(samples=10, sizes=(3, 4, 5), seed=None, tol=1e-6, restarts=None):
    """
    E_G changes by less than tol under independent single-qubit unitaries.

    Each optimization also starts from the other state's optimum carried
    through the unitaries, so both sides see the same best product state.
    """
    rng = make_rng(seed)
    report = AxiomReport('local-unitary invariance', tolerance=tol)
    for index in range(samples):
        n = sizes[index % len(sizes)]
        psi = random_state(n, rng)
        unitaries = [random_unitary(rng) for _ in range(n)]
        rotated = apply_local_unitaries(psi, unitaries)
        stream = int(rng.integers(0, 2 ** 63))
        first = geometric_measure(psi, restarts=restarts, seed=stream)
        second = geometric_measure(rotated, restarts=restarts, seed=stream,
                                   witness=[u @ v for u, v in zip(unitaries, first.witness)])
        again = geometric_measure(psi, restarts=1, seed=stream,
                                  witness=[u.conj().T @ v for u, v in zip(unitaries, second.witness)])
        report.record(abs(min(first.value, again.value) - second.value), n=n, sample=index)
    return report


def _measurement_branches(psi, rng):
    qubit = int(rng.integers(0, psi.n))
    theta, phi = _random_angles(rng)
    return qubit, [(p, r) for p, r in measure_qubit(psi, qubit, measurement_basis(theta, phi)) if r is not None]


def check_strong_monotonicity(samples=20, n=3, seed=None, tol=2e-6, restarts=None):
    """sum_i p_i E_G(rho_i) <= E_G(rho) for random single-qubit projective measurements."""
    rng = make_rng(seed)
    report = AxiomReport('strong monotonicity', tolerance=tol)
    for index in range(samples):
        psi = random_state(n, rng)
        stream = int(rng.integers(0, 2 ** 63))
        qubit, branches = _measurement_branches(psi, rng)
        before = _eg(psi, stream, restarts)
        after = math.fsum(p * _eg(r, stream, restarts) for p, r in branches)
        report.record(after - before, sample=index, qubit=qubit)
    return report


def check_weak_non_increase(samples=20, n=3, seed=None, tol=2e-6, restarts=None):
    """Some measurement branch carries no more E_G than the input."""
    rng = make_rng(seed)
    report = AxiomReport('weak non-increase', tolerance=tol)
    for index in range(samples):
        psi = random_state(n, rng)
        stream = int(rng.integers(0, 2 ** 63))
        qubit, branches = _measurement_branches(psi, rng)
        before = _eg(psi, stream, restarts)
        report.record(min(_eg(r, stream, restarts) for _, r in branches) - before, sample=index, qubit=qubit)
    return report


def check_extendability(states, seed=None, tol=1e-6, restarts=None):
    """Appending |0> leaves E_G and the Schmidt-rank width unchanged."""
    report = AxiomReport('trivial extendability', tolerance=tol)
    rng = make_rng(seed)
    for index, psi in enumerate(states):
        padded = extend_with_zeros(psi)
        stream = int(rng.integers(0, 2 ** 63))
        report.record(abs(_eg(psi, stream, restarts) - _eg(padded, stream, restarts)), sample=index, measure='geometric')
        if psi.n >= 2:
            report.record(abs(schmidt_rank_width(psi).value - schmidt_rank_width(padded).value),
                          sample=index, measure='schmidt-rank-width')
    return report


def check_width_dominance(states, tol=1e-9):
    """Schmidt-rank width is never below the entropic entanglement width."""
    report = AxiomReport('width dominance', tolerance=tol)
    for index, psi in enumerate(states):
        report.record(entropic_entanglement_width(psi).value - schmidt_rank_width(psi).value, sample=index)
    return report
