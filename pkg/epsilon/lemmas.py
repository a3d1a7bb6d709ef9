"""
Executable checks of the two inequalities behind the epsilon bounds, and a
sampled soundness check of the closed-form bound.
"""

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from core.exceptions import InvalidArgument
from core.rng import make_rng
from monotones.geometric import product_overlap
from qstate.operations import random_state
from qstate.states import Ensemble, PureState, as_ensemble, fidelity, trace_distance
from .bounds import eps_geo_closed_form, get_eta_map

logger = logging.getLogger(__name__)

SAMPLING_RESTARTS = 8
LIPSCHITZ_SLACK = 2e-6
SOUNDNESS_SLACK = 1e-6


@dataclass
class LemmaReport:
    """Both sides of one inequality instance."""

    lemma: str
    lhs: float
    rhs: float
    passed: bool
    details: dict = field(default_factory=dict)


@dataclass
class SamplingReport:
    lemma: str
    trials: int = 0
    violations: int = 0
    worst_margin: float = math.inf
    seed: int = None
    failures: list = field(default_factory=list)

    @property
    def passed(self):
        return self.violations == 0

    def add(self, report):
        self.trials += 1
        margin = report.details.get('margin', 0.0)
        self.worst_margin = min(self.worst_margin, margin)
        if not report.passed:
            self.violations += 1
            self.failures.append({'lhs': report.lhs, 'rhs': report.rhs, **report.details})
            logger.warning(f'{self.lemma} violated: lhs={report.lhs!r}, rhs={report.rhs!r}')


def lemma_mass_concentration_check(rho, psi, delta_param, tol=1e-12):
    """
    Probability mass of terms with |<psi_i|psi>|^2 >= 1 - Delta is at least
    1 - eta/Delta, where 1 - eta is the fidelity of rho with psi.
    """
    if not delta_param > 0:
        raise InvalidArgument(f'Delta must be positive, got {delta_param}')
    ensemble = as_ensemble(rho)
    eta = max(0.0, 1.0 - fidelity(ensemble, psi))
    mass = math.fsum(p for p, term in ensemble.terms if abs(term.overlap(psi)) ** 2 >= 1.0 - delta_param)
    rhs = 1.0 - eta / delta_param
    return LemmaReport(
        lemma='mass concentration',
        lhs=mass,
        rhs=rhs,
        passed=mass >= rhs - tol,
        details={'eta': eta, 'delta': delta_param, 'margin': mass - rhs},
    )


def _paired_overlaps(psi, psi_tilde, seed, restarts):
    """Product overlaps of both states, each optimization also started from the other's optimum."""
    first = product_overlap(psi, restarts, seed=seed)
    second = product_overlap(psi_tilde, restarts, seed=seed, witness=first.witness)
    again = product_overlap(psi, 1, seed=seed, witness=second.witness)
    return max(first.value, again.value), second.value


def lemma_lipschitz_check(psi, psi_tilde, seed=None, restarts=SAMPLING_RESTARTS, slack=LIPSCHITZ_SLACK):
    """|E_G(psi) - E_G(psi_tilde)| <= 3 sqrt(eta) with eta = 1 - |<psi|psi_tilde>|^2."""
    if not (isinstance(psi, PureState) and isinstance(psi_tilde, PureState)):
        raise InvalidArgument('Both states must be pure')
    if psi.n != psi_tilde.n:
        raise InvalidArgument(f'Qubit counts differ: {psi.n} vs {psi_tilde.n}')
    eta = max(0.0, 1.0 - abs(psi.overlap(psi_tilde)) ** 2)
    pi_a, pi_b = _paired_overlaps(psi, psi_tilde, seed, restarts)
    difference = abs(pi_a - pi_b)
    bound = 3.0 * math.sqrt(eta)
    return LemmaReport(
        lemma='geometric measure continuity',
        lhs=difference,
        rhs=bound,
        passed=difference <= bound + slack,
        details={'eta': eta, 'eg': 1.0 - pi_a, 'eg_tilde': 1.0 - pi_b, 'margin': bound - difference},
    )


def _nearby_state(psi, rng, scale):
    noise = rng.normal(size=psi.amplitudes.size) + 1j * rng.normal(size=psi.amplitudes.size)
    return PureState.from_vector(psi.amplitudes + scale * noise / np.linalg.norm(noise))


def sample_mass_concentration(trials=1000, max_n=4, seed=None):
    rng = make_rng(seed)
    summary = SamplingReport('mass concentration', seed=seed)
    for _ in range(trials):
        n = int(rng.integers(1, max_n + 1))
        psi = random_state(n, rng)
        terms = int(rng.integers(1, 6))
        pairs = [(w, _nearby_state(psi, rng, float(rng.uniform(0, 1.5)))) for w in rng.dirichlet(np.ones(terms))]
        summary.add(lemma_mass_concentration_check(Ensemble.normalized(pairs), psi, float(rng.uniform(1e-3, 1))))
    return summary


def sample_lipschitz(trials=1000, max_n=4, seed=None, restarts=SAMPLING_RESTARTS):
    rng = make_rng(seed)
    summary = SamplingReport('geometric measure continuity', seed=seed)
    for _ in range(trials):
        n = int(rng.integers(2, max_n + 1))
        psi = random_state(n, rng)
        tilde = _nearby_state(psi, rng, float(rng.uniform(0, 0.5)))
        summary.add(lemma_lipschitz_check(psi, tilde, int(rng.integers(0, 2 ** 63)), restarts))
    return summary


def sample_soundness(trials=100, max_n=3, eps=0.01, distance_kind='trace', seed=None,
                     restarts=SAMPLING_RESTARTS):
    """
    States within eps of psi keep a decomposition-relative E_G above the
    closed-form bound at eta(eps).

    sigma = (1 - q) psi + q phi with q chosen so that D(psi, sigma) = eps
    (or q = 1 when phi is already close enough).
    """
    eta = get_eta_map(distance_kind).eta(eps)
    rng = make_rng(seed)
    summary = SamplingReport('epsilon-ball soundness', seed=seed)
    for _ in range(trials):
        n = int(rng.integers(2, max_n + 1))
        psi, phi = random_state(n, rng), random_state(n, rng)
        stream = int(rng.integers(0, 2 ** 63))
        distance = trace_distance(psi, phi)
        q = 1.0 if distance <= eps else eps / distance
        eg_psi = 1.0 - product_overlap(psi, restarts, seed=stream).value
        eg_phi = 1.0 - product_overlap(phi, restarts, seed=stream).value
        upper = (1.0 - q) * eg_psi + q * eg_phi
        bound = eps_geo_closed_form(eg_psi, eta).value if eg_psi > 0 else 0.0
        summary.add(LemmaReport(
            lemma='epsilon-ball soundness',
            lhs=upper,
            rhs=bound,
            passed=upper >= bound - SOUNDNESS_SLACK,
            details={'q': q, 'eg': eg_psi, 'margin': upper - bound},
        ))
    return summary
