"""
Necessary conditions for approximate and stochastic universality.

Every check is one-sided: ruled_out means a theorem's necessary condition
fails for the family, while not_ruled_out claims nothing about universality.
Required values are lower bounds and family values are known suprema, so a
verdict only rules a family out when the gap is certain.
"""

import logging
import math
from dataclasses import dataclass, field

from django.db import models
from scipy.optimize import bisect

from core.exceptions import InvalidArgument
from epsilon.bounds import VALIDITY_ETA, eps_geo_star_lower, get_eta_map, star_lower_value
from .registry import (
    CLUSTER_GROWTH,
    GrowthDescriptor,
    ScalingClass,
    get_family_descriptor,
    get_measure_entry,
    log_class,
    scaling_rank,
)

logger = logging.getLogger(__name__)

INSUFFICIENT_DATA = 'insufficient data'
W_SUPREMUM = 1 - 1 / math.e


class Decision(models.TextChoices):
    RULED_OUT = 'ruled_out', 'Ruled out'
    NOT_RULED_OUT = 'not_ruled_out', 'Not ruled out'


@dataclass
class Verdict:
    family: str
    epsilon: float
    delta: float
    measure: str
    family_value: float
    required_value: float
    decision: str
    trace: list = field(default_factory=list)
    note: str = ''

    @property
    def ruled_out(self):
        return self.decision == Decision.RULED_OUT

    def add_trace(self, quantity, value, provenance):
        self.trace.append({'quantity': quantity, 'value': value, 'provenance': provenance})


def _check_delta(delta):
    delta = float(delta)
    if not 0.0 <= delta <= 1.0:
        raise InvalidArgument(f'delta must lie in [0, 1], got {delta}')
    return delta


def _resolve_eta(eps, distance_kind, eta):
    if eta is None:
        if eps is None:
            raise InvalidArgument('Either eps or eta is required')
        eta = get_eta_map(distance_kind).eta(eps)
    eta = float(eta)
    if not eta > 0:
        raise InvalidArgument(
            f'The threshold criteria need eps > 0 (eps={eps!r} gives eta={eta!r}); '
            'the eps-supremum bound is only defined for eta > 0'
        )
    return eta


def _compare(family_value, required_value):
    return Decision.RULED_OUT if family_value < required_value else Decision.NOT_RULED_OUT


def _insufficient(verdict, reason):
    verdict.decision = Decision.NOT_RULED_OUT
    verdict.note = f'{INSUFFICIENT_DATA}: {reason}'
    logger.info(f'{verdict.family}/{verdict.measure}: {verdict.note}')
    return verdict


def _threshold_verdict(family, eps, delta, measure, eta, theorem):
    descriptor = get_family_descriptor(family)
    verdict = Verdict(family, eps, delta, measure, None, None, Decision.NOT_RULED_OUT)
    verdict.add_trace('eta', eta, 'epsilon.bounds.ETA_MAPS')

    if measure != 'geometric':
        return _insufficient(verdict, f'no finite lower bound on the eps-supremum of {measure}')
    star = eps_geo_star_lower(eta)
    required = star.value if delta == 0.0 else (1.0 - delta) * star.value
    verdict.required_value = required
    verdict.add_trace('E_eps* lower bound', star.value, '1 - 4 eta^(1/3) + 3.4 eta^(2/3)')
    if not star.validity_ok:
        verdict.add_trace('validity', False, f'eta above {VALIDITY_ETA}')
    if delta:
        verdict.add_trace('required (1 - delta) E_eps*', required, theorem)

    known = descriptor.supremum(measure)
    if known is None:
        return _insufficient(verdict, f'no known {measure} supremum for {family}')
    verdict.family_value = known.value
    verdict.add_trace(f'{measure} supremum of {family}', known.value, known.provenance)
    verdict.decision = _compare(known.value, required)
    logger.info(f'{theorem} for {family}: family {known.value!r} vs required {required!r} -> {verdict.decision}')
    return verdict


def check_approx_det(family, eps, measure='geometric', distance_kind='trace', eta=None):
    """E(family) >= E_eps* is necessary for eps-approximate deterministic universality."""
    get_measure_entry(measure).require('extendable', 'weakly_non_increasing',
                                       theorem='the approximate deterministic criterion')
    eta = _resolve_eta(eps, distance_kind, eta)
    return _threshold_verdict(family, eps, 0.0, measure, eta, 'approximate deterministic criterion')


def check_approx_stoch(family, eps, delta, measure='geometric', distance_kind='trace', eta=None):
    """E(family) >= (1 - delta) E_eps* is necessary for eps-approximate delta-stochastic universality."""
    get_measure_entry(measure).require('extendable', 'strong_monotone',
                                       theorem='the approximate stochastic criterion')
    delta = _check_delta(delta)
    eta = _resolve_eta(eps, distance_kind, eta)
    return _threshold_verdict(family, eps, delta, measure, eta, 'approximate stochastic criterion')


def check_unbounded_measure(family, measure='schmidt-rank-width', delta=0.0):
    """
    A measure whose eps-supremum diverges must be unbounded on any
    approximate stochastic universal family, for every delta < 1.
    """
    entry = get_measure_entry(measure)
    entry.require('extendable', 'strong_monotone', 'divergent_eps_star', theorem='the unbounded-measure criterion')
    delta = _check_delta(delta)
    if delta >= 1.0:
        raise InvalidArgument('The unbounded-measure criterion needs delta < 1')

    descriptor = get_family_descriptor(family)
    scaling = descriptor.scaling(measure)
    verdict = Verdict(family, None, delta, measure, None, None, Decision.NOT_RULED_OUT)
    verdict.add_trace('required', None, f'{measure} eps-supremum diverges as eps -> 0')
    verdict.add_trace(f'{measure} scaling of {family}', scaling.value, 'criteria.registry.FAMILY_DESCRIPTORS')
    if scaling == ScalingClass.UNKNOWN:
        return _insufficient(verdict, f'no declared {measure} scaling for {family}')
    if scaling == ScalingClass.CONSTANT:
        known = descriptor.supremum(measure)
        if known is not None:
            verdict.family_value = known.value
            verdict.add_trace(f'{measure} supremum of {family}', known.value, known.provenance)
        verdict.decision = Decision.RULED_OUT
    return verdict


def check_efficiency(family, measure='schmidt-rank-width', growth=None):
    """
    A family whose measure grows strictly slower than log f_eps(N) cannot be
    an efficient approximate stochastic universal resource.

    Values in the verdict are positions in the growth order.
    """
    get_measure_entry(measure).require('extendable', 'strong_monotone', theorem='the efficiency criterion')
    growth = growth or CLUSTER_GROWTH.get(measure)
    descriptor = get_family_descriptor(family)
    scaling = descriptor.scaling(measure)
    verdict = Verdict(family, None, None, measure, None, None, Decision.NOT_RULED_OUT)
    verdict.add_trace(f'{measure} scaling of {family}', scaling.value, 'criteria.registry.FAMILY_DESCRIPTORS')

    if growth is None:
        return _insufficient(verdict, f'no declared f_eps growth for {measure}')
    if isinstance(growth, str):
        growth = GrowthDescriptor(measure, ScalingClass(growth), 'user override')
    target = log_class(growth.scaling_class)
    verdict.add_trace('f_eps growth', ScalingClass(growth.scaling_class).value, growth.provenance)
    verdict.add_trace('log f_eps growth', target.value, 'criteria.registry.LOG_CLASS')

    family_rank, target_rank = scaling_rank(scaling), scaling_rank(target)
    if family_rank is None or target_rank is None:
        return _insufficient(verdict, 'growth classes are not comparable')
    verdict.family_value = float(family_rank)
    verdict.required_value = float(target_rank)
    verdict.decision = _compare(family_rank, target_rank)
    return verdict


def w_threshold_eta():
    """Smallest eta at which the star bound drops to the W-family supremum 1 - 1/e."""
    upper = (4.0 / 6.8) ** 3
    return bisect(lambda eta: star_lower_value(eta) - W_SUPREMUM, 1e-12, upper, xtol=1e-16, rtol=1e-15)


def required_fidelity(eps, delta):
    """Fidelity (1 - eps)(1 - delta) a protocol must reach on average."""
    eps, delta = float(eps), _check_delta(delta)
    if not 0.0 <= eps <= 1.0:
        raise InvalidArgument(f'eps must lie in [0, 1], got {eps}')
    return (1.0 - eps) * (1.0 - delta)
