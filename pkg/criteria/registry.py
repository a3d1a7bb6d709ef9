"""
Measure and family descriptors the universality criteria reason about.

Measures carry the axiom flags a theorem needs before it may be applied;
families carry known suprema and declared growth classes per measure.
"""

import logging
import math
from dataclasses import dataclass, field

from django.db import models

from core.exceptions import HypothesisError, InvalidArgument
from monotones.families import FAMILIES, family_supremum

logger = logging.getLogger(__name__)


class ScalingClass(models.TextChoices):
    CONSTANT = 'constant', 'Bounded'
    LOGARITHMIC = 'logarithmic', 'O(log N)'
    POLYLOG = 'polylog', 'polylog(N)'
    POLYNOMIAL = 'polynomial', 'poly(N)'
    EXP_SQRT = 'exp_sqrt', 'exp(sqrt N)'
    EXPONENTIAL = 'exponential', 'exp(N)'
    UNKNOWN = 'unknown', 'Unknown'


# Growth order; UNKNOWN is incomparable with everything.
SCALING_ORDER = [
    ScalingClass.CONSTANT,
    ScalingClass.LOGARITHMIC,
    ScalingClass.POLYLOG,
    ScalingClass.POLYNOMIAL,
    ScalingClass.EXP_SQRT,
    ScalingClass.EXPONENTIAL,
]

# Class of log f(N) given the class of f(N).
LOG_CLASS = {
    ScalingClass.EXPONENTIAL: ScalingClass.POLYNOMIAL,
    ScalingClass.EXP_SQRT: ScalingClass.POLYNOMIAL,
    ScalingClass.POLYNOMIAL: ScalingClass.LOGARITHMIC,
    ScalingClass.POLYLOG: ScalingClass.LOGARITHMIC,
    ScalingClass.LOGARITHMIC: ScalingClass.CONSTANT,
}


def scaling_rank(scaling_class):
    """Position in SCALING_ORDER, or None for UNKNOWN."""
    scaling_class = ScalingClass(scaling_class)
    if scaling_class == ScalingClass.UNKNOWN:
        return None
    return SCALING_ORDER.index(scaling_class)


def log_class(scaling_class):
    return LOG_CLASS.get(ScalingClass(scaling_class), ScalingClass.UNKNOWN)


@dataclass(frozen=True)
class MeasureEntry:
    """An entanglement measure with the axiom flags the theorems check."""

    name: str
    vanishes_on_product: bool = False
    lu_invariant: bool = False
    strong_monotone: bool = False
    extendable: bool = False
    weakly_non_increasing: bool = False
    divergent_eps_star: bool = False
    theorem_use: bool = True
    note: str = ''

    def require(self, *flags, theorem=''):
        """Raise HypothesisError naming the first missing flag."""
        if not self.theorem_use:
            raise HypothesisError(f'{self.name} usable in criteria', f'{self.name} cannot be used in {theorem}: {self.note}')
        for flag in flags:
            if not getattr(self, flag):
                raise HypothesisError(
                    f'{self.name} is {flag.replace("_", " ")}',
                    f'{theorem} requires a measure that is {flag.replace("_", " ")}; {self.name} is not',
                )


MEASURE_REGISTRY = {
    'geometric': MeasureEntry(
        'geometric',
        vanishes_on_product=True,
        lu_invariant=True,
        strong_monotone=True,
        extendable=True,
        weakly_non_increasing=True,
        note='Strong monotone; weak non-increase follows',
    ),
    'schmidt-rank-width': MeasureEntry(
        'schmidt-rank-width',
        vanishes_on_product=True,
        lu_invariant=True,
        strong_monotone=True,
        extendable=True,
        weakly_non_increasing=True,
        divergent_eps_star=True,
        note='Its eps-supremum diverges as eps goes to 0',
    ),
    'entropic-width': MeasureEntry(
        'entropic-width',
        lu_invariant=True,
        vanishes_on_product=True,
        theorem_use=False,
        note='not an entanglement monotone; approximate results are not known to lift to it',
    ),
}


def get_measure_entry(name):
    try:
        return MEASURE_REGISTRY[name]
    except KeyError:
        raise InvalidArgument(f'Unknown measure {name!r}; choose from {sorted(MEASURE_REGISTRY)}')


@dataclass(frozen=True)
class KnownValue:
    value: float
    provenance: str


@dataclass(frozen=True)
class FamilyDescriptor:
    """
    A resource family: generator name, closed-form suprema and declared
    growth classes, keyed by measure name.
    """

    name: str
    generator: str
    known_supremum: dict = field(default_factory=dict)
    scaling_class: dict = field(default_factory=dict)

    def supremum(self, measure):
        return self.known_supremum.get(measure)

    def scaling(self, measure):
        return ScalingClass(self.scaling_class.get(measure, ScalingClass.UNKNOWN))


_BOUNDED_WIDTH = KnownValue(2.0, 'Every bipartite cut has Schmidt rank at most 2')

FAMILY_DESCRIPTORS = {
    'w': FamilyDescriptor(
        'w', 'w',
        known_supremum={
            'geometric': KnownValue(1 - 1 / math.e, 'limit of 1 - (1 - 1/N)^(N-1)'),
            'schmidt-rank-width': _BOUNDED_WIDTH,
        },
        scaling_class={'geometric': ScalingClass.CONSTANT, 'schmidt-rank-width': ScalingClass.CONSTANT},
    ),
    'ghz': FamilyDescriptor(
        'ghz', 'ghz',
        known_supremum={
            'geometric': KnownValue(0.5, 'Largest overlap 1/2 with |0...0> or |1...1>'),
            'schmidt-rank-width': _BOUNDED_WIDTH,
        },
        scaling_class={'geometric': ScalingClass.CONSTANT, 'schmidt-rank-width': ScalingClass.CONSTANT},
    ),
    'cluster-1d': FamilyDescriptor(
        'cluster-1d', 'cluster-1d',
        known_supremum={
            'geometric': KnownValue(1.0, 'E_G of the M-qubit line is 1 - 2^(-floor(M/2))'),
            'schmidt-rank-width': _BOUNDED_WIDTH,
        },
        scaling_class={'geometric': ScalingClass.CONSTANT, 'schmidt-rank-width': ScalingClass.CONSTANT},
    ),
    'cluster-2d': FamilyDescriptor(
        'cluster-2d', 'cluster-2d',
        known_supremum={'geometric': KnownValue(1.0, 'Contains every 1D cluster after local Z measurements')},
        scaling_class={'geometric': ScalingClass.CONSTANT, 'schmidt-rank-width': ScalingClass.EXP_SQRT},
    ),
    'stripe': FamilyDescriptor(
        'stripe', 'stripe',
        known_supremum={'geometric': KnownValue(1.0, 'Contains every 1D cluster after local Z measurements')},
        scaling_class={'geometric': ScalingClass.CONSTANT, 'schmidt-rank-width': ScalingClass.POLYLOG},
    ),
    'product': FamilyDescriptor(
        'product', 'product',
        known_supremum={
            'geometric': KnownValue(0.0, 'Product states'),
            'schmidt-rank-width': KnownValue(1.0, 'Product states'),
        },
        scaling_class={'geometric': ScalingClass.CONSTANT, 'schmidt-rank-width': ScalingClass.CONSTANT},
    ),
    'deformed-cluster': FamilyDescriptor('deformed-cluster', 'deformed-cluster'),
}


def get_family_descriptor(name):
    try:
        return FAMILY_DESCRIPTORS[name]
    except KeyError:
        raise InvalidArgument(f'Unknown family {name!r}; choose from {sorted(FAMILY_DESCRIPTORS)}')


@dataclass(frozen=True)
class GrowthDescriptor:
    """Declared growth class of f_eps(N) for the universal reference family."""

    measure: str
    scaling_class: str
    provenance: str


# Overridable: only the exact-case scaling of the 2D cluster is known.
CLUSTER_GROWTH = {
    'schmidt-rank-width': GrowthDescriptor(
        'schmidt-rank-width',
        ScalingClass.EXP_SQRT,
        'No explicit f_eps is known; class taken from the exact-case 2D cluster width 2^Theta(sqrt N)',
    ),
}


def scaling_consistency(name, measure, size_cap, **measure_options):
    """
    Compare a family's declared growth class with its generated members.

    Declared-constant families must stay within their known supremum; growing
    classes must produce a non-decreasing sequence that actually grows.
    Returns a dict with 'consistent' and the per-size values.
    """
    descriptor = get_family_descriptor(name)
    if descriptor.generator not in FAMILIES:
        raise InvalidArgument(f'Family {name!r} has no generator')
    declared = descriptor.scaling(measure)
    result = family_supremum(descriptor.generator, measure, size_cap, **measure_options)
    values = [entry['value'] for entry in result.details['per_size']]
    known = descriptor.supremum(measure)

    if declared == ScalingClass.UNKNOWN:
        consistent = True
    elif declared == ScalingClass.CONSTANT:
        consistent = known is None or max(values) <= known.value + 1e-6
    else:
        consistent = (all(a <= b + 1e-9 for a, b in zip(values, values[1:]))
                      and (len(values) < 2 or values[-1] > values[0]))
    if not consistent:
        logger.warning(f'{name} values {values} do not fit the declared {declared} class for {measure}')
    return {'family': name, 'measure': measure, 'declared': declared.value, 'consistent': consistent,
            'values': values}
