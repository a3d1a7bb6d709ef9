"""
Named state families and finite-size family suprema.
"""

import logging
from dataclasses import dataclass

from core.exceptions import InvalidArgument
from qstate.operations import basis_state
from qstate.states import Graph, make_deformed_cluster, make_ghz, make_graph_state, make_w_state
from .geometric import geometric_measure, product_overlap
from .results import MonotoneKind, MonotoneResult
from .widths import entropic_entanglement_width, schmidt_rank_width

logger = logging.getLogger(__name__)

DEFAULT_DEFORMATION = 0.8


@dataclass(frozen=True)
class StateFamily:
    """A family of states indexed by an integer size."""

    name: str
    builder: object
    min_size: int
    description: str

    def build(self, size, **params):
        if size < self.min_size:
            raise InvalidArgument(f'Family {self.name!r} starts at size {self.min_size}, got {size}')
        return self.builder(size, **params)


def _deformed(size, lam=DEFAULT_DEFORMATION, **params):
    return make_deformed_cluster(Graph.grid(size), lam)


FAMILIES = {
    'w': StateFamily('w', lambda n, **_: make_w_state(n), 2, 'W state on n qubits'),
    'ghz': StateFamily('ghz', lambda n, **_: make_ghz(n), 2, 'GHZ state on n qubits'),
    'cluster-1d': StateFamily('cluster-1d', lambda n, **_: make_graph_state(Graph.path(n)), 2,
                              '1D cluster on n qubits'),
    'cluster-2d': StateFamily('cluster-2d', lambda d, **_: make_graph_state(Graph.grid(d)), 2,
                              'd x d cluster'),
    'deformed-cluster': StateFamily('deformed-cluster', _deformed, 2, 'd x d cluster filtered by diag(1, lambda)'),
    'product': StateFamily('product', lambda n, **_: basis_state([0] * n), 1, '|0...0> on n qubits'),
    'stripe': StateFamily('stripe', lambda d, **_: make_graph_state(Graph.stripe(d)), 2,
                          'd x ceil(log2 d) cluster stripe'),
}

MEASURES = {
    'geometric': lambda psi, **kw: geometric_measure(psi, kw.get('restarts'), kw.get('tol'), kw.get('seed'),
                                                     threads=kw.get('threads', 1)),
    'product-overlap': lambda psi, **kw: product_overlap(psi, kw.get('restarts'), kw.get('tol'), kw.get('seed'),
                                                         threads=kw.get('threads', 1)),
    'schmidt-rank-width': lambda psi, **kw: schmidt_rank_width(psi, kw.get('rank_tol')),
    'entropic-width': lambda psi, **kw: entropic_entanglement_width(psi),
}


def get_family(name):
    try:
        return FAMILIES[name]
    except KeyError:
        raise InvalidArgument(f'Unknown family {name!r}; choose from {sorted(FAMILIES)}')


def get_measure(name):
    try:
        return MEASURES[name]
    except KeyError:
        raise InvalidArgument(f'Unknown measure {name!r}; choose from {sorted(MEASURES)}')


def w_product_overlap(n):
    """Closed form (1 - 1/n)^(n-1) of the W-state product overlap."""
    return (1.0 - 1.0 / n) ** (n - 1)


def family_supremum(family, measure, size_cap, lam=DEFAULT_DEFORMATION, **measure_options):
    """
    Largest measure value over family members of size min_size..size_cap.

    This is a lower bound on the true supremum; the per-size values are
    attached so callers can judge the trend.
    """
    fam = get_family(family)
    evaluate = get_measure(measure)
    if size_cap < fam.min_size:
        raise InvalidArgument(f'size_cap must be at least {fam.min_size} for family {family!r}')

    per_size = []
    for size in range(fam.min_size, size_cap + 1):
        psi = fam.build(size, lam=lam)
        if psi.n < 2 and measure in ('schmidt-rank-width', 'entropic-width'):
            continue
        result = evaluate(psi, **measure_options)
        per_size.append({'size': size, 'qubits': psi.n, 'value': result.value, 'kind': result.kind})
        logger.debug(f'{family} size {size}: {measure} = {result.value!r}')

    if not per_size:
        raise InvalidArgument(f'No member of {family!r} up to size {size_cap} can be measured with {measure!r}')
    best = max(per_size, key=lambda entry: entry['value'])
    return MonotoneResult(
        value=best['value'],
        kind=MonotoneKind.LOWER_BOUND,
        method='family-supremum over generated members up to size cap',
        iterations=len(per_size),
        details={'family': family, 'measure': measure, 'size_cap': size_cap, 'per_size': per_size},
    )
