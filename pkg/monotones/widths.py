"""
Schmidt rank, entanglement entropy and the two tree-width monotones built
from them.
"""

import logging
import math

import numpy as np

from core.conf import get_setting
from core.exceptions import InvalidArgument
from qstate.states import Bipartition, check_dense_capacity, schmidt_coefficients
from .results import MonotoneKind, MonotoneResult
from .trees import check_tree_capacity, enumerate_subcubic_trees, tree_count

logger = logging.getLogger(__name__)


def schmidt_rank(psi, cut, rank_tol=None):
    """Number of Schmidt coefficients above rank_tol times the largest."""
    rank_tol = get_setting('MONOTONES_RANK_TOL') if rank_tol is None else float(rank_tol)
    if not rank_tol > 0:
        raise InvalidArgument(f'rank_tol must be positive, got {rank_tol}')
    coeffs = schmidt_coefficients(psi, cut)
    return int(np.count_nonzero(coeffs > rank_tol * coeffs[0]))


def entanglement_entropy(psi, cut):
    """Base-2 entropy of the squared Schmidt coefficients."""
    weights = schmidt_coefficients(psi, cut) ** 2
    weights = weights[weights > 1e-300]
    return max(0.0, float(-np.sum(weights * np.log2(weights))))


def mask_to_cut(mask, n):
    return Bipartition.of({q for q in range(n) if (mask >> q) & 1}, n)


def _tree_width(psi, score, method):
    """min over trees of max over edge cuts of `score`, with the first minimizing tree as witness."""
    n = psi.n
    if n < 2:
        raise InvalidArgument(f'Tree widths need at least 2 qubits, got {n}')
    check_dense_capacity(n)
    if n == 2:
        value = score(Bipartition.of({0}, 2))
        return MonotoneResult(
            value=value,
            kind=MonotoneKind.EXACT,
            method=method,
            details={'note': 'two qubits have a single bipartition; its score is returned'},
        )
    check_tree_capacity(n)

    cache = {}

    def cut_score(mask):
        if mask not in cache:
            cache[mask] = score(mask_to_cut(mask, n))
        return cache[mask]

    # Every tree contains the n leaf edges, so their worst score bounds each tree from below.
    lower = max(cut_score(((1 << n) - 1) ^ 1), *(cut_score(1 << q) for q in range(1, n)))
    best, witness, examined = math.inf, None, 0
    for tree in enumerate_subcubic_trees(n):
        examined += 1
        worst = 0
        for mask in tree.cut_masks:
            worst = max(worst, cut_score(mask))
            if worst >= best:
                break
        if worst < best:
            best, witness = worst, tree
            if best <= lower:
                break

    logger.debug(f'{method}: {examined} of {tree_count(n)} trees examined, {len(cache)} cuts scored')
    return MonotoneResult(
        value=best,
        kind=MonotoneKind.EXACT,
        method=method,
        iterations=examined,
        witness=witness,
        details={'trees_total': tree_count(n), 'cuts_scored': len(cache), 'leaf_lower_bound': lower},
    )


def schmidt_rank_width(psi, rank_tol=None):
    return _tree_width(psi, lambda cut: schmidt_rank(psi, cut, rank_tol), 'subcubic-tree-enumeration')


def entropic_entanglement_width(psi):
    return _tree_width(psi, lambda cut: entanglement_entropy(psi, cut), 'subcubic-tree-enumeration-entropy')
