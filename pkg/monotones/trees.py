"""
Leaf-labelled subcubic trees.

Leaves 0..n-1 are the qubits; internal vertices are labelled n, n+1, ...
Trees are grown by inserting leaf k into every edge of every tree on the
first k leaves, which yields each of the (2n-5)!! trees exactly once.
"""

import logging
from dataclasses import dataclass
from functools import cached_property

import networkx as nx

from core.conf import get_setting
from core.exceptions import CapacityError, InvalidArgument

logger = logging.getLogger(__name__)


def tree_count(n):
    """(2n-5)!!, the number of leaf-labelled subcubic trees on n >= 3 leaves."""
    count = 1
    for odd in range(3, 2 * n - 4, 2):
        count *= odd
    return count


@dataclass(frozen=True)
class SubcubicTree:
    n: int
    edges: tuple

    @property
    def internal_vertices(self):
        return self.n - 2

    @property
    def leaves(self):
        return tuple(range(self.n))

    def to_networkx(self):
        g = nx.Graph()
        g.add_nodes_from(range(self.n + self.internal_vertices))
        g.add_edges_from(self.edges)
        return g

    def is_valid(self):
        """Connected, acyclic, leaves exactly 0..n-1 and every other vertex of degree 3."""
        g = self.to_networkx()
        if not nx.is_tree(g):
            return False
        leaves = sorted(v for v, d in g.degree if d == 1)
        inner_ok = all(d == 3 for v, d in g.degree if v >= self.n)
        return leaves == list(range(self.n)) and inner_ok

    @cached_property
    def cut_masks(self):
        """
        Bitmask (bit q = qubit q) of the side without leaf 0, one per edge.

        The tree is rooted at leaf 0; each edge separates the leaves below
        its lower endpoint from the rest.
        """
        adjacency = {}
        for u, v in self.edges:
            adjacency.setdefault(u, []).append(v)
            adjacency.setdefault(v, []).append(u)
        order, parent = [0], {0: None}
        for vertex in order:
            for nxt in adjacency[vertex]:
                if nxt not in parent:
                    parent[nxt] = vertex
                    order.append(nxt)
        below = {}
        for vertex in reversed(order):
            mask = (1 << vertex) if vertex < self.n and vertex != 0 else 0
            for nxt in adjacency[vertex]:
                if parent.get(nxt) == vertex:
                    mask |= below[nxt]
            below[vertex] = mask
        return tuple(below[v] for v in order[1:])


def check_tree_capacity(n):
    cap = get_setting('MONOTONES_TREE_CAP')
    if n > cap:
        raise CapacityError('tree enumeration leaves', n, cap)


def enumerate_subcubic_trees(n):
    """Yield every leaf-labelled subcubic tree on n leaves, in insertion order."""
    if n < 3:
        raise InvalidArgument(f'Subcubic trees need at least 3 leaves, got {n}')
    check_tree_capacity(n)
    logger.debug(f'Enumerating {tree_count(n)} subcubic trees on {n} leaves')

    def grow(edges, k):
        if k == n:
            yield SubcubicTree(n, tuple(sorted(edges)))
            return
        w = n + k - 2
        for i, (u, v) in enumerate(edges):
            yield from grow(edges[:i] + edges[i + 1:] + [(u, w), (v, w), (k, w)], k + 1)

    yield from grow([(0, n), (1, n), (2, n)], 3)
