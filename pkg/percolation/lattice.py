"""
Site-percolation lattices: sampling, cluster labelling and the left-right
crossing criterion.

Occupied sites are working qubits of a faulty 2D cluster; empty sites are
heralded holes.
"""

import logging
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from core.exceptions import InvalidArgument
from qstate.states import Graph

logger = logging.getLogger(__name__)

# Nearest-neighbour (4-)connectivity.
FOUR_CONNECTED = ndimage.generate_binary_structure(2, 1)


@dataclass(frozen=True, eq=False)
class Lattice:
    side: int
    occupancy: np.ndarray

    def __post_init__(self):
        occupancy = np.asarray(self.occupancy, dtype=bool)
        if occupancy.shape != (self.side, self.side):
            raise InvalidArgument(f'Occupancy must be {self.side}x{self.side}, got {occupancy.shape}')
        object.__setattr__(self, 'occupancy', occupancy)

    @classmethod
    def full(cls, side):
        return cls(side, np.ones((side, side), dtype=bool))

    @classmethod
    def empty(cls, side):
        return cls(side, np.zeros((side, side), dtype=bool))

    @property
    def occupied_fraction(self):
        return float(self.occupancy.mean())

    @property
    def holes(self):
        """Row-major indices of empty sites."""
        return np.flatnonzero(~self.occupancy.ravel()).tolist()


def check_site_probability(p_site):
    p_site = float(p_site)
    if not 0.0 <= p_site <= 1.0:
        raise InvalidArgument(f'Site probability must lie in [0, 1], got {p_site}')
    return p_site


def check_side(side):
    if side < 2:
        raise InvalidArgument(f'Lattice side must be at least 2, got {side}')
    return int(side)


def sample_lattice(side, p_site, rng):
    """Occupy every site independently with probability p_site."""
    side, p_site = check_side(side), check_site_probability(p_site)
    return Lattice(side, rng.random((side, side)) < p_site)


def label_clusters(lattice):
    """Cluster labels (0 = empty) and the number of clusters."""
    return ndimage.label(lattice.occupancy, structure=FOUR_CONNECTED)


def spans(lattice):
    """True iff an occupied 4-connected path joins the left and right columns."""
    labels, count = label_clusters(lattice)
    if count == 0:
        return False
    left = set(np.unique(labels[:, 0])) - {0}
    right = set(np.unique(labels[:, -1])) - {0}
    return bool(left & right)


def largest_cluster_fraction(lattice):
    """Size of the largest cluster over the number of sites."""
    labels, count = label_clusters(lattice)
    if count == 0:
        return 0.0
    sizes = np.bincount(labels.ravel())[1:]
    return float(sizes.max()) / labels.size


def lattice_to_graph(lattice):
    """
    Faulty cluster graph: the square grid with every hole deleted.

    Returns the relabelled graph and the site -> vertex mapping.
    """
    return Graph.grid(lattice.side).without_vertices(lattice.holes)
